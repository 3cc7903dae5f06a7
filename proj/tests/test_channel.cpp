// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#include "thzcov/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace thzcov::channel;

TEST_CASE("free space constant at 1 THz") {
    SystemParams p;
    CHECK(p.c_const() == doctest::Approx(5.692e-10).epsilon(2e-4));
    // scales with inverse square frequency
    SystemParams half = p;
    half.freq = 0.5e12;
    CHECK(half.c_const() == doctest::Approx(4.0 * p.c_const()).epsilon(1e-12));
}

TEST_CASE("path loss pinned value and shape") {
    SystemParams p;
    CHECK(path_loss(p, 10.0) == doctest::Approx(9.878e-13).epsilon(2e-4));
    // strictly decreasing
    double prev = path_loss(p, 0.5);
    for (double d = 1.0; d < 300.0; d *= 1.7) {
        const double v = path_loss(p, d);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(path_loss(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(path_loss(p, -1.0), std::domain_error);
}

TEST_CASE("gamma fading moments") {
    SystemParams p;
    p.fading_shape = 3.0;
    p.fading_scale = 1.0 / 3.0;
    // unit-mean convention: E[xi] = m Omega = 1, E[xi^2] = m(m+1) Omega^2
    CHECK(fading_moment(p, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fading_moment(p, 2) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(std::exp(log_fading_moment(p, 1)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::exp(log_fading_moment(p, 4)) ==
          doctest::Approx(3.0 * 4.0 * 5.0 * 6.0 / 81.0).epsilon(1e-12));
}

TEST_CASE("fading sampler matches the exponential special case") {
    // m = 1, Omega = 1 is Exp(1); Kolmogorov-Smirnov against the exact CDF
    SystemParams p;
    std::mt19937_64 rng(17);
    const long n = 100000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_fading(p, rng);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (long i = 0; i < n; ++i) {
        const double cdf = 1.0 - std::exp(-xs[i]);
        d = std::max(d, std::abs(cdf - (i + 1.0) / n));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    }
    // KS critical value at p = 0.001
    CHECK(d < 1.95 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("fading sampler moments for general shape") {
    SystemParams p;
    p.fading_shape = 2.5;
    p.fading_scale = 0.4;
    std::mt19937_64 rng(23);
    const long n = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const double x = sample_fading(p, rng);
        s1 += x;
        s2 += x * x;
    }
    CHECK(s1 / n == doctest::Approx(fading_moment(p, 1)).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(fading_moment(p, 2)).epsilon(0.02));
}

TEST_CASE("blockage survival") {
    SystemParams p;
    CHECK(los_probability(p, 0.0) == 1.0);
    CHECK(los_probability(p, 141.4) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(los_probability(p, 1414.0) ==
          doctest::Approx(std::exp(-10.0)).epsilon(1e-12));
}

TEST_CASE("parameter validation names the violated field") {
    SystemParams p;
    CHECK_NOTHROW(validate(p));
    auto expect_throw = [](SystemParams bad, const char* needle) {
        try {
            validate(bad);
            FAIL_CHECK("expected invalid_argument for ", needle);
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    SystemParams bad = p;
    bad.p_tx = 0.0;
    expect_throw(bad, "p_tx");
    bad = p;
    bad.pathloss_exp = 2.0;
    expect_throw(bad, "pathloss_exp");
    bad = p;
    bad.absorption = 0.0;
    expect_throw(bad, "absorption");
    bad = p;
    bad.bs_density = -1.0;
    expect_throw(bad, "bs_density");
    bad = p;
    bad.blockage_rate = 0.0;
    expect_throw(bad, "blockage_rate");
    bad = p;
    bad.fading_shape = 0.25;
    expect_throw(bad, "fading_shape");
    bad = p;
    bad.noise_power = -1e-12;
    expect_throw(bad, "noise_power");
}
