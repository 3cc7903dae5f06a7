// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#include "thzcov/antenna.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "thzcov/units.hpp"

using namespace thzcov;
using namespace thzcov::antenna;

TEST_CASE("eight element array geometry") {
    const auto a = derive_array(8.0, 0.0);
    CHECK(a.beamwidth == doctest::Approx(0.221838).epsilon(1e-5));
    CHECK(a.gain_main == doctest::Approx(16.0160).epsilon(1e-4));
    CHECK(a.gain_side == doctest::Approx(0.450436).epsilon(1e-4));
    // main/side ratio equals the sector factor N^2 sin(3 pi / (2 N))
    CHECK(a.gain_main / a.gain_side ==
          doctest::Approx(35.55649).epsilon(1e-5));
}

TEST_CASE("mean gain over the circle is isotropic") {
    for (const double n : {2.0, 4.0, 8.0, 16.0, 64.0, 256.0}) {
        const auto a = derive_array(n, 0.0);
        const double mean =
            (a.beamwidth * a.gain_main +
             (2.0 * std::numbers::pi - a.beamwidth) * a.gain_side) /
            (2.0 * std::numbers::pi);
        CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(a.gain_main > a.gain_side);
    }
}

TEST_CASE("beamwidth parameterized array inverts the element count") {
    const auto base = derive_array(8.0, 0.1);
    const auto from_theta = derive_array_from_beamwidth(base.beamwidth, 0.1);
    CHECK(from_theta.n_elements == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(from_theta.gain_main == doctest::Approx(base.gain_main).epsilon(1e-12));
    CHECK(from_theta.gain_side == doctest::Approx(base.gain_side).epsilon(1e-12));
}

TEST_CASE("misalignment probability") {
    const auto a = derive_array(8.0, units::deg_to_rad(10.0));
    CHECK(misalignment_prob(a.beamwidth, a.sigma_err) ==
          doctest::Approx(0.3690).epsilon(1e-3));
    // zero pointing error never misses
    CHECK(misalignment_prob(a.beamwidth, 0.0) == 0.0);
    // wider beams miss less
    double prev = 1.0;
    for (double n = 32.0; n >= 2.0; n /= 2.0) {
        const double p =
            misalignment_prob(derive_array(n, 0.0).beamwidth,
                              units::deg_to_rad(10.0));
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("gain pmfs are distributions") {
    const auto bs = derive_array(8.0, units::deg_to_rad(10.0));
    const auto ue = derive_array(16.0, units::deg_to_rad(5.0));
    for (const auto& dist :
         {serving_gain_distribution(bs, ue), interferer_gain_distribution(bs, ue)}) {
        double total = 0.0;
        for (const auto& s : dist.states) {
            CHECK(s.prob >= 0.0);
            CHECK(s.gain > 0.0);
            total += s.prob;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("interferer main lobe probability") {
    const auto bs = derive_array(8.0, 0.0);
    const auto dist = interferer_gain_distribution(bs, bs);
    // both-main state: (theta / 2 pi)^2
    CHECK(dist.states[0].prob == doctest::Approx(1.2466e-3).epsilon(1e-3));
    CHECK(dist.states[0].gain ==
          doctest::Approx(bs.gain_main * bs.gain_main).epsilon(1e-12));
}

TEST_CASE("gain moments match the pmf") {
    const auto bs = derive_array(8.0, units::deg_to_rad(10.0));
    const auto ue = derive_array(8.0, units::deg_to_rad(10.0));
    const auto dist = serving_gain_distribution(bs, ue);
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (const auto& s : dist.states) {
        m1 += s.prob * s.gain;
        m2 += s.prob * s.gain * s.gain;
        m3 += s.prob * s.gain * s.gain * s.gain;
    }
    CHECK(gain_moment(dist, 1) == doctest::Approx(m1).epsilon(1e-14));
    CHECK(gain_moment(dist, 2) == doctest::Approx(m2).epsilon(1e-14));
    CHECK(gain_moment_n(dist, 3) == doctest::Approx(m3).epsilon(1e-14));
}

TEST_CASE("gain sampling follows the pmf") {
    const auto bs = derive_array(8.0, units::deg_to_rad(10.0));
    const auto dist = serving_gain_distribution(bs, bs);
    std::mt19937_64 rng(3);
    std::array<long, 4> counts{};
    const long n = 200000;
    for (long i = 0; i < n; ++i) {
        const auto [state, gain] = sample_gain(dist, rng);
        REQUIRE(state >= 0);
        REQUIRE(state < 4);
        CHECK(gain == dist.states[state].gain);
        ++counts[state];
    }
    double chi2 = 0.0;
    for (int s = 0; s < 4; ++s) {
        const double expect = dist.states[s].prob * n;
        chi2 += (counts[s] - expect) * (counts[s] - expect) / expect;
    }
    CHECK(chi2 < 16.27);  // chi-square 3 dof, p = 0.001
}

TEST_CASE("misalignment draws realize the closed form probability") {
    const auto a = derive_array(8.0, units::deg_to_rad(10.0));
    std::mt19937_64 rng(5);
    long missed = 0;
    const long n = 200000;
    for (long i = 0; i < n; ++i) {
        if (draw_misaligned(a, rng)) ++missed;
    }
    const double p = misalignment_prob(a.beamwidth, a.sigma_err);
    const double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(static_cast<double>(missed) / n - p) < 4.0 * se);
}

TEST_CASE("misalignment samples stay within the truncation and match scale") {
    const double sigma = units::deg_to_rad(20.0);
    std::mt19937_64 rng(9);
    double sum_sq = 0.0;
    const long n = 100000;
    for (long i = 0; i < n; ++i) {
        const double e = sample_misalignment(sigma, rng);
        REQUIRE(std::abs(e) <= std::numbers::pi);
        sum_sq += e * e;
    }
    // truncation at +-pi removes ~0 mass at 20 degrees
    CHECK(std::sqrt(sum_sq / n) == doctest::Approx(sigma).epsilon(0.02));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(derive_array(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(derive_array(1.5, 0.0), std::invalid_argument);
    // 80 degrees implies fewer than 1.5 elements
    CHECK_THROWS_AS(derive_array_from_beamwidth(1.40, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(derive_array(8.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(derive_array_from_beamwidth(0.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(derive_array_from_beamwidth(3.5, 0.0),
                    std::invalid_argument);
}
