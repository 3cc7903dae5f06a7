// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#include "thzcov/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace thzcov::channel {

namespace {
constexpr double kLightSpeed = 299792458.0;  // m/s
}

double SystemParams::c_const() const {
    const double w = kLightSpeed / (4.0 * std::numbers::pi * freq);
    return w * w;
}

void validate(const SystemParams& params) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(params.p_tx > 0.0, "SystemParams: p_tx must be > 0");
    require(params.freq > 0.0, "SystemParams: freq must be > 0");
    require(params.pathloss_exp > 2.0, "SystemParams: pathloss_exp must be > 2");
    require(params.absorption > 0.0, "SystemParams: absorption must be > 0");
    require(params.bs_density > 0.0, "SystemParams: bs_density must be > 0");
    require(params.blockage_rate > 0.0,
            "SystemParams: blockage_rate must be > 0");
    require(params.fading_shape >= 0.5,
            "SystemParams: fading_shape must be >= 0.5");
    require(params.fading_scale > 0.0, "SystemParams: fading_scale must be > 0");
    require(params.noise_power >= 0.0,
            "SystemParams: noise_power must be >= 0");
}

double path_loss(const SystemParams& params, double dist) {
    if (!(dist > 0.0)) throw std::domain_error("path_loss: requires dist > 0");
    return params.c_const() * std::pow(dist, -params.pathloss_exp) *
           std::exp(-params.absorption * dist);
}

double fading_moment(const SystemParams& params, int order) {
    const double m = params.fading_shape;
    const double omega = params.fading_scale;
    switch (order) {
        case 1:
            return m * omega;
        case 2:
            return m * (m + 1.0) * omega * omega;
        default:
            throw std::invalid_argument("fading_moment: order must be 1 or 2");
    }
}

double log_fading_moment(const SystemParams& params, int n) {
    if (n < 1) throw std::invalid_argument("log_fading_moment: n must be >= 1");
    const double m = params.fading_shape;
    return n * std::log(params.fading_scale) + std::lgamma(m + n) -
           std::lgamma(m);
}

double sample_fading(const SystemParams& params, std::mt19937_64& rng) {
    std::gamma_distribution<double> gamma(params.fading_shape,
                                          params.fading_scale);
    return gamma(rng);
}

double los_probability(const SystemParams& params, double dist) {
    if (!(dist >= 0.0)) {
        throw std::domain_error("los_probability: requires dist >= 0");
    }
    return std::exp(-params.blockage_rate * dist);
}

}  // namespace thzcov::channel
