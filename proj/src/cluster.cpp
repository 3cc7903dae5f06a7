// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#include "thzcov/cluster.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "thzcov/specfun.hpp"

namespace thzcov::cluster {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Integral of the LOS-thinned radial intensity, 2 pi lambda int_0^d t e^-bt dt
// = (2 pi lambda / b^2)(1 - (1 + b d) e^-bd); the exponent of the
// nearest-LOS-BS void probability.
double los_mass_within(const channel::SystemParams& params, double d) {
    const double b = params.blockage_rate;
    const double bd = b * d;
    return kTwoPi * params.bs_density / (b * b) *
           (1.0 - (1.0 + bd) * std::exp(-bd));
}

}  // namespace

void validate(const ClusterConfig& cfg) {
    if (!(cfg.delta > 0.0) || !(cfg.delta <= 1.0)) {
        throw std::invalid_argument("ClusterConfig: delta must lie in (0, 1]");
    }
}

double ref_distance_from_power(const channel::SystemParams& params,
                               const antenna::ArrayConfig& bs,
                               const antenna::ArrayConfig& ue, double tau) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("ref_distance_from_power: tau must be > 0");
    }
    const double alpha = params.pathloss_exp;
    const double ka = params.absorption;
    const double budget = params.c_const() * bs.gain_main * ue.gain_main *
                          params.p_tx / tau;
    if (!(budget > 0.0)) {
        throw std::invalid_argument(
            "ref_distance_from_power: nonpositive link budget");
    }
    const double root = std::pow(budget, 1.0 / alpha);
    if (ka * root / alpha < 1e-12) {
        return root;  // absorption-free limit: pure power-law inversion
    }
    return alpha / ka * specfun::lambert_w0(ka / alpha * root);
}

double los_void_probability(const channel::SystemParams& params) {
    const double b = params.blockage_rate;
    return std::exp(-kTwoPi * params.bs_density / (b * b));
}

double nearest_los_survival(const channel::SystemParams& params, double d) {
    if (!(d >= 0.0)) {
        throw std::domain_error("nearest_los_survival: requires d >= 0");
    }
    return std::exp(-los_mass_within(params, d));
}

double cluster_radius_pdf(const channel::SystemParams& params,
                          const ClusterConfig& cfg, double radius,
                          bool renormalized) {
    validate(cfg);
    if (!(radius >= 0.0)) {
        throw std::domain_error("cluster_radius_pdf: requires radius >= 0");
    }
    const double d = cfg.delta;
    const double r = d * radius;  // nearest-LOS-BS distance
    const double density = kTwoPi * params.bs_density * d * d * radius *
                           std::exp(-params.blockage_rate * r) *
                           std::exp(-los_mass_within(params, r));
    if (!renormalized) return density;
    return density / (1.0 - los_void_probability(params));
}

double cluster_radius_cdf(const channel::SystemParams& params,
                          const ClusterConfig& cfg, double radius) {
    validate(cfg);
    if (!(radius >= 0.0)) {
        throw std::domain_error("cluster_radius_cdf: requires radius >= 0");
    }
    const double hit = 1.0 - nearest_los_survival(params, cfg.delta * radius);
    return hit / (1.0 - los_void_probability(params));
}

double cluster_radius_tail_cutoff(const channel::SystemParams& params,
                                  const ClusterConfig& cfg, double tail_mass) {
    validate(cfg);
    if (!(tail_mass > 0.0) || !(tail_mass < 1.0)) {
        throw std::invalid_argument(
            "cluster_radius_tail_cutoff: tail_mass must lie in (0, 1)");
    }
    double lo = 0.0;
    double hi = 1.0;
    while (1.0 - cluster_radius_cdf(params, cfg, hi) > tail_mass) {
        hi *= 2.0;
        if (hi > 1e9) break;  // survival saturates at the void mass
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (1.0 - cluster_radius_cdf(params, cfg, mid) > tail_mass) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-9 * (1.0 + hi)) break;
    }
    return hi;
}

double in_cluster_count_mean(const channel::SystemParams& params,
                             const ClusterConfig& cfg, double radius,
                             CountModel model) {
    validate(cfg);
    if (!(radius >= 0.0)) {
        throw std::domain_error("in_cluster_count_mean: requires radius >= 0");
    }
    const double d = cfg.delta;
    if (model == CountModel::unthinned) {
        return std::numbers::pi * params.bs_density * radius * radius *
               (1.0 - d * d);
    }
    return los_mass_within(params, radius) - los_mass_within(params, d * radius);
}

double in_cluster_count_pmf(const channel::SystemParams& params,
                            const ClusterConfig& cfg, double radius, int count,
                            CountModel model) {
    if (count < 0) {
        throw std::invalid_argument("in_cluster_count_pmf: count must be >= 0");
    }
    const double mean = in_cluster_count_mean(params, cfg, radius, model);
    if (mean == 0.0) return count == 0 ? 1.0 : 0.0;
    return std::exp(count * std::log(mean) - mean -
                    std::lgamma(static_cast<double>(count) + 1.0));
}

}  // namespace thzcov::cluster
