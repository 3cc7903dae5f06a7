// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#include "thzcov/antenna.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "thzcov/specfun.hpp"

namespace thzcov::antenna {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// First-null constant of the uniform-linear-array beamwidth relation
// theta = 2 asin(kNull / (pi N)).
constexpr double kNull = 2.782;

// Shared gain assembly once beamwidth and element count are fixed.  The
// sector factor N^2 sin(3 pi / (2 N)) splits total power so that
// theta G_M + (2 pi - theta) G_S = 2 pi.
ArrayConfig assemble(double n_elements, double beamwidth, double sigma_err) {
    ArrayConfig cfg;
    cfg.n_elements = n_elements;
    cfg.sigma_err = sigma_err;
    cfg.beamwidth = beamwidth;
    const double sector =
        n_elements * n_elements * std::sin(3.0 * kPi / (2.0 * n_elements));
    const double denom = beamwidth * sector + (kTwoPi - beamwidth);
    cfg.gain_main = kTwoPi * sector / denom;
    cfg.gain_side = kTwoPi / denom;
    return cfg;
}

}  // namespace

ArrayConfig derive_array(double n_elements, double sigma_err) {
    // the sector factor changes sign at 1.5 elements; below that the
    // "main lobe" would carry less gain than the sides
    if (!(n_elements > 1.5)) {
        throw std::invalid_argument(
            "derive_array: element count must exceed 1.5");
    }
    if (!(sigma_err >= 0.0)) {
        throw std::invalid_argument("derive_array: sigma_err must be >= 0");
    }
    const double beamwidth = 2.0 * std::asin(kNull / (kPi * n_elements));
    return assemble(n_elements, beamwidth, sigma_err);
}

ArrayConfig derive_array_from_beamwidth(double beamwidth, double sigma_err) {
    if (!(beamwidth > 0.0) || !(beamwidth < kPi)) {
        throw std::invalid_argument(
            "derive_array_from_beamwidth: beamwidth must lie in (0, pi)");
    }
    if (!(sigma_err >= 0.0)) {
        throw std::invalid_argument(
            "derive_array_from_beamwidth: sigma_err must be >= 0");
    }
    // Real-valued element count implied by the beamwidth relation; using it
    // unrounded keeps gains continuous along beamwidth sweeps.
    const double n_elements = kNull / (kPi * std::sin(0.5 * beamwidth));
    if (!(n_elements > 1.5)) {
        throw std::invalid_argument(
            "derive_array_from_beamwidth: beamwidth too wide for a "
            "directional array");
    }
    return assemble(n_elements, beamwidth, sigma_err);
}

double misalignment_prob(double beamwidth, double sigma_err) {
    if (!(beamwidth > 0.0) || !(sigma_err >= 0.0)) {
        throw std::invalid_argument("misalignment_prob: bad arguments");
    }
    if (sigma_err == 0.0) return 0.0;
    const double aligned =
        1.0 - 2.0 * specfun::q_function(beamwidth / (std::sqrt(2.0) * sigma_err));
    const double truncation = 1.0 - 2.0 * specfun::q_function(kPi / sigma_err);
    const double p = 1.0 - aligned / truncation;
    return std::min(1.0, std::max(0.0, p));
}

GainDistribution serving_gain_distribution(const ArrayConfig& bs,
                                           const ArrayConfig& ue) {
    const double pb = misalignment_prob(bs.beamwidth, bs.sigma_err);
    const double pu = misalignment_prob(ue.beamwidth, ue.sigma_err);
    GainDistribution dist;
    dist.kind = GainKind::serving;
    dist.states = {{{bs.gain_main * ue.gain_main, (1.0 - pb) * (1.0 - pu)},
                    {bs.gain_side * ue.gain_main, pb * (1.0 - pu)},
                    {bs.gain_main * ue.gain_side, (1.0 - pb) * pu},
                    {bs.gain_side * ue.gain_side, pb * pu}}};
    return dist;
}

GainDistribution interferer_gain_distribution(const ArrayConfig& bs,
                                              const ArrayConfig& ue) {
    const double pb = bs.beamwidth / kTwoPi;
    const double pu = ue.beamwidth / kTwoPi;
    GainDistribution dist;
    dist.kind = GainKind::interferer;
    dist.states = {{{bs.gain_main * ue.gain_main, pb * pu},
                    {bs.gain_side * ue.gain_main, (1.0 - pb) * pu},
                    {bs.gain_main * ue.gain_side, pb * (1.0 - pu)},
                    {bs.gain_side * ue.gain_side, (1.0 - pb) * (1.0 - pu)}}};
    return dist;
}

double gain_moment(const GainDistribution& dist, int order) {
    if (order != 1 && order != 2) {
        throw std::invalid_argument("gain_moment: order must be 1 or 2");
    }
    return gain_moment_n(dist, order);
}

double gain_moment_n(const GainDistribution& dist, int n) {
    if (n < 1) throw std::invalid_argument("gain_moment_n: order must be >= 1");
    double sum = 0.0;
    for (const auto& s : dist.states) {
        sum += s.prob * std::pow(s.gain, n);
    }
    return sum;
}

std::pair<int, double> sample_gain(const GainDistribution& dist,
                                   std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        acc += dist.states[i].prob;
        if (u < acc) return {i, dist.states[i].gain};
    }
    return {3, dist.states[3].gain};
}

double sample_misalignment(double sigma_err, std::mt19937_64& rng) {
    if (!(sigma_err >= 0.0)) {
        throw std::invalid_argument("sample_misalignment: sigma_err must be >= 0");
    }
    if (sigma_err == 0.0) return 0.0;
    std::normal_distribution<double> normal(0.0, sigma_err);
    for (;;) {
        const double draw = normal(rng);
        if (std::abs(draw) <= kPi) return draw;
    }
}

bool draw_misaligned(const ArrayConfig& cfg, std::mt19937_64& rng) {
    if (cfg.sigma_err == 0.0) return false;
    const double err = sample_misalignment(cfg.sigma_err, rng);
    return std::abs(err) > cfg.beamwidth / std::sqrt(2.0);
}

}  // namespace thzcov::antenna
