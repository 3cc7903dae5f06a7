// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#pragma once

#include <array>
#include <random>

namespace thzcov::antenna {

// Sectored two-lobe approximation of a uniform linear array.  n_elements is
// real-valued so that beamwidth-parameterized sweeps (which invert the
// beamwidth relation for an implied element count) share one code path;
// integer counts are the normal case.
struct ArrayConfig {
    double n_elements = 8.0;
    double sigma_err = 0.0;   // alignment error std dev [rad]
    double beamwidth = 0.0;   // main-lobe width [rad]
    double gain_main = 0.0;
    double gain_side = 0.0;
};

// Builds the sectored pattern for an n-element array: beamwidth
// 2 asin(2.782 / (pi n)) and main/side gains normalized so that
// theta G_M + (2 pi - theta) G_S = 2 pi.
ArrayConfig derive_array(double n_elements, double sigma_err);

// Same pattern, parameterized by the main-lobe width directly; the element
// count is the (real-valued) solution of the beamwidth relation.  Requires
// 0 < beamwidth < pi.
ArrayConfig derive_array_from_beamwidth(double beamwidth, double sigma_err);

// Probability that a truncated-Gaussian alignment error (std dev sigma_err,
// support [-pi, pi]) knocks the link off the main lobe:
//   1 - (1 - 2 Q(theta / sqrt(2 sigma^2))) / (1 - 2 Q(pi / sigma)).
// Exactly zero for sigma_err = 0.
double misalignment_prob(double beamwidth, double sigma_err);

enum class GainKind { serving, interferer };

// Four-state pmf of the product of the BS-side and user-side lobe gains.
struct GainDistribution {
    struct State {
        double gain;
        double prob;
    };
    std::array<State, 4> states{};
    GainKind kind = GainKind::serving;
};

// Serving link: each side is on its main lobe unless misaligned, so the
// state probabilities combine the two misalignment probabilities.
GainDistribution serving_gain_distribution(const ArrayConfig& bs,
                                           const ArrayConfig& ue);

// Interfering link: each side covers the other with its main lobe with
// probability beamwidth / 2 pi (uniform boresight).
GainDistribution interferer_gain_distribution(const ArrayConfig& bs,
                                              const ArrayConfig& ue);

// E[G^order] of the four-state pmf; order must be 1 or 2.
double gain_moment(const GainDistribution& dist, int order);

// n-th moment for arbitrary n >= 1 (series evaluations need higher orders).
double gain_moment_n(const GainDistribution& dist, int n);

// Categorical draw from the pmf; returns {state index, gain}.
std::pair<int, double> sample_gain(const GainDistribution& dist,
                                   std::mt19937_64& rng);

// Alignment error draw: N(0, sigma^2) restricted to [-pi, pi] by rejection.
// Consumes no randomness when sigma_err == 0.
double sample_misalignment(double sigma_err, std::mt19937_64& rng);

// True when a fresh alignment-error draw leaves the main lobe.  The lobe is
// kept while |error| <= beamwidth / sqrt(2), the threshold under which the
// rejection model reproduces misalignment_prob exactly.
bool draw_misaligned(const ArrayConfig& cfg, std::mt19937_64& rng);

}  // namespace thzcov::antenna
