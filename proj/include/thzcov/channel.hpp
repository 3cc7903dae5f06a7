// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#pragma once

#include <random>

namespace thzcov::channel {

// Link-level and deployment constants, all in SI units.  Powers are watts,
// distances meters, densities 1/m^2, rates 1/m.
struct SystemParams {
    double p_tx = 1.0;                  // transmit power [W] (30 dBm)
    double freq = 1e12;                 // carrier frequency [Hz]
    double pathloss_exp = 2.5;          // spreading exponent alpha
    double absorption = 0.06;           // molecular absorption k_a [1/m]
    double bs_density = 0.005;          // BS density lambda_b [1/m^2]
    double blockage_rate = 1.0 / 141.4; // blockage parameter beta [1/m]
    double fading_shape = 1.0;          // gamma shape m (>= 0.5)
    double fading_scale = 1.0;          // gamma scale Omega (unit mean: 1/m)
    double noise_power = 0.0;           // sigma_n^2 [W]; 0 = interference-limited

    // Free-space constant C = (c / (4 pi f))^2, kept consistent with freq by
    // deriving it on demand.
    double c_const() const;
};

// Throws std::invalid_argument naming the first violated constraint.
void validate(const SystemParams& params);

// Psi(d) = C d^-alpha exp(-k_a d).  Throws std::domain_error for d <= 0.
double path_loss(const SystemParams& params, double dist);

// Moments of the gamma(shape m, scale Omega) fading power: order 1 gives
// m Omega, order 2 gives m (m+1) Omega^2.  Order must be 1 or 2.
double fading_moment(const SystemParams& params, int order);

// log E[xi^n] = n log(Omega) + lgamma(m + n) - lgamma(m), n >= 1.
double log_fading_moment(const SystemParams& params, int n);

double sample_fading(const SystemParams& params, std::mt19937_64& rng);

// LOS probability exp(-beta d) of the Boolean blockage model.
double los_probability(const SystemParams& params, double dist);

}  // namespace thzcov::channel
