// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#pragma once

#include "thzcov/antenna.hpp"
#include "thzcov/channel.hpp"

namespace thzcov::cluster {

// The serving cluster is the disk of radius R = r / delta around the user,
// where r is the distance to the nearest LOS BS.  delta in (0, 1]; smaller
// delta widens the cluster (delta = 1 collapses it to the single nearest BS).
struct ClusterConfig {
    double delta = 0.6;
};

void validate(const ClusterConfig& cfg);

// Distance at which the aligned average received power
// P_T G_b G_u C r^-alpha exp(-k_a r) falls to tau, via the Lambert W form
//   r = (alpha / k_a) W0((k_a / alpha) (C G_b G_u P_T / tau)^(1/alpha)).
// Degrades gracefully to the pure power-law root as absorption -> 0.
double ref_distance_from_power(const channel::SystemParams& params,
                               const antenna::ArrayConfig& bs,
                               const antenna::ArrayConfig& ue,
                               double tau);

// Probability that the window contains no LOS BS at all:
// exp(-2 pi lambda_b / beta^2).
double los_void_probability(const channel::SystemParams& params);

// Survival function of the nearest-LOS-BS distance: P[r > d].
double nearest_los_survival(const channel::SystemParams& params, double d);

// Density of the cluster radius R = r / delta.  Defective by the LOS-void
// mass; the renormalized flag divides it out (the default for analysis).
double cluster_radius_pdf(const channel::SystemParams& params,
                          const ClusterConfig& cfg, double radius,
                          bool renormalized = true);

// CDF of the (renormalized) cluster radius distribution.
double cluster_radius_cdf(const channel::SystemParams& params,
                          const ClusterConfig& cfg, double radius);

// Radius beyond which the renormalized cluster-radius tail mass drops below
// tail_mass (bisection on the closed-form survival function).
double cluster_radius_tail_cutoff(const channel::SystemParams& params,
                                  const ClusterConfig& cfg,
                                  double tail_mass = 1e-8);

// Model for the number of non-reference cluster members in the annulus
// (delta R, R].  The unthinned variant keeps the full-density Poisson mean
// pi lambda_b R^2 (1 - delta^2); the thinned variant applies the LOS
// retention exp(-beta t) inside the annulus, matching simulation.
enum class CountModel { unthinned, thinned };

double in_cluster_count_mean(const channel::SystemParams& params,
                             const ClusterConfig& cfg, double radius,
                             CountModel model);

double in_cluster_count_pmf(const channel::SystemParams& params,
                            const ClusterConfig& cfg, double radius, int count,
                            CountModel model = CountModel::unthinned);

}  // namespace thzcov::cluster
