// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#pragma once

#include <complex>

#include "thzcov/antenna.hpp"
#include "thzcov/channel.hpp"
#include "thzcov/cluster.hpp"
#include "thzcov/specfun.hpp"

namespace thzcov::analytic {

// Moment formulas for the out-of-cluster interference.
//  - campbell: Campbell-theorem mean and variance of the LOS-thinned shot
//    noise (blockage applied once, squared kernel in the variance).  This is
//    the mode validated against simulation.
//  - legacy: the original published closed forms, preserved verbatim for
//    reproduction studies (their second moment squares a mean-like term and
//    doubles the blockage rate at second order).
enum class MomentMode { campbell, legacy };

// Where the gamma-scale parameter sits in the legacy moment expressions:
// scale treats Omega as a gamma scale (E[xi] = m Omega, the convention the
// sampler uses); rate reproduces the published m / Omega factors.
enum class FadingConvention { scale, rate };

// How the reference-link fading enters the coverage kernel: mean_field
// substitutes E[xi]; quadrature averages the kernel over the fading density
// with a generalized Gauss-Laguerre rule.
enum class FadingAverage { mean_field, quadrature };

// Normalization of the coverage kernel argument.  balanced multiplies both
// the noise and the interference mean by the SINR threshold (the algebra of
// the conditional CDF); legacy keeps them unscaled as originally printed.
enum class ThresholdPlacement { balanced, legacy };

// Exponential kernel of the characteristic-function series at order n:
// thinned keeps the blockage rate linear (n k_a + beta, blockage thins the
// point density once), printed scales it with the order (n (k_a + beta), the
// published form treating the LOS mark as amplitude).
enum class CfKernel { thinned, printed };

struct InterferenceStats {
    double mean = 0.0;
    double variance = 0.0;
    MomentMode mode = MomentMode::campbell;
};

// Truncated-series characteristic function value.  When the term magnitudes
// start growing before the stop criterion is met (omega beyond the series
// radius for the truncation depth), value holds the partial sum through the
// smallest term and diverged is set.
struct CfResult {
    std::complex<double> value{1.0, 0.0};
    bool converged = false;
    bool diverged = false;
    int terms_used = 0;
};

// E[exp(-j omega I)] of the out-of-cluster interference given cluster radius
// R, as a truncated exponential series with term-wise gamma fading moments.
CfResult interference_cf(const channel::SystemParams& params,
                         const antenna::GainDistribution& gains, double radius,
                         double omega, int n_terms = 30,
                         FadingConvention conv = FadingConvention::scale,
                         CfKernel kernel = CfKernel::thinned);

// Same series over the in-cluster annulus (delta R, R] for the cooperative
// signal sum; identically one when delta = 1 (empty annulus).
CfResult signal_cf(const channel::SystemParams& params,
                   const antenna::GainDistribution& gains,
                   const cluster::ClusterConfig& cfg, double radius,
                   double omega, int n_terms = 30,
                   FadingConvention conv = FadingConvention::scale,
                   CfKernel kernel = CfKernel::thinned);

InterferenceStats interference_moments(const channel::SystemParams& params,
                                       const antenna::GainDistribution& gains,
                                       double radius,
                                       MomentMode mode = MomentMode::campbell,
                                       FadingConvention conv = FadingConvention::scale);

// Gaussian CDF approximation P[I <= threshold] from the moments.
double interference_cdf(const InterferenceStats& stats, double threshold);

// Mean received power contributed by one cluster member placed uniformly in
// the annulus (delta R, R] with serving-pmf gain and average fading.
double serving_mean_term(const channel::SystemParams& params,
                         const antenna::GainDistribution& serving_gains,
                         const cluster::ClusterConfig& cfg, double radius,
                         FadingConvention conv = FadingConvention::scale);

struct CoverageQuery {
    double sinr_threshold = 1.0;  // gamma, linear
    // 0 = derive from the cluster-radius tail (mass < 1e-8 beyond cutoff).
    double r_max = 0.0;
    // 0 = ceil(mean + 10 sqrt(mean)) per radius node.
    int q_max = 0;
    MomentMode moment_mode = MomentMode::campbell;
    cluster::CountModel count_model = cluster::CountModel::thinned;
    FadingConvention fading_conv = FadingConvention::scale;
    FadingAverage fading_avg = FadingAverage::quadrature;
    ThresholdPlacement placement = ThresholdPlacement::balanced;
    specfun::QuadratureSpec quad{1e-9, 1e-7, 400};
    int fading_nodes = 16;  // Gauss-Laguerre order for FadingAverage::quadrature
};

struct CoverageResult {
    double probability = 0.0;
    // How far the raw quadrature value strayed outside [0, 1] before
    // clamping; should sit at numerical-noise level.
    double clamp_excursion = 0.0;
    bool quadrature_converged = false;
    double r_max = 0.0;
};

// Coverage probability P[SINR > gamma]: the conditional Gaussian CDF of the
// interference, averaged over the reference-link gain state and fading, the
// Poisson cluster population, and the cluster-radius density.
CoverageResult coverage_probability(const channel::SystemParams& params,
                                    const antenna::ArrayConfig& bs,
                                    const antenna::ArrayConfig& ue,
                                    const cluster::ClusterConfig& cfg,
                                    const CoverageQuery& query);

}  // namespace thzcov::analytic
