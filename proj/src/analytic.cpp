// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#include "thzcov/analytic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace thzcov::analytic {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fading_mean(const channel::SystemParams& p, FadingConvention conv) {
    const double m = p.fading_shape, omega = p.fading_scale;
    return conv == FadingConvention::scale ? m * omega : m / omega;
}

double fading_sq_mean(const channel::SystemParams& p, FadingConvention conv) {
    const double m = p.fading_shape, omega = p.fading_scale;
    const double core = m * (m + 1.0);
    return conv == FadingConvention::scale ? core * omega * omega
                                           : core / (omega * omega);
}

double log_fading_moment_conv(const channel::SystemParams& p, int n,
                              FadingConvention conv) {
    const double m = p.fading_shape;
    const double lg = std::lgamma(m + n) - std::lgamma(m);
    const double lo = n * std::log(p.fading_scale);
    return conv == FadingConvention::scale ? lg + lo : lg - lo;
}

// Shared truncated-series evaluator for both characteristic functions.
// log CF(j omega) = 2 pi lambda sum_n [(-j omega C P_T)^n E[xi^n] / n!]
//                   * (n kappa)^(alpha n - 2) * sum_j p_j G_j^n * kernel_n
// where kernel_n is Gamma(2 - alpha n, n kappa R) for the interference tail
// or the annulus difference for the in-cluster sum.  Terms are assembled in
// log magnitude so deep-series gamma underflow cannot poison the sum.
CfResult cf_series(const channel::SystemParams& params,
                   const antenna::GainDistribution& gains, double r_lo,
                   double r_hi, double omega, int n_terms,
                   FadingConvention conv, CfKernel kernel) {
    channel::validate(params);
    if (n_terms < 1) {
        throw std::invalid_argument("cf_series: n_terms must be >= 1");
    }
    CfResult res;
    if (omega == 0.0) {
        res.converged = true;
        return res;
    }
    const double alpha = params.pathloss_exp;
    const double log_scale =
        std::log(std::abs(omega) * params.c_const() * params.p_tx);
    const double log_prefix = std::log(kTwoPi * params.bs_density);
    const double phase = omega > 0.0 ? -std::numbers::pi / 2.0
                                     : std::numbers::pi / 2.0;

    std::complex<double> exponent{0.0, 0.0};
    double prev_mag = std::numeric_limits<double>::infinity();
    const auto finish = [&](bool converged, bool diverged, int used) {
        res.value = std::exp(exponent);
        res.converged = converged;
        res.diverged = diverged;
        res.terms_used = used;
        return res;
    };

    for (int n = 1; n <= n_terms; ++n) {
        const double a = 2.0 - alpha * n;
        const double chi =
            kernel == CfKernel::thinned
                ? n * params.absorption + params.blockage_rate
                : n * (params.absorption + params.blockage_rate);
        double log_kernel;
        if (std::isinf(r_hi)) {
            log_kernel = specfun::log_gamma_upper(a, chi * r_lo);
        } else if (r_hi <= r_lo) {
            log_kernel = -std::numeric_limits<double>::infinity();
        } else {
            const double lga = specfun::log_gamma_upper(a, chi * r_lo);
            const double lgb = specfun::log_gamma_upper(a, chi * r_hi);
            log_kernel =
                lga + (std::isinf(lga) ? 0.0 : std::log1p(-std::exp(lgb - lga)));
        }
        const double log_common =
            log_prefix + n * log_scale + log_fading_moment_conv(params, n, conv) -
            std::lgamma(n + 1.0) + (alpha * n - 2.0) * std::log(chi) +
            log_kernel;

        double mag = 0.0;
        if (std::isfinite(log_common)) {
            for (const auto& s : gains.states) {
                if (s.prob <= 0.0) continue;
                const double lm =
                    log_common + std::log(s.prob) + n * std::log(s.gain);
                if (lm > 700.0) return finish(false, true, n - 1);
                mag += std::exp(lm);
            }
        }
        if (mag > prev_mag && mag > 1e-14 * std::max(1.0, std::abs(exponent))) {
            // growing tail: keep the partial sum through the smallest term
            return finish(false, true, n - 1);
        }
        exponent += std::polar(mag, n * phase);
        if (mag <= 1e-14 * std::max(1.0, std::abs(exponent))) {
            return finish(true, false, n);
        }
        prev_mag = mag;
    }
    return finish(false, false, n_terms);
}

// Generalized Gauss-Laguerre rule for weight u^(m-1) e^-u on (0, inf),
// normalized to total mass one (Golub-Welsch on the Jacobi matrix).
struct FadingRule {
    std::vector<double> nodes;    // in units of the scale parameter
    std::vector<double> weights;  // sum to 1
};

FadingRule fading_rule(const channel::SystemParams& params, int order) {
    const double shape = params.fading_shape;
    Eigen::VectorXd diag(order), sub(order - 1);
    for (int k = 0; k < order; ++k) diag[k] = 2.0 * k + shape;
    for (int k = 1; k < order; ++k) {
        sub[k - 1] = std::sqrt(k * (k + shape - 1.0));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub,
                                  Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("fading_rule: eigensolve failed");
    }
    FadingRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        rule.nodes[i] = solver.eigenvalues()[i] * params.fading_scale;
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = v0 * v0;
    }
    return rule;
}

}  // namespace

CfResult interference_cf(const channel::SystemParams& params,
                         const antenna::GainDistribution& gains, double radius,
                         double omega, int n_terms, FadingConvention conv,
                         CfKernel kernel) {
    if (!(radius > 0.0)) {
        throw std::domain_error("interference_cf: requires radius > 0");
    }
    return cf_series(params, gains, radius,
                     std::numeric_limits<double>::infinity(), omega, n_terms,
                     conv, kernel);
}

CfResult signal_cf(const channel::SystemParams& params,
                   const antenna::GainDistribution& gains,
                   const cluster::ClusterConfig& cfg, double radius,
                   double omega, int n_terms, FadingConvention conv,
                   CfKernel kernel) {
    cluster::validate(cfg);
    if (!(radius > 0.0)) {
        throw std::domain_error("signal_cf: requires radius > 0");
    }
    return cf_series(params, gains, cfg.delta * radius, radius, omega, n_terms,
                     conv, kernel);
}

InterferenceStats interference_moments(const channel::SystemParams& params,
                                       const antenna::GainDistribution& gains,
                                       double radius, MomentMode mode,
                                       FadingConvention conv) {
    channel::validate(params);
    if (!(radius > 0.0)) {
        throw std::domain_error("interference_moments: requires radius > 0");
    }
    const double alpha = params.pathloss_exp;
    const double lam = params.bs_density;
    const double c = params.c_const();
    const double g1 = antenna::gain_moment(gains, 1);
    const double g2 = antenna::gain_moment(gains, 2);
    const double kappa = params.absorption + params.blockage_rate;

    InterferenceStats stats;
    stats.mode = mode;
    if (mode == MomentMode::campbell) {
        const double kappa2 = 2.0 * params.absorption + params.blockage_rate;
        stats.mean = kTwoPi * lam * params.p_tx * fading_mean(params, conv) * c *
                     g1 * std::pow(kappa, alpha - 2.0) *
                     specfun::gamma_upper(2.0 - alpha, kappa * radius);
        stats.variance = kTwoPi * lam * params.p_tx * params.p_tx *
                         fading_sq_mean(params, conv) * c * c * g2 *
                         std::pow(kappa2, 2.0 * alpha - 2.0) *
                         specfun::gamma_upper(2.0 - 2.0 * alpha, kappa2 * radius);
        return stats;
    }

    // Legacy closed forms, kept verbatim: no transmit-power factor, squared
    // mean-like head in the second moment, blockage doubled at second order.
    const double m = params.fading_shape;
    const double omega_f = params.fading_scale;
    const double f1 = conv == FadingConvention::rate ? m / omega_f : m * omega_f;
    const double f2a = conv == FadingConvention::rate
                           ? m * (1.0 + m) / omega_f
                           : m * (1.0 + m) * omega_f;
    const double f2b = conv == FadingConvention::rate
                           ? m * m / (omega_f * omega_f)
                           : m * m * omega_f * omega_f;
    const double tail1 = specfun::gamma_upper(2.0 - alpha, kappa * radius);
    const double head = kTwoPi * lam * c * g2 * f2a * tail1 *
                        std::pow(kappa, alpha - 2.0);
    const double second =
        kTwoPi * lam * c * c * g2 * f2b *
        std::pow(2.0 * kappa, 2.0 * alpha - 2.0) *
        specfun::gamma_upper(2.0 - 2.0 * alpha, 2.0 * kappa * radius);
    const double m1 =
        kTwoPi * lam * c * g1 * f1 * tail1 * std::pow(kappa, alpha - 2.0);
    stats.mean = m1;
    stats.variance = head * head + second - m1 * m1;
    return stats;
}

double interference_cdf(const InterferenceStats& stats, double threshold) {
    if (!(stats.variance > 0.0)) {
        return threshold >= stats.mean ? 1.0 : 0.0;
    }
    const double z =
        (threshold - stats.mean) / std::sqrt(2.0 * stats.variance);
    return 0.5 * (1.0 + std::erf(z));
}

double serving_mean_term(const channel::SystemParams& params,
                         const antenna::GainDistribution& serving_gains,
                         const cluster::ClusterConfig& cfg, double radius,
                         FadingConvention conv) {
    channel::validate(params);
    cluster::validate(cfg);
    if (!(radius > 0.0)) {
        throw std::domain_error("serving_mean_term: requires radius > 0");
    }
    const double d = cfg.delta;
    if (d == 1.0) return 0.0;  // empty annulus
    const double alpha = params.pathloss_exp;
    const double ka = params.absorption;
    const double rin = d * radius;
    // Mean over a uniform annulus position of P_T G xi Psi(t):
    //   2 P_T C G1 E[xi] ka^(alpha-2) (d R)^-2 (d^-2 - 1)^-1
    //     * [Gamma(2-alpha, ka d R) - Gamma(2-alpha, ka R)]
    const double tail = specfun::gamma_upper(2.0 - alpha, ka * rin) -
                        specfun::gamma_upper(2.0 - alpha, ka * radius);
    return 2.0 * params.p_tx * params.c_const() *
           antenna::gain_moment(serving_gains, 1) * fading_mean(params, conv) *
           std::pow(ka, alpha - 2.0) / (rin * rin) /
           (1.0 / (d * d) - 1.0) * tail;
}

CoverageResult coverage_probability(const channel::SystemParams& params,
                                    const antenna::ArrayConfig& bs,
                                    const antenna::ArrayConfig& ue,
                                    const cluster::ClusterConfig& cfg,
                                    const CoverageQuery& query) {
    channel::validate(params);
    cluster::validate(cfg);
    if (!(query.sinr_threshold > 0.0)) {
        throw std::invalid_argument(
            "coverage_probability: sinr_threshold must be > 0");
    }
    if (query.fading_nodes < 2 &&
        query.fading_avg == FadingAverage::quadrature) {
        throw std::invalid_argument(
            "coverage_probability: fading_nodes must be >= 2");
    }

    const auto serving = antenna::serving_gain_distribution(bs, ue);
    const auto interferer = antenna::interferer_gain_distribution(bs, ue);
    const double gamma = query.sinr_threshold;
    const double noise = params.noise_power;

    FadingRule rule;
    if (query.fading_avg == FadingAverage::quadrature) {
        rule = fading_rule(params, query.fading_nodes);
    } else {
        rule.nodes = {fading_mean(params, query.fading_conv)};
        rule.weights = {1.0};
    }

    const double r_max = query.r_max > 0.0
                             ? query.r_max
                             : cluster::cluster_radius_tail_cutoff(params, cfg);

    // Workspace reused across radius nodes.
    std::vector<double> pmf, suffix;

    auto conditional_coverage = [&](double radius) {
        const auto stats =
            interference_moments(params, interferer, radius, query.moment_mode,
                                 query.fading_conv);
        const double member_mean =
            serving_mean_term(params, serving, cfg, radius, query.fading_conv);
        const double psi = channel::path_loss(params, cfg.delta * radius);
        const double shift = query.placement == ThresholdPlacement::balanced
                                 ? gamma * (noise + stats.mean)
                                 : noise + stats.mean;
        const double spread =
            stats.variance > 0.0 ? gamma * std::sqrt(2.0 * stats.variance) : 0.0;

        const double count_mean = cfg.delta < 1.0
                                      ? cluster::in_cluster_count_mean(
                                            params, cfg, radius, query.count_model)
                                      : 0.0;
        long q_lo = 0, q_hi = 0;
        if (count_mean > 0.0) {
            const double sd = std::sqrt(count_mean);
            q_lo = std::max(0L, static_cast<long>(count_mean - 10.0 * sd));
            q_hi = static_cast<long>(std::ceil(count_mean + 10.0 * sd));
            if (query.q_max > 0) q_hi = std::min<long>(q_hi, query.q_max);
            if (q_hi < q_lo) q_hi = q_lo;
        }
        const std::size_t width = static_cast<std::size_t>(q_hi - q_lo) + 1;
        pmf.assign(width, 0.0);
        if (count_mean > 0.0) {
            pmf[0] = std::exp(q_lo * std::log(count_mean) - count_mean -
                              std::lgamma(static_cast<double>(q_lo) + 1.0));
            for (std::size_t k = 1; k < width; ++k) {
                pmf[k] = pmf[k - 1] * count_mean / static_cast<double>(q_lo + k);
            }
        } else {
            pmf[0] = 1.0;
        }
        suffix.assign(width + 1, 0.0);
        for (std::size_t k = width; k-- > 0;) {
            suffix[k] = suffix[k + 1] + pmf[k];
        }

        double total = 0.0;
        for (const auto& state : serving.states) {
            if (state.prob <= 0.0) continue;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double signal =
                    params.p_tx * state.gain * rule.nodes[k] * psi;
                const double w = state.prob * rule.weights[k];
                double acc = 0.0;
                if (spread <= 0.0) {
                    for (std::size_t q = 0; q < width; ++q) {
                        const double margin = signal +
                                              static_cast<double>(q_lo + q) *
                                                  member_mean -
                                              shift;
                        acc += pmf[q] *
                               (margin > 0.0 ? 1.0 : (margin < 0.0 ? 0.0 : 0.5));
                    }
                } else {
                    const double base = (signal - shift) / spread;
                    const double slope = member_mean / spread;
                    for (std::size_t q = 0; q < width; ++q) {
                        const double arg =
                            base + slope * static_cast<double>(q_lo + q);
                        if (arg > 6.0) {
                            // erf saturated: the rest of the pmf scores 1
                            acc += suffix[q];
                            break;
                        }
                        acc += pmf[q] * 0.5 * (1.0 + std::erf(arg));
                    }
                }
                total += w * acc;
            }
        }
        return total;
    };

    const auto quad = specfun::integrate(
        [&](double radius) {
            return cluster::cluster_radius_pdf(params, cfg, radius) *
                   conditional_coverage(radius);
        },
        0.0, r_max, query.quad);

    CoverageResult out;
    out.r_max = r_max;
    out.quadrature_converged = quad.converged;
    out.clamp_excursion =
        std::max(0.0, quad.value - 1.0) + std::max(0.0, -quad.value);
    out.probability = std::clamp(quad.value, 0.0, 1.0);
    return out;
}

}  // namespace thzcov::analytic
