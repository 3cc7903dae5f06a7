// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#pragma once

#include <functional>

namespace thzcov::specfun {

// Controls for the adaptive quadrature routine.  Tolerances are combined as
// max(abs_tol, rel_tol * |estimate|); subdivision stops once the summed
// interval error drops below that or max_subdivisions is exhausted.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 400;
};

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
    bool converged = false;
    int subdivisions = 0;
};

// Principal branch W0 of the Lambert W function, defined for x >= -1/e.
// Residual |W exp(W) - x| stays below 1e-12 * max(1, |x|).
// Throws std::domain_error below the branch point.
double lambert_w0(double x);

// Upper incomplete gamma function Gamma(a, x) for real a (including zero and
// negative values, integer or not) and x > 0.  Negative a is reached through
// the upward recurrence Gamma(a, x) = (Gamma(a+1, x) - x^a e^-x) / a from a
// base in (0, 1], with Gamma(0, x) = E1(x) handling the integer ladder.
// Throws std::domain_error for x <= 0.
double gamma_upper(double a, double x);

// log(Gamma(a, x)); the function is positive for all real a, x > 0, so the
// logarithm is well defined.  Used where Gamma(a, x) itself underflows
// (deeply negative a at large x).  Returns -inf once even the log-scale
// evaluation underflows.
double log_gamma_upper(double a, double x);

// Exponential integral E1(x) = Gamma(0, x), x > 0.
double expint_e1(double x);

// Gaussian tail probability Q(z) = P[N(0,1) > z] = erfc(z / sqrt(2)) / 2.
double q_function(double z) noexcept;

// Adaptive Gauss-Kronrod 15(7) quadrature on [lo, hi]; hi may be +infinity,
// in which case the tail is folded onto (0, 1] with t = lo + (1-u)/u.  The
// integrand is never evaluated at the interval endpoints.
QuadratureResult integrate(const std::function<double(double)>& f,
                           double lo, double hi,
                           const QuadratureSpec& spec = {});

}  // namespace thzcov::specfun
