// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#include "thzcov/specfun.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace thzcov::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInvE = 0.367879441171442322;
constexpr double kEulerGamma = 0.577215664901532861;

// Legendre continued fraction for Gamma(a, x), Lentz evaluation.  Reliable
// for x >= 1.5 at any real a <= x-ish; at negative a the partial numerators
// -k (k - a) stay negative and convergence only improves.
double gamma_upper_cf_factor(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) break;
    }
    return h;  // Gamma(a, x) = exp(-x + a log x) * h
}

// Direct series valid for -1 < a <= 1, a != 0, x <= ~1.5:
//   Gamma(a, x) = (Gamma(a+1) - x^a) / a - x^a sum_{n>=1} (-x)^n / (n! (a+n))
// with the leading difference evaluated through expm1 to survive a -> 0.
double gamma_upper_small_a(double a, double x) {
    const double u = std::expm1(std::lgamma(a + 1.0));  // Gamma(a+1) - 1
    const double v = std::expm1(a * std::log(x));       // x^a - 1
    double head = (u - v) / a;
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n <= 200; ++n) {
        term *= -x / n;
        const double add = term / (a + n);
        sum += add;
        if (std::abs(add) <= kEps * (std::abs(sum) + 1.0)) break;
    }
    return head - std::pow(x, a) * sum;
}

// Regularized lower incomplete gamma P(a, x) by its power series; a > 0,
// x < a + 1.
double lower_regularized_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n <= 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (term <= sum * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Gauss-Kronrod 15(7) node set (positive half; the rule is symmetric).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double lo, hi, value, err;
};

Interval gk15(const std::function<double(double)>& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double fa = f(c - h * kXgk[j]);
        const double fb = f(c + h * kXgk[j]);
        resk += kWgk[j] * (fa + fb);
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (fa + fb);
    }
    return {lo, hi, resk * h, std::abs((resk - resg) * h)};
}

}  // namespace

double lambert_w0(double x) {
    if (!(x >= -kInvE)) {
        if (x > -kInvE - 1e-12) {
            x = -kInvE;
        } else {
            throw std::domain_error("lambert_w0: argument below -1/e");
        }
    }
    if (x == 0.0) return 0.0;

    double w;
    if (x < -0.25) {
        // branch-point series in p = sqrt(2 (e x + 1))
        const double p = std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * x + 1.0)));
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
        if (p == 0.0) return -1.0;
    } else if (x < 2.0) {
        w = x * (1.0 - x * (1.0 - 1.5 * x)) / (1.0 + 0.3 * x * x);
    } else {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    for (int it = 0; it < 64; ++it) {
        const double ew = std::exp(w);
        const double fv = w * ew - x;
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - (w + 2.0) * fv / (2.0 * wp1);
        const double step = fv / denom;
        w -= step;
        if (std::abs(step) <= 2.0 * kEps * (1.0 + std::abs(w))) break;
    }
    return w;
}

double expint_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("expint_e1: requires x > 0");
    if (x <= 1.0) {
        double term = 1.0;
        double sum = 0.0;
        for (int n = 1; n <= 100; ++n) {
            term *= -x / n;
            const double add = -term / n;
            sum += add;
            if (std::abs(add) <= kEps * std::abs(sum)) break;
        }
        return sum - kEulerGamma - std::log(x);
    }
    // Lentz continued fraction e^-x / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) break;
    }
    return h * std::exp(-x);
}

double gamma_upper(double a, double x) {
    if (x == 0.0 && a > 0.0) return std::tgamma(a);
    if (!(x > 0.0)) {
        throw std::domain_error("gamma_upper: requires x > 0 (or a > 0)");
    }
    if (a > 0.25) {
        if (x < a + 1.0) {
            return std::tgamma(a) * (1.0 - lower_regularized_series(a, x));
        }
        return std::exp(-x + a * std::log(x)) * gamma_upper_cf_factor(a, x);
    }
    if (a == 0.0) return expint_e1(x);
    if (x > 1.5) {
        return std::exp(-x + a * std::log(x)) * gamma_upper_cf_factor(a, x);
    }

    // x <= 1.5, a <= 0.25: evaluate at a base order in (0, 1] and walk the
    // recurrence Gamma(s-1, x) = (Gamma(s, x) - x^(s-1) e^-x) / (s-1) down
    // to a.  Negative integers route through Gamma(0, x) = E1 so the ladder
    // never divides by zero.
    int steps;
    double base;
    double g;
    if (a < 0.0 && a == std::floor(a)) {
        steps = static_cast<int>(-a);
        base = 0.0;
        g = expint_e1(x);
    } else {
        steps = a <= 0.0 ? static_cast<int>(std::floor(-a)) + 1 : 0;
        base = a + steps;
        g = gamma_upper_small_a(base, x);
    }
    const double ex = std::exp(-x);
    for (int i = 1; i <= steps; ++i) {
        const double target = base - i;
        g = (g - std::pow(x, target) * ex) / target;
    }
    return g;
}

double log_gamma_upper(double a, double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma_upper: requires x > 0");
    if (x > 1.5 && a < x + 1.0) {
        const double h = gamma_upper_cf_factor(a, x);
        return -x + a * std::log(x) + std::log(h);
    }
    const double g = gamma_upper(a, x);
    return g > 0.0 ? std::log(g) : -std::numeric_limits<double>::infinity();
}

double q_function(double z) noexcept {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

QuadratureResult integrate(const std::function<double(double)>& f, double lo,
                           double hi, const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) ||
        spec.max_subdivisions < 1) {
        throw std::invalid_argument("integrate: malformed QuadratureSpec");
    }
    if (!(lo < hi)) throw std::invalid_argument("integrate: requires lo < hi");

    std::function<double(double)> g;
    double glo = lo, ghi = hi;
    if (std::isinf(hi)) {
        // t = lo + (1-u)/u maps (0, 1] onto [lo, inf); nodes stay interior.
        g = [&f, lo](double u) {
            const double t = lo + (1.0 - u) / u;
            return f(t) / (u * u);
        };
        glo = 0.0;
        ghi = 1.0;
    } else {
        g = f;
    }

    auto worse = [](const Interval& p, const Interval& q) {
        return p.err < q.err;
    };
    std::priority_queue<Interval, std::vector<Interval>, decltype(worse)> heap(
        worse);
    heap.push(gk15(g, glo, ghi));

    QuadratureResult res;
    // Running totals kept incrementally alongside the heap.
    double total = heap.top().value;
    double err = heap.top().err;
    int splits = 0;
    while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) &&
           splits < spec.max_subdivisions) {
        const Interval worst = heap.top();
        heap.pop();
        total -= worst.value;
        err -= worst.err;
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Interval left = gk15(g, worst.lo, mid);
        const Interval right = gk15(g, mid, worst.hi);
        total += left.value + right.value;
        err += left.err + right.err;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    res.value = total;
    res.error_bound = std::max(err, 0.0);
    res.converged =
        err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    res.subdivisions = splits;
    return res;
}

}  // namespace thzcov::specfun
