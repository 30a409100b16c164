#pragma once

// Mittag-Leffler functions on the negative real axis, the two-sided
// algebraic bounds for E_alpha(-x), and the root of the exponential-rate
// equation w = mu (gamma - w)^(1-alpha).

#include <cmath>
#include <stdexcept>
#include <string>

#include "subdiff/gamma.hpp"
#include "subdiff/quadrature.hpp"

namespace subdiff {

enum class MLMethod { series, integral, asymptotic, closed_form };

struct MLEvaluation {
    double alpha = 0.0;
    double x = 0.0;
    double value = 0.0;
    MLMethod method = MLMethod::series;
    double error_estimate = 0.0;
};

namespace detail {

inline double ml_series_cut(double a) {
    // series is numerically safe while x^(1/a) stays moderate
    return std::min(std::max(1.0, std::pow(30.0 * a, a)), std::pow(9.0, a));
}

struct MLParts {
    double value;
    MLMethod method;
    double err;
};

// Kahan-compensated alternating series sum_j (-x)^j / Gamma(aj+b).
inline MLParts ml2_series(double a, double b, double x) {
    const double lx = std::log(x);
    double sum = 0.0, comp = 0.0, max_abs = 0.0;
    for (int j = 0; j < 220; ++j) {
        double term = std::exp(j * lx - log_gamma(a * j + b));
        if (j % 2 == 1) term = -term;
        max_abs = std::max(max_abs, std::abs(term));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (j > 2 && std::abs(term) < 1e-18 * std::abs(sum) &&
            std::abs(term) < 1e-18 * max_abs)
            break;
    }
    return {sum, MLMethod::series, max_abs * 4e-16};
}

// Asymptotic expansion sum_{k>=1} (-1)^(k+1) x^(-k) / Gamma(b - a k),
// truncated at the smallest term.
inline MLParts ml2_asymptotic(double a, double b, double x) {
    const double lx = std::log(x);
    double sum = 0.0, prev = 1e308, err = 1e308;
    for (int k = 1; k <= 60; ++k) {
        const double term =
            std::exp(-k * lx) * rgamma(b - a * k) * ((k % 2 == 1) ? 1.0 : -1.0);
        if (term == 0.0) continue;  // Gamma pole, no convergence signal
        if (std::abs(term) > prev) {
            err = prev;
            break;
        }
        sum += term;
        prev = std::abs(term);
        err = prev;
    }
    return {sum, MLMethod::asymptotic, err};
}

// Spectral integral E_{a,b}(-x) = t^(1-b) Int_0^inf e^(-s t) rho(s) ds with
// t = x^(1/a), evaluated after the substitution s = e^u.
inline MLParts ml2_integral(double a, double b, double x) {
    if (b > 1.0)
        throw std::domain_error(
            "ml2_neg: integral branch requires b <= 1 (got b = " +
            std::to_string(b) + ")");
    const double t = std::pow(x, 1.0 / a);
    const double u_hi = std::log(std::max(50.0, 46.0 / t));
    const double c0 = 1.0 + a - b;  // small-s exponent after Jacobian
    const double u_lo = std::min(-4.0, std::log(1.0 / t)) - 46.0 / c0;
    const double sb = std::sin(M_PI * b), sba = std::sin(M_PI * (b - a));
    const double ca = std::cos(M_PI * a);
    // integrand assembled in log space so the s^(a-b) factor cannot overflow
    const auto f = [&](double u) {
        const double s = std::exp(u);
        const double sa = std::exp(a * u);
        const double num = sa * sb + sba;
        const double den = sa * sa + 2.0 * sa * ca + 1.0;
        return std::exp(-s * t + c0 * u) * num / (M_PI * den);
    };
    const int panels = std::min(3000, static_cast<int>((u_hi - u_lo) / 4.0) + 1);
    const double integral = integrate(f, u_lo, u_hi, 1e-13, 0.0, 48, panels);
    return {std::pow(t, 1.0 - b) * integral, MLMethod::integral,
            1e-12 * std::abs(integral)};
}

inline MLParts ml2_neg_impl(double a, double b, double x) {
    if (x == 0.0)
        return {b == 1.0 ? 1.0 : rgamma(b), MLMethod::closed_form, 0.0};
    if (a == 1.0 && b == 1.0) return {std::exp(-x), MLMethod::closed_form, 1e-16};
    if (x <= ml_series_cut(a)) return ml2_series(a, b, x);
    const MLParts asy = ml2_asymptotic(a, b, x);
    if (asy.err <= 1e-12 * std::abs(asy.value) && asy.value > 0.0) return asy;
    return ml2_integral(a, b, x);
}

}  // namespace detail

// Two-parameter Mittag-Leffler E_{a,b}(-x), a in (0,1], b > 0, x >= 0.
inline double ml2_neg(double a, double b, double x) {
    if (!(a > 0.0) || a > 1.0) throw std::domain_error("ml2_neg: a in (0,1]");
    if (!(b > 0.0)) throw std::domain_error("ml2_neg: b > 0");
    if (x < 0.0) throw std::domain_error("ml2_neg: x >= 0");
    return detail::ml2_neg_impl(a, b, x).value;
}

// E_alpha(-x) with method tag and error estimate.
inline MLEvaluation mittag_leffler_neg(double alpha, double x) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("mittag_leffler_neg: alpha in (0,1]");
    if (x < 0.0) throw std::domain_error("mittag_leffler_neg: x >= 0");
    const auto parts = detail::ml2_neg_impl(alpha, 1.0, x);
    return {alpha, x, parts.value, parts.method, parts.err};
}

inline double ml_neg(double alpha, double x) {
    return mittag_leffler_neg(alpha, x).value;
}

struct MLBounds {
    double lower;
    double upper;
};

// Two-sided bounds 1/(1 + Gamma(1-a) x) <= E_a(-x) <= 1/(1 + x/Gamma(1+a)).
inline MLBounds ml_bounds(double alpha, double x) {
    if (x < 0.0) throw std::domain_error("ml_bounds: x >= 0");
    if (alpha == 1.0) return {x == 0.0 ? 1.0 : 0.0, 1.0 / (1.0 + x)};
    const double lo = 1.0 / (1.0 + gamma_fn(1.0 - alpha) * x);
    const double hi = 1.0 / (1.0 + x / gamma_fn(1.0 + alpha));
    return {lo, hi};
}

// Unique root w in (0, gamma) of w = mu (gamma - w)^(1-alpha).
inline double omega_root(double alpha, double gamma, double mu) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("omega_root: alpha in (0,1)");
    if (!(gamma > 0.0) || !(mu > 0.0))
        throw std::domain_error("omega_root: gamma, mu > 0");
    double lo = 0.0, hi = gamma;
    double w = gamma * mu / (mu + std::pow(gamma, alpha));  // rough start inside
    for (int it = 0; it < 500; ++it) {
        const double rhs = mu * std::pow(gamma - w, 1.0 - alpha);
        const double fw = w - rhs;
        if (std::abs(fw) <= 4e-16 * (std::abs(w) + rhs)) break;
        if (fw > 0.0)
            hi = w;
        else
            lo = w;
        if (hi - lo <= 2e-16 * gamma) break;
        const double dfw = 1.0 + mu * (1.0 - alpha) * std::pow(gamma - w, -alpha);
        double w_new = w - fw / dfw;
        if (!(w_new > lo && w_new < hi)) w_new = 0.5 * (lo + hi);
        w = w_new;
    }
    return w;
}

}  // namespace subdiff
