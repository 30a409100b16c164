#pragma once

// Least-squares helpers for decay-exponent estimation on log-log data.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace subdiff {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;  // of log|y| vs log t
    std::size_t points = 0;
};

// Slope of log(y) against log(t) over t in [t_lo, t_hi]; skips nonpositive y.
inline SlopeFit fit_loglog_slope(std::span<const double> t, std::span<const double> y,
                                 double t_lo, double t_hi) {
    if (t.size() != y.size()) throw std::invalid_argument("fit: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi || !(y[i] > 0.0)) continue;
        const double X = std::log(t[i]), Y = std::log(y[i]);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++n;
    }
    if (n < 3) return {0.0, 0.0, n};
    const double denom = n * sxx - sx * sx;
    SlopeFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    f.points = n;
    return f;
}

// Correction-aware exponent fit on a fixed window:
//   log y = b0 + b1 log t + b2 t^(-corr) + b3 t^(-2 corr).
// A plain log-log slope measures a pre-asymptotic effective exponent when the
// t^(-corr) transient has not died inside the window; absorbing the known
// correction scale recovers the true rate. Returns b1 as `slope`.
inline SlopeFit fit_corrected_loglog(std::span<const double> t,
                                     std::span<const double> y, double t_lo,
                                     double t_hi, double corr) {
    if (t.size() != y.size()) throw std::invalid_argument("fit: size mismatch");
    constexpr int K = 4;
    double A[K][K] = {}, rhs[K] = {};
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi || !(y[i] > 0.0)) continue;
        const double r[K] = {1.0, std::log(t[i]), std::pow(t[i], -corr),
                             std::pow(t[i], -2.0 * corr)};
        const double Y = std::log(y[i]);
        for (int a = 0; a < K; ++a) {
            for (int c = 0; c < K; ++c) A[a][c] += r[a] * r[c];
            rhs[a] += r[a] * Y;
        }
        ++n;
    }
    if (n < 6) return {0.0, 0.0, n};
    for (int k = 0; k < K; ++k) {
        int piv = k;
        for (int r2 = k + 1; r2 < K; ++r2)
            if (std::abs(A[r2][k]) > std::abs(A[piv][k])) piv = r2;
        for (int c2 = 0; c2 < K; ++c2) std::swap(A[k][c2], A[piv][c2]);
        std::swap(rhs[k], rhs[piv]);
        for (int r2 = k + 1; r2 < K; ++r2) {
            const double f = A[r2][k] / A[k][k];
            for (int c2 = k; c2 < K; ++c2) A[r2][c2] -= f * A[k][c2];
            rhs[r2] -= f * rhs[k];
        }
    }
    double x[K];
    for (int k = K; k-- > 0;) {
        double s = rhs[k];
        for (int c2 = k + 1; c2 < K; ++c2) s -= A[k][c2] * x[c2];
        x[k] = s / A[k][k];
    }
    return {x[1], x[0], n};
}

// Rate of log(y) against t (exponential decay) over the window.
inline SlopeFit fit_semilog_rate(std::span<const double> t, std::span<const double> y,
                                 double t_lo, double t_hi) {
    if (t.size() != y.size()) throw std::invalid_argument("fit: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi || !(y[i] > 0.0)) continue;
        const double X = t[i], Y = std::log(y[i]);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++n;
    }
    if (n < 3) return {0.0, 0.0, n};
    const double denom = n * sxx - sx * sx;
    SlopeFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    f.points = n;
    return f;
}

}  // namespace subdiff
