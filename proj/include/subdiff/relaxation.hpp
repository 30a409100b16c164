#pragma once

// The relaxation function s_mu solving s + mu (l*s) = 1, its closed-form
// Mittag-Leffler counterpart for the fractional pair, the resolvent kernels
// h_mu (h + mu l*h = mu l), the regularized kernels k_n = k*h_n = n s_n, and
// the two-sided bounds 1/(1 + mu/k(t)) <= s_mu(t) <= 1/(1 + mu (1*l)(t)).

#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "subdiff/convolution.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/mittag_leffler.hpp"
#include "subdiff/time_grid.hpp"

namespace subdiff {

enum class CurveMethod { volterra, closed_form_ml };

struct RelaxationCurve {
    double mu = 0.0;
    TimeGrid grid;
    std::vector<double> values;  // s at every node, values[0] = 1
    CurveMethod method = CurveMethod::volterra;

    RelaxationCurve(double mu_, TimeGrid g, std::vector<double> v, CurveMethod m)
        : mu(mu_), grid(std::move(g)), values(std::move(v)), method(m) {}
};

// Implicit product-integration solve of s + mu (l*s) = 1 with precomputed
// convolution weights for l (reusable across mu and spectral modes).
inline std::vector<double> solve_relaxation_values(const ConvolutionWeights& wl,
                                                   double mu) {
    if (mu < 0.0) throw std::domain_error("solve_relaxation: mu >= 0");
    const std::size_t N = wl.intervals();
    std::vector<double> s(N + 1, 1.0);
    if (mu == 0.0) return s;
    for (std::size_t n = 1; n <= N; ++n)
        s[n] = (1.0 - mu * wl.past_sum(n, s)) / (1.0 + mu * wl.diagonal(n));
    return s;
}

inline RelaxationCurve solve_relaxation(const ConvolutionWeights& wl, double mu) {
    return {mu, wl.grid(), solve_relaxation_values(wl, mu), CurveMethod::volterra};
}

inline RelaxationCurve solve_relaxation(const Kernel& l, double mu,
                                        const TimeGrid& grid) {
    return solve_relaxation(ConvolutionWeights(l, grid), mu);
}

inline RelaxationCurve solve_relaxation(const KernelPair& pair, double mu,
                                        const TimeGrid& grid) {
    return solve_relaxation(pair.l, mu, grid);
}

// Residual of the discrete equation the curve was solved from.
inline double relaxation_residual(const RelaxationCurve& c, const KernelPair& pair) {
    const ConvolutionWeights wl(pair.l, c.grid);
    double worst = 0.0;
    for (std::size_t n = 1; n <= wl.intervals(); ++n) {
        double conv = wl.past_sum(n, c.values) + wl.diagonal(n) * c.values[n];
        worst = std::max(worst, std::abs(c.values[n] + c.mu * conv - 1.0));
    }
    return worst;
}

// Closed form s_mu(t) = E_alpha(-mu t^alpha) for the fractional pair.
inline RelaxationCurve closed_form_curve(double alpha, double mu,
                                         const TimeGrid& grid) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("closed_form_curve: alpha in (0,1)");
    if (mu < 0.0) throw std::domain_error("closed_form_curve: mu >= 0");
    std::vector<double> v(grid.size(), 1.0);
    for (std::size_t i = 1; i < grid.size(); ++i)
        v[i] = ml_neg(alpha, mu * std::pow(grid[i], alpha));
    return {mu, grid, std::move(v), CurveMethod::closed_form_ml};
}

struct BoundsReport {
    std::vector<double> lower, upper;  // aligned with grid nodes (node 0 = 1)
    double max_lower_violation = 0.0;  // max(lower - s, 0) over nodes
    double max_upper_violation = 0.0;  // max(s - upper, 0) over nodes
};

// Two-sided bounds of the relaxation function against the kernel pair.
inline BoundsReport check_bounds(const RelaxationCurve& c, const KernelPair& pair) {
    BoundsReport r;
    const std::size_t N = c.grid.intervals();
    r.lower.assign(N + 1, 1.0);
    r.upper.assign(N + 1, 1.0);
    for (std::size_t i = 1; i <= N; ++i) {
        const double t = c.grid[i];
        r.lower[i] = 1.0 / (1.0 + c.mu / pair.k(t));
        r.upper[i] = 1.0 / (1.0 + c.mu * pair.l.integral(t));
        r.max_lower_violation =
            std::max(r.max_lower_violation, r.lower[i] - c.values[i]);
        r.max_upper_violation =
            std::max(r.max_upper_violation, c.values[i] - r.upper[i]);
    }
    return r;
}

// lim_{t->inf} s_mu(t): positive iff l is integrable.
inline double limit_value(const KernelPair& pair, double mu) {
    if (!(mu > 0.0)) throw std::domain_error("limit_value: mu > 0");
    if (!pair.l_integrable) return 0.0;
    return 1.0 / (1.0 + mu * pair.l_l1_norm);
}

// Resolvent kernel h_mu + mu (l * h_mu) = mu l, solved by backward
// piecewise-constant product integration (h is singular at 0 for the
// fractional families, so the interval-constant representation is the
// stable choice). values[i] approximates h(t_i), i >= 1; values[0] = 0 by
// convention and unused in quadrature.
inline std::vector<double> resolvent_h(const Kernel& l, double mu,
                                       const TimeGrid& grid) {
    if (mu < 0.0) throw std::domain_error("resolvent_h: mu >= 0");
    const std::size_t N = grid.intervals();
    std::vector<double> h(N + 1, 0.0);
    if (mu == 0.0) return h;
    const HistoryWeights hw(l, grid);  // kappa/h interval masses of l
    for (std::size_t n = 1; n <= N; ++n) {
        double past = 0.0;
        for (std::size_t i = 1; i < n; ++i)
            past += h[i] * hw.coeff(n, i) * grid.step(i);
        const double diag = hw.coeff(n, n) * grid.step(n);
        h[n] = mu * (l(grid[n]) - past) / (1.0 + mu * diag);
    }
    return h;
}

inline std::vector<double> resolvent_h(const KernelPair& pair, double mu,
                                       const TimeGrid& grid) {
    return resolvent_h(pair.l, mu, grid);
}

struct RegularizedKernel {
    Kernel kernel;                      // piecewise-linear k_n from n * s_n
    std::vector<double> values;         // k_n at the grid nodes
    std::vector<double> convolution_values;  // independent k*h_n route, nodes >= 1
    double max_disagreement = 0.0;      // relative, over the trailing 3/4 of nodes
};

// k_n = k * h_n = n s_n. The identity route provides the samples (bounded,
// nonincreasing, k_n(0) = n); the discrete convolution of k against the
// piecewise-constant resolvent is kept as an independent cross-check.
inline RegularizedKernel regularized_k(const KernelPair& pair, double n,
                                       const TimeGrid& grid) {
    if (!(n >= 1.0)) throw std::domain_error("regularized_k: n >= 1");
    RegularizedKernel out;
    const auto s = solve_relaxation(pair, n, grid);
    out.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = n * s.values[i];
    out.kernel = Kernel(std::make_shared<SampledKernel>(grid, out.values));

    const auto h = resolvent_h(pair, n, grid);
    out.convolution_values.assign(grid.size(), 0.0);
    for (std::size_t m = 1; m < grid.size(); ++m) {
        double conv = 0.0;
        for (std::size_t i = 1; i <= m; ++i)
            conv += h[i] * pair.k.moment0(grid[m] - grid[i], grid[m] - grid[i - 1]);
        out.convolution_values[m] = conv;
        if (m >= grid.size() / 4)
            out.max_disagreement =
                std::max(out.max_disagreement,
                         std::abs(conv - out.values[m]) / std::abs(out.values[m]));
    }
    return out;
}

// Implicit solve of d/dt(k_n * u)(t_m) + mu u = f_m for a bounded kernel k_n
// and piecewise-linear u with no initial shift. The operator at node m is
// u_0 k_n(t_m) + sum_i d[m][i] (u_i - u_{i-1}); at node 0 it degenerates to
// k_n(0) u_0.
inline std::vector<double> solve_history_ode(const Kernel& kn, double kn_at_0,
                                             const HistoryWeights& hw, double mu,
                                             std::span<const double> f) {
    const std::size_t N = hw.intervals();
    if (f.size() != N + 1)
        throw std::invalid_argument("solve_history_ode: rhs/grid mismatch");
    std::vector<double> u(N + 1, 0.0);
    u[0] = f[0] / (kn_at_0 + mu);
    for (std::size_t m = 1; m <= N; ++m) {
        const double d = hw.diagonal(m);
        const double rhs = f[m] - u[0] * kn(hw.grid()[m]) - hw.past_sum(m, u);
        u[m] = (rhs + d * u[m - 1]) / (d + mu);
    }
    return u;
}

}  // namespace subdiff
