#pragma once

// Discrete surfaces for the integro-differential operator d/dt (k*[u - u0]):
// the chain-rule surrogate (fundamental identity) residual for convex maps,
// and the Lp-norm inequality gap on discrete measures.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "subdiff/convolution.hpp"
#include "subdiff/kernels.hpp"

namespace subdiff {

struct HistoryOperator {
    Kernel kernel;
    double kernel_at_0;  // finite for regularized kernels
    HistoryWeights weights;

    HistoryOperator(Kernel k, double k0, const TimeGrid& grid)
        : kernel(std::move(k)), kernel_at_0(k0), weights(kernel, grid) {}
};

// d/dt (k*[v - v0])(t_n) at all nodes; exact zero for constant v = v0.
inline std::vector<double> apply_history(const HistoryOperator& op,
                                         std::span<const double> v, double v0) {
    if (v.size() != op.weights.grid().size())
        throw std::invalid_argument("apply_history: samples do not match the grid");
    return op.weights.apply(v, v0, op.kernel);
}

// Convex C^1 maps from the catalog used by the energy arguments.
class ConvexMap {
   public:
    enum class Kind { square, power_p, smoothed_positive_part };

    static ConvexMap square() { return {Kind::square, 0.0}; }
    static ConvexMap power_p(double p) {
        if (!(p > 1.0)) throw std::invalid_argument("ConvexMap: p > 1 required");
        return {Kind::power_p, p};
    }
    static ConvexMap smoothed_positive_part(double eps) {
        if (!(eps > 0.0)) throw std::invalid_argument("ConvexMap: eps > 0 required");
        return {Kind::smoothed_positive_part, eps};
    }

    double operator()(double y) const {
        switch (kind_) {
            case Kind::square:
                return 0.5 * y * y;
            case Kind::power_p:
                return std::pow(std::abs(y), param_) / param_;
            case Kind::smoothed_positive_part:
                return y > 0.0 ? std::sqrt(y * y + param_ * param_) - param_ : 0.0;
        }
        return 0.0;
    }
    double deriv(double y) const {
        switch (kind_) {
            case Kind::square:
                return y;
            case Kind::power_p:
                return y == 0.0 ? 0.0
                                : std::copysign(std::pow(std::abs(y), param_ - 1.0), y);
            case Kind::smoothed_positive_part:
                return y > 0.0 ? y / std::sqrt(y * y + param_ * param_) : 0.0;
        }
        return 0.0;
    }
    Kind kind() const { return kind_; }

   private:
    ConvexMap(Kind k, double p) : kind_(k), param_(p) {}
    Kind kind_;
    double param_;
};

namespace detail {
inline double interp_linear(const TimeGrid& g, std::span<const double> v, double t) {
    const auto& ns = g.nodes();
    auto it = std::upper_bound(ns.begin(), ns.end(), t);
    std::size_t i = static_cast<std::size_t>(it - ns.begin());
    if (i == 0) i = 1;
    if (i >= ns.size()) i = ns.size() - 1;
    const double w = (t - g[i - 1]) / g.step(i);
    return v[i - 1] * (1.0 - w) + v[i] * w;
}
}  // namespace detail

// Residual of the fundamental identity
//   H'(u) d/dt(k*u) = d/dt(k*H(u)) + (-H(u) + H'(u)u) k(t)
//                     + int_0^t (H(u(t-s)) - H(u(t)) - H'(u(t))[u(t-s)-u(t)]) (-k'(s)) ds
// with every term discretized against the same piecewise-linear kernel and
// data; entries for nodes 1..N (index 0 unused, set to 0).
inline std::vector<double> fundamental_identity_residual(const ConvexMap& H,
                                                         std::span<const double> u,
                                                         const HistoryOperator& op) {
    const TimeGrid& g = op.weights.grid();
    if (u.size() != g.size())
        throw std::invalid_argument("fundamental_identity_residual: sample mismatch");
    const std::size_t N = g.intervals();

    std::vector<double> Hu(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) Hu[i] = H(u[i]);
    std::vector<double> kv(u.size());
    kv[0] = op.kernel_at_0;
    for (std::size_t i = 1; i < u.size(); ++i) kv[i] = op.kernel(g[i]);

    std::vector<double> res(u.size(), 0.0);
    for (std::size_t n = 1; n <= N; ++n) {
        const double un = u[n];
        const double dHn = H.deriv(un);
        const double lhs = dHn * (u[0] * kv[n] + op.weights.operator_at(n, u));
        const double rhs1 = Hu[0] * kv[n] + op.weights.operator_at(n, Hu);
        const double rhs2 = (-Hu[n] + dHn * un) * kv[n];
        double rhs3 = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            const double dk = kv[i - 1] - kv[i];  // mass of -k' over [t_{i-1}, t_i]
            const double smid = 0.5 * (g[i - 1] + g[i]);
            const double umid = detail::interp_linear(g, u, g[n] - smid);
            rhs3 += (H(umid) - Hu[n] - dHn * (umid - un)) * dk;
        }
        res[n] = lhs - rhs1 - rhs2 - rhs3;
    }
    return res;
}

// Gap of the Lp-norm inequality on a discrete measure: for each node n,
//   sum_q m_q |u_nq|^{p-2} u_nq [d/dt k*(u_q - u0_q)](t_n)
//     -  |u(t_n)|_p^{p-1} [d/dt k*(|u(.)|_p - |u0|_p)](t_n)
// which is nonnegative for nonincreasing kernels up to rounding.
inline std::vector<double> lp_gap(const HistoryOperator& op,
                                  const std::vector<std::vector<double>>& u,
                                  std::span<const double> u0,
                                  std::span<const double> measure, double p) {
    if (!(p > 1.0)) throw std::domain_error("lp_gap: p > 1 required");
    const TimeGrid& g = op.weights.grid();
    const std::size_t N = g.intervals();
    if (u.size() != g.size())
        throw std::invalid_argument("lp_gap: time samples do not match the grid");
    const std::size_t Q = u0.size();
    if (measure.size() != Q)
        throw std::invalid_argument("lp_gap: measure/initial size mismatch");
    for (const auto& row : u)
        if (row.size() != Q) throw std::invalid_argument("lp_gap: ragged samples");

    std::vector<double> kv(g.size());
    kv[0] = op.kernel_at_0;
    for (std::size_t i = 1; i < g.size(); ++i) kv[i] = op.kernel(g[i]);

    // norms per node and of the initial datum
    std::vector<double> norms(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s = 0.0;
        for (std::size_t q = 0; q < Q; ++q)
            s += measure[q] * std::pow(std::abs(u[i][q]), p);
        norms[i] = std::pow(s, 1.0 / p);
    }
    double n0 = 0.0;
    for (std::size_t q = 0; q < Q; ++q)
        n0 += measure[q] * std::pow(std::abs(u0[q]), p);
    n0 = std::pow(n0, 1.0 / p);

    // per-DOF history series
    std::vector<double> dof(g.size());
    std::vector<double> term1(g.size(), 0.0);
    for (std::size_t q = 0; q < Q; ++q) {
        for (std::size_t i = 0; i < g.size(); ++i) dof[i] = u[i][q];
        for (std::size_t n = 1; n <= N; ++n) {
            const double hist =
                op.weights.operator_at(n, dof) + (dof[0] - u0[q]) * kv[n];
            const double un = u[n][q];
            const double w =
                un == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(un), p - 1.0), un);
            term1[n] += measure[q] * w * hist;
        }
    }

    std::vector<double> gap(g.size(), 0.0);
    for (std::size_t n = 1; n <= N; ++n) {
        const double hist_norm =
            op.weights.operator_at(n, norms) + (norms[0] - n0) * kv[n];
        gap[n] = term1[n] - std::pow(norms[n], p - 1.0) * hist_norm;
    }
    return gap;
}

}  // namespace subdiff
