#pragma once

// Fully implicit solver for d/dt(k*[u-u0]) - div(a(t,x) Du) = 0 on a 1D
// Dirichlet interval, the Fourier-series oracle for constant coefficients,
// the decay-envelope report, and the maximum-principle check.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "subdiff/convolution.hpp"
#include "subdiff/fit.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/mesh.hpp"
#include "subdiff/relaxation.hpp"

namespace subdiff {

// Symmetric tridiagonal operator from midpoint coefficient sampling.
struct Tridiag {
    std::vector<double> diag, off;  // off[i] couples i and i+1

    // quadratic form (Au, u) with the discrete-L2 weight h
    double form(const Mesh1D& mesh, const Field& u) const {
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) s += diag[i] * u[i] * u[i];
        for (std::size_t i = 0; i + 1 < u.size(); ++i)
            s += 2.0 * off[i] * u[i] * u[i + 1];
        return mesh.h() * s;
    }
};

inline Tridiag assemble_operator(const Mesh1D& mesh, const Coefficient& coeff,
                                 double t) {
    const std::size_t M = mesh.interior();
    const double h = mesh.h();
    Tridiag A;
    A.diag.assign(M, 0.0);
    A.off.assign(M - 1, 0.0);
    std::vector<double> am(M + 1);  // a at cell midpoints x_{i+1/2}, i = 0..M
    for (std::size_t i = 0; i <= M; ++i) {
        am[i] = coeff.a(t, mesh.x(i) + 0.5 * h);
        if (am[i] < coeff.nu * (1.0 - 1e-12))
            throw std::runtime_error("assemble_operator: coefficient below nu");
    }
    for (std::size_t i = 0; i < M; ++i) A.diag[i] = (am[i] + am[i + 1]) / (h * h);
    for (std::size_t i = 0; i + 1 < M; ++i) A.off[i] = -am[i + 1] / (h * h);
    return A;
}

// (d I + A) u = rhs by the Thomas algorithm (SPD, no pivoting needed).
inline Field solve_shifted_tridiag(const Tridiag& A, double d, Field rhs) {
    const std::size_t M = rhs.size();
    std::vector<double> c(M, 0.0);
    double piv = A.diag[0] + d;
    rhs[0] /= piv;
    for (std::size_t i = 1; i < M; ++i) {
        c[i - 1] = A.off[i - 1] / piv;
        piv = A.diag[i] + d - A.off[i - 1] * c[i - 1];
        rhs[i] = (rhs[i] - A.off[i - 1] * rhs[i - 1]) / piv;
    }
    for (std::size_t i = M - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
    return rhs;
}

struct LinearRun {
    Mesh1D mesh;
    TimeGrid grid;
    std::vector<Field> u;  // per node, interior values
};

// Fully implicit history stepping; unconditionally stable for this sign
// structure. Returns the full trajectory (the history is needed anyway).
inline LinearRun step_solve(const Kernel& k, const Mesh1D& mesh,
                            const Coefficient& coeff, const Field& u0,
                            const TimeGrid& grid) {
    if (u0.size() != mesh.interior())
        throw std::invalid_argument("step_solve: u0 does not match the mesh");
    const HistoryWeights hw(k, grid);
    const std::size_t M = mesh.interior();
    LinearRun run{mesh, grid, {}};
    run.u.reserve(grid.size());
    run.u.push_back(u0);
    std::vector<double> past(M);
    for (std::size_t n = 1; n < grid.size(); ++n) {
        const double d = hw.diagonal(n);
        std::fill(past.begin(), past.end(), 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            const double c = hw.coeff(n, i);
            const auto& ui = run.u[i];
            const auto& um = run.u[i - 1];
            for (std::size_t q = 0; q < M; ++q) past[q] += c * (ui[q] - um[q]);
        }
        Field rhs(M);
        const auto& prev = run.u[n - 1];
        for (std::size_t q = 0; q < M; ++q) rhs[q] = d * prev[q] - past[q];
        const Tridiag A = assemble_operator(mesh, coeff, grid[n]);
        run.u.push_back(solve_shifted_tridiag(A, d, std::move(rhs)));
    }
    return run;
}

inline LinearRun step_solve(const KernelPair& pair, const Mesh1D& mesh,
                            const Coefficient& coeff, const Field& u0,
                            const TimeGrid& grid) {
    return step_solve(pair.k, mesh, coeff, u0, grid);
}

enum class SpectralTime { volterra, closed_form_ml };

// Fourier-series representation u = sum_n s_{nu lambda_n}(t) (u0|phi_n) phi_n
// with the discrete eigenpairs; constant coefficient a = nu I only.
inline LinearRun spectral_solution(const Mesh1D& mesh, const KernelPair& pair,
                                   double nu, const Field& u0, const TimeGrid& grid,
                                   SpectralTime time_method = SpectralTime::volterra) {
    if (u0.size() != mesh.interior())
        throw std::invalid_argument("spectral_solution: u0 does not match the mesh");
    if (time_method == SpectralTime::closed_form_ml &&
        pair.family != KernelFamily::fractional)
        throw std::invalid_argument(
            "spectral_solution: closed-form time requires the fractional family");
    const std::size_t M = mesh.interior();
    // per-mode relaxation curves share one weight table
    ConvolutionWeights wl(pair.l, grid);
    LinearRun run{mesh, grid, {}};
    run.u.assign(grid.size(), Field(M, 0.0));
    std::vector<std::vector<double>> modes(M);
    std::vector<double> coef(M);
    std::vector<std::vector<double>> phis(M);
    for (std::size_t n = 1; n <= M; ++n) {
        phis[n - 1] = mesh.eigenvector(n);
        coef[n - 1] = mesh.inner(u0, phis[n - 1]);
        const double mu = nu * mesh.eigenvalue(n);
        if (time_method == SpectralTime::volterra) {
            modes[n - 1] = solve_relaxation_values(wl, mu);
        } else {
            modes[n - 1].assign(grid.size(), 1.0);
            for (std::size_t i = 1; i < grid.size(); ++i)
                modes[n - 1][i] = ml_neg(pair.alpha, mu * std::pow(grid[i], pair.alpha));
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t n = 0; n < M; ++n) {
            const double c = coef[n] * modes[n][i];
            for (std::size_t q = 0; q < M; ++q) run.u[i][q] += c * phis[n][q];
        }
    return run;
}

struct LinearDecayReport {
    std::vector<double> times;
    std::vector<double> l2, pos, neg;      // norms of u, u_+, u_-
    std::vector<double> envelope;          // s_{nu lambda1^h}(t)
    double u0_l2 = 0.0, u0_pos = 0.0, u0_neg = 0.0;
    double lambda1_h = 0.0, lambda1_continuum = 0.0;
    double max_ratio = 0.0;      // |u|_2 / (s |u0|_2)
    double max_pos_ratio = 0.0;  // positive-part variant
    double max_neg_ratio = 0.0;
    double equality_deviation = 0.0;  // max | |u|/(s|u0|) - 1 |
    SlopeFit late_fit;                // slope of log |u|_2 vs log t
};

// Corollary-style decay envelopes with the discrete lambda1.
inline LinearDecayReport decay_check(const LinearRun& run, const KernelPair& pair,
                                     double nu) {
    LinearDecayReport rep;
    const auto& mesh = run.mesh;
    rep.lambda1_h = mesh.lambda1();
    rep.lambda1_continuum = mesh.lambda1_continuum();
    const auto env = solve_relaxation(pair, nu * rep.lambda1_h, run.grid);

    const std::size_t M = mesh.interior();
    Field up(M), un(M);
    const auto& u0 = run.u.front();
    for (std::size_t q = 0; q < M; ++q) {
        up[q] = std::max(u0[q], 0.0);
        un[q] = std::max(-u0[q], 0.0);
    }
    rep.u0_l2 = mesh.l2_norm(u0);
    rep.u0_pos = mesh.l2_norm(up);
    rep.u0_neg = mesh.l2_norm(un);

    for (std::size_t i = 0; i < run.grid.size(); ++i) {
        const auto& u = run.u[i];
        for (std::size_t q = 0; q < M; ++q) {
            up[q] = std::max(u[q], 0.0);
            un[q] = std::max(-u[q], 0.0);
        }
        rep.times.push_back(run.grid[i]);
        rep.l2.push_back(mesh.l2_norm(u));
        rep.pos.push_back(mesh.l2_norm(up));
        rep.neg.push_back(mesh.l2_norm(un));
        rep.envelope.push_back(env.values[i]);
        if (i == 0) continue;
        const double s = env.values[i];
        if (rep.u0_l2 > 0.0) {
            const double ratio = rep.l2.back() / (s * rep.u0_l2);
            rep.max_ratio = std::max(rep.max_ratio, ratio);
            rep.equality_deviation =
                std::max(rep.equality_deviation, std::abs(ratio - 1.0));
        }
        if (rep.u0_pos > 0.0)
            rep.max_pos_ratio =
                std::max(rep.max_pos_ratio, rep.pos.back() / (s * rep.u0_pos));
        else
            rep.max_pos_ratio = std::max(rep.max_pos_ratio,
                                         rep.pos.back() > 1e-12 ? 1e300 : 0.0);
        if (rep.u0_neg > 0.0)
            rep.max_neg_ratio =
                std::max(rep.max_neg_ratio, rep.neg.back() / (s * rep.u0_neg));
        else
            rep.max_neg_ratio = std::max(rep.max_neg_ratio,
                                         rep.neg.back() > 1e-12 ? 1e300 : 0.0);
    }
    rep.late_fit = fit_loglog_slope(rep.times, rep.l2, run.grid.back() / 100.0,
                                    run.grid.back());
    return rep;
}

struct LpDecayInfo {
    double p = 4.0;
    double rho = 0.0;  // 4(p-1)/p^2
    std::vector<double> times, lp_norm, envelope;  // s_{nu lambda1 rho(p)} |u0|_p
    double max_ratio = 0.0;
};

// Informational L_p series against the s_{nu lambda1 rho(p)} envelope; the
// membership hypothesis behind that rate is unproven, so no verdict is
// attached to this report.
inline LpDecayInfo lp_decay_info(const LinearRun& run, const KernelPair& pair,
                                 double nu, double p) {
    LpDecayInfo info;
    info.p = p;
    info.rho = 4.0 * (p - 1.0) / (p * p);
    const double mu = nu * run.mesh.lambda1() * info.rho;
    const auto env = solve_relaxation(pair, mu, run.grid);
    const double n0 = run.mesh.lp_norm(run.u.front(), p);
    for (std::size_t i = 0; i < run.grid.size(); ++i) {
        info.times.push_back(run.grid[i]);
        info.lp_norm.push_back(run.mesh.lp_norm(run.u[i], p));
        info.envelope.push_back(env.values[i] * n0);
        if (i > 0 && n0 > 0.0)
            info.max_ratio =
                std::max(info.max_ratio, info.lp_norm.back() / info.envelope.back());
    }
    return info;
}

struct MaxPrincipleReport {
    double lo = 0.0, hi = 0.0;  // parabolic bounds min(0, min u0), max(0, max u0)
    double max_violation = 0.0;
};

inline MaxPrincipleReport max_principle_check(const LinearRun& run) {
    MaxPrincipleReport rep;
    for (double v : run.u.front()) {
        rep.lo = std::min(rep.lo, v);
        rep.hi = std::max(rep.hi, v);
    }
    for (const auto& u : run.u)
        for (double v : u)
            rep.max_violation =
                std::max({rep.max_violation, rep.lo - v, v - rep.hi});
    return rep;
}

}  // namespace subdiff
