#pragma once

// Time-fractional p-Laplace and porous-medium solvers in 1D: implicit L1
// time discretization, damped Newton in space, decay-exponent reports, and
// the separable-solution optimality check via the first nonlinear eigenpair.

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "subdiff/convolution.hpp"
#include "subdiff/fit.hpp"
#include "subdiff/fractional_ode.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/mesh.hpp"
#include "subdiff/pde_linear.hpp"

namespace subdiff {

enum class NonlinearKind { p_laplace, porous_medium };

struct NonlinearProblem {
    NonlinearKind kind;
    double exponent;  // p > 1 (p-Laplace) or m > 0 (porous medium)
    double alpha;
    Mesh1D mesh;
    Field u0;
    TimeGrid grid;
    double eps_reg;  // p-Laplace flux regularization

    NonlinearProblem(NonlinearKind k, double expo, double a, Mesh1D mesh_,
                     Field u0_, TimeGrid grid_)
        : kind(k),
          exponent(expo),
          alpha(a),
          mesh(std::move(mesh_)),
          u0(std::move(u0_)),
          grid(std::move(grid_)) {
        if (kind == NonlinearKind::p_laplace && !(exponent > 1.0))
            throw std::invalid_argument("NonlinearProblem: p > 1 required");
        if (kind == NonlinearKind::porous_medium && !(exponent > 0.0))
            throw std::invalid_argument("NonlinearProblem: m > 0 required");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("NonlinearProblem: alpha in (0,1)");
        if (u0.size() != mesh.interior())
            throw std::invalid_argument("NonlinearProblem: u0/mesh mismatch");
        double scale = 0.0;
        for (double v : u0) {
            scale = std::max(scale, std::abs(v));
            if (kind == NonlinearKind::porous_medium && v < 0.0)
                throw std::invalid_argument(
                    "NonlinearProblem: porous medium needs u0 >= 0");
        }
        eps_reg = 1e-8 * std::max(scale, 1e-8) / mesh.h();
    }

    // graded near 0 for the t^alpha layer, geometric stretching for the tail
    static TimeGrid default_grid(double alpha, double T = 1e4,
                                 std::size_t n_graded = 160, double ratio = 1.07) {
        return TimeGrid::composite(1.0, n_graded, 2.0 / alpha, T, ratio);
    }

    // slow rates need extra decades before the fitting window turns asymptotic
    static double suggested_horizon(double rate) {
        return rate <= 0.15 ? 1e6 : rate <= 0.21 ? 1e5 : 1e4;
    }

    double decay_rate() const {
        return kind == NonlinearKind::p_laplace ? alpha / (exponent - 1.0)
                                                : alpha / exponent;
    }
    double norm_order() const { return theorem_norm_order(kind, exponent, 1); }

    // Norm index of the decay theorems in spatial dimension N: the L2 /
    // L_{m+1} branch when the exponent clears the Sobolev threshold, the
    // critical L_s branch below it (reachable only for N > 2; the 1D solver
    // always sits in the first branch).
    static double theorem_norm_order(NonlinearKind kind, double expo, int dim) {
        const double N = dim;
        if (kind == NonlinearKind::p_laplace) {
            if (expo >= 2.0 * N / (N + 2.0)) return 2.0;
            return N * (2.0 - expo) / expo;
        }
        if (expo >= (N - 2.0) / (N + 2.0)) return expo + 1.0;
        return N * (1.0 - expo) / 2.0;
    }
};

namespace detail {

// odd-extended power, keeps the scheme monotone when iterates cross zero
inline double signed_pow(double u, double m) {
    return u == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(u), m), u);
}

// Spatial operator G(u) and its tridiagonal Jacobian.
class NonlinearSpace {
   public:
    explicit NonlinearSpace(const NonlinearProblem& p) : p_(p) {}

    void residual(const Field& u, Field& out) const {
        const std::size_t M = p_.mesh.interior();
        const double h = p_.mesh.h();
        out.assign(M, 0.0);
        if (p_.kind == NonlinearKind::p_laplace) {
            double flux_prev = flux(u[0] / h);
            for (std::size_t i = 0; i < M; ++i) {
                const double dnext = ((i + 1 < M ? u[i + 1] : 0.0) - u[i]) / h;
                const double flux_next = flux(dnext);
                out[i] = -(flux_next - flux_prev) / h;
                flux_prev = flux_next;
            }
        } else {
            const double h2 = h * h;
            const double m = p_.exponent;
            for (std::size_t i = 0; i < M; ++i) {
                const double wl = i > 0 ? signed_pow(u[i - 1], m) : 0.0;
                const double wc = signed_pow(u[i], m);
                const double wr = i + 1 < M ? signed_pow(u[i + 1], m) : 0.0;
                out[i] = -(wl - 2.0 * wc + wr) / h2;
            }
        }
    }

    void jacobian(const Field& u, std::vector<double>& diag,
                  std::vector<double>& lower, std::vector<double>& upper) const {
        const std::size_t M = p_.mesh.interior();
        const double h = p_.mesh.h();
        const double h2 = h * h;
        diag.assign(M, 0.0);
        lower.assign(M, 0.0);
        upper.assign(M, 0.0);
        if (p_.kind == NonlinearKind::p_laplace) {
            std::vector<double> fp(M + 1);
            for (std::size_t e = 0; e <= M; ++e) {
                const double lo = e > 0 ? u[e - 1] : 0.0;
                const double hi = e < M ? u[e] : 0.0;
                fp[e] = dflux((hi - lo) / h);
            }
            for (std::size_t i = 0; i < M; ++i) {
                diag[i] = (fp[i] + fp[i + 1]) / h2;
                if (i > 0) lower[i] = -fp[i] / h2;
                if (i + 1 < M) upper[i] = -fp[i + 1] / h2;
            }
        } else {
            const double m = p_.exponent;
            std::vector<double> dphi(M);
            for (std::size_t i = 0; i < M; ++i)
                dphi[i] = m * std::pow(std::max(std::abs(u[i]), 1e-13), m - 1.0);
            for (std::size_t i = 0; i < M; ++i) {
                diag[i] = 2.0 * dphi[i] / h2;
                if (i > 0) lower[i] = -dphi[i - 1] / h2;
                if (i + 1 < M) upper[i] = -dphi[i + 1] / h2;
            }
        }
    }

    double flux(double d) const {
        const double e2 = p_.eps_reg * p_.eps_reg;
        return std::pow(d * d + e2, 0.5 * (p_.exponent - 2.0)) * d;
    }
    double dflux(double d) const {
        const double e2 = p_.eps_reg * p_.eps_reg;
        return std::pow(d * d + e2, 0.5 * (p_.exponent - 4.0)) *
               ((p_.exponent - 1.0) * d * d + e2);
    }

   private:
    const NonlinearProblem& p_;
};

// general tridiagonal Thomas; the systems here are column-dominant M-matrices
inline Field solve_tridiag(std::vector<double> diag, const std::vector<double>& lower,
                           const std::vector<double>& upper, Field rhs) {
    const std::size_t M = rhs.size();
    for (std::size_t i = 1; i < M; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[M - 1] /= diag[M - 1];
    for (std::size_t i = M - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    return rhs;
}

inline double inf_norm(const Field& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Lagged-diffusivity iteration for G_p(z) = f (inverse p-Laplacian):
// relinearize the edge diffusivities at the previous iterate and solve the
// resulting linear Dirichlet problem; globally convergent for the monotone
// operator, immune to the zero-gradient Jacobian degeneracy of Newton.
inline Field solve_plap_inverse(const NonlinearSpace& space, const Mesh1D& mesh,
                                double p_exp, double eps, const Field& f,
                                Field z) {
    const std::size_t M = mesh.interior();
    const double h = mesh.h();
    const double h2 = h * h;
    std::vector<double> diag(M), lower(M), upper(M), a(M + 1);
    Field G(M);
    for (int it = 0; it < 600; ++it) {
        for (std::size_t e = 0; e <= M; ++e) {
            const double lo = e > 0 ? z[e - 1] : 0.0;
            const double hi = e < M ? z[e] : 0.0;
            const double d = (hi - lo) / h;
            a[e] = std::pow(d * d + eps * eps, 0.5 * (p_exp - 2.0));
        }
        for (std::size_t i = 0; i < M; ++i) {
            diag[i] = (a[i] + a[i + 1]) / h2;
            lower[i] = i > 0 ? -a[i] / h2 : 0.0;
            upper[i] = i + 1 < M ? -a[i + 1] / h2 : 0.0;
        }
        Field znew = solve_tridiag(diag, lower, upper, f);
        double delta = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            znew[i] = 0.3 * z[i] + 0.7 * znew[i];
            delta = std::max(delta, std::abs(znew[i] - z[i]));
            scale = std::max(scale, std::abs(znew[i]));
        }
        z = std::move(znew);
        if (delta <= 1e-13 * scale) {
            space.residual(z, G);
            double rn = 0.0;
            for (std::size_t i = 0; i < M; ++i)
                rn = std::max(rn, std::abs(G[i] - f[i]));
            if (rn <= 1e-9 * (1.0 + inf_norm(f))) return z;
        }
    }
    throw std::runtime_error("solve_plap_inverse: lagged diffusivity stagnated");
}

// Damped Newton for d u + G(u) = r; throws with diagnostics on failure.
inline Field newton_step(const NonlinearSpace& space, double d, const Field& rhs,
                         Field guess, double tol) {
    const std::size_t M = rhs.size();
    Field F(M), trial(M), Ft(M);
    std::vector<double> diag, lower, upper;
    for (int rescue = 0; rescue < 4; ++rescue) {
        Field u = guess;
        for (double& g : u)
            g *= std::pow(0.5, rescue);  // pseudo-continuation restarts
        space.residual(u, F);
        for (std::size_t i = 0; i < M; ++i) F[i] += d * u[i] - rhs[i];
        double fn = inf_norm(F);
        for (int it = 0; it < 100; ++it) {
            if (fn <= tol) return u;
            space.jacobian(u, diag, lower, upper);
            for (std::size_t i = 0; i < M; ++i) diag[i] += d;
            Field delta = solve_tridiag(diag, lower, upper, F);
            double lam = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 40; ++ls) {
                for (std::size_t i = 0; i < M; ++i) trial[i] = u[i] - lam * delta[i];
                space.residual(trial, Ft);
                for (std::size_t i = 0; i < M; ++i) Ft[i] += d * trial[i] - rhs[i];
                const double ftn = inf_norm(Ft);
                if (ftn < fn * (1.0 - 1e-4 * lam) || ftn <= tol) {
                    u = trial;
                    F = Ft;
                    fn = ftn;
                    accepted = true;
                    break;
                }
                lam *= 0.5;
            }
            if (!accepted) break;
        }
    }
    throw std::runtime_error("solve_nonlinear: Newton failed, |F| stagnated");
}

}  // namespace detail

inline std::vector<Field> solve_nonlinear(const NonlinearProblem& p) {
    const Kernel k(std::make_shared<detail::GKernel>(1.0 - p.alpha));
    const HistoryWeights hw(k, p.grid);
    const detail::NonlinearSpace space(p);
    const std::size_t M = p.mesh.interior();
    std::vector<Field> u;
    u.reserve(p.grid.size());
    u.push_back(p.u0);
    Field past(M), rhs(M);
    for (std::size_t n = 1; n < p.grid.size(); ++n) {
        const double d = hw.diagonal(n);
        std::fill(past.begin(), past.end(), 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            const double c = hw.coeff(n, i);
            for (std::size_t q = 0; q < M; ++q)
                past[q] += c * (u[i][q] - u[i - 1][q]);
        }
        for (std::size_t q = 0; q < M; ++q) rhs[q] = d * u[n - 1][q] - past[q];
        const double tol = 1e-10 * (1.0 + d * detail::inf_norm(u[n - 1]));
        u.push_back(detail::newton_step(space, d, rhs, u[n - 1], tol));
    }
    return u;
}

struct NonlinearDecayReport {
    std::vector<double> times, norms;  // L2 (p-Laplace) or L_{m+1} (porous medium)
    double norm_order = 2.0;
    double fitted_exponent = 0.0;
    double target_exponent = 0.0;
    bool exponent_ok = false;
    bool no_extinction = false;
    bool truncated_fit = false;
    double min_norm = 0.0;
};

inline NonlinearDecayReport exponent_report(const std::vector<Field>& run,
                                            const NonlinearProblem& p,
                                            double rel_band = 0.10) {
    NonlinearDecayReport rep;
    rep.norm_order = p.norm_order();
    rep.min_norm = 1e308;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        rep.times.push_back(p.grid[i]);
        rep.norms.push_back(p.mesh.lp_norm(run[i], rep.norm_order));
        rep.min_norm = std::min(rep.min_norm, rep.norms.back());
    }
    rep.no_extinction = rep.min_norm > 0.0;
    rep.truncated_fit = rep.min_norm < 1e-14;
    rep.target_exponent = -p.decay_rate();
    const double T = p.grid.back();
    const auto fit = fit_loglog_slope(rep.times, rep.norms, T / 100.0, T);
    rep.fitted_exponent = fit.slope;
    rep.exponent_ok =
        fit.points >= 3 && std::abs(fit.slope - rep.target_exponent) <=
                               rel_band * std::abs(rep.target_exponent);
    return rep;
}

struct SeparableReport {
    double lambda1 = 0.0;
    Field eigenvector;
    std::vector<double> rayleigh_history;
    double max_pde_residual = 0.0;   // relative, over sampled nodes
    double solver_mismatch = 0.0;    // relative L2 against solve_nonlinear
    bool v_positive = false;
    bool pass = false;
};

// First eigenpair of the (regularized) spatial operator by inverse-power
// iteration, the separable solution v(t) w(x), its discrete PDE residual,
// and the cross-check against the full nonlinear solver.
inline SeparableReport separable_check(const NonlinearProblem& p,
                                       double residual_tol = 1e-4,
                                       double match_tol = 1e-2) {
    const detail::NonlinearSpace space(p);
    const std::size_t M = p.mesh.interior();
    SeparableReport rep;

    // inverse-power-type iteration on the Rayleigh quotient
    Field w = p.mesh.eigenvector(1);
    double lambda_prev = 0.0;
    std::vector<double> diag, lower, upper;
    for (int it = 0; it < 200; ++it) {
        Field z;
        if (p.kind == NonlinearKind::p_laplace) {
            z = detail::solve_plap_inverse(space, p.mesh, p.exponent, p.eps_reg, w, w);
        } else {
            // -Lap y = w, then z = y^(1/m)
            const double h2 = p.mesh.h() * p.mesh.h();
            diag.assign(M, 2.0 / h2);
            lower.assign(M, -1.0 / h2);
            upper.assign(M, -1.0 / h2);
            lower[0] = 0.0;
            upper[M - 1] = 0.0;
            Field y = detail::solve_tridiag(diag, lower, upper, w);
            z.resize(M);
            for (std::size_t q = 0; q < M; ++q)
                z[q] = detail::signed_pow(y[q], 1.0 / p.exponent);
        }
        const double nz = p.mesh.l2_norm(z);
        for (auto& v : z) v /= nz;
        w = z;
        // Rayleigh quotient lambda = (w, G(w)) for |w|_2 = 1
        Field Gw;
        space.residual(w, Gw);
        double lam = p.mesh.inner(w, Gw);
        rep.rayleigh_history.push_back(lam);
        if (it > 3 && std::abs(lam - lambda_prev) <= 1e-11 * std::abs(lam)) {
            lambda_prev = lam;
            break;
        }
        lambda_prev = lam;
        if (it == 199)
            throw std::runtime_error(
                "separable_check: eigenvalue iteration stagnated after 200 sweeps");
    }
    rep.lambda1 = lambda_prev;
    rep.eigenvector = w;

    // scalar profile d^alpha(v - 1) + lambda1 v^gamma = 0
    const double gamma = p.kind == NonlinearKind::p_laplace ? p.exponent - 1.0
                                                            : p.exponent;
    ScalarProblem sp(p.alpha, rep.lambda1, gamma, 1.0, p.grid);
    const auto v = solve_scalar(sp);
    rep.v_positive = true;
    for (double x : v)
        if (!(x > 0.0)) rep.v_positive = false;

    // discrete PDE residual of u = v(t) w(x) on a spread of nodes
    const Kernel k(std::make_shared<detail::GKernel>(1.0 - p.alpha));
    const HistoryWeights hw(k, p.grid);
    Field G(M), scaled(M);
    const std::size_t stride = std::max<std::size_t>(1, p.grid.size() / 24);
    for (std::size_t n = 1; n < p.grid.size(); n += stride) {
        const double hist = hw.operator_at(n, v);
        for (std::size_t q = 0; q < M; ++q) scaled[q] = v[n] * w[q];
        space.residual(scaled, G);
        const double scale = rep.lambda1 * std::pow(v[n], gamma);
        for (std::size_t q = 0; q < M; ++q) {
            const double r = w[q] * hist + G[q];
            rep.max_pde_residual =
                std::max(rep.max_pde_residual, std::abs(r) / scale);
        }
    }

    // full solver launched from u0 = w must reproduce v(t) w
    NonlinearProblem pw(p.kind, p.exponent, p.alpha, p.mesh, w, p.grid);
    const auto full = solve_nonlinear(pw);
    for (std::size_t n = 0; n < p.grid.size(); ++n) {
        Field diff(M);
        for (std::size_t q = 0; q < M; ++q) diff[q] = full[n][q] - v[n] * w[q];
        rep.solver_mismatch = std::max(
            rep.solver_mismatch, p.mesh.l2_norm(diff) / (v[n] * 1.0));
    }

    rep.pass = rep.v_positive && rep.max_pde_residual <= residual_tol &&
               rep.solver_mismatch <= match_tol;
    return rep;
}

// Rayleigh quotient sum |D psi|^p h / sum psi^2 h of the regularized operator.
inline double rayleigh_quotient(const NonlinearProblem& p, const Field& psi) {
    const detail::NonlinearSpace space(p);
    Field G;
    space.residual(psi, G);
    double num = p.mesh.inner(psi, G);
    const double nrm = p.mesh.l2_norm(psi);
    return num / (nrm * nrm);
}

}  // namespace subdiff
