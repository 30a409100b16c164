#pragma once

// Tauberian verification: late-time decay models per kernel family, direct
// window fits on relaxation curves, and the numerical Laplace transform
// cross-check against the closed forms s-hat = 1/(z (1 + mu l-hat)).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "subdiff/fit.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/mittag_leffler.hpp"
#include "subdiff/relaxation.hpp"

namespace subdiff {

enum class DecayForm { algebraic, logarithmic, exponential, plateau };

struct AsymptoticModel {
    KernelFamily family{};
    DecayForm form = DecayForm::algebraic;
    double rate = 0.0;       // algebraic exponent or exponential rate
    double prefactor = 0.0;  // s ~ prefactor t^-rate when known
    bool prefactor_known = false;
    double limit = 0.0;  // plateau value
};

// Late-time model of s_mu per family with computed parameters.
inline AsymptoticModel predict(const KernelPair& pair, double mu) {
    if (!(mu > 0.0)) throw std::domain_error("predict: mu > 0");
    AsymptoticModel m;
    m.family = pair.family;
    switch (pair.family) {
        case KernelFamily::fractional:
            m.form = DecayForm::algebraic;
            m.rate = pair.alpha;
            m.prefactor = 1.0 / (mu * gamma_fn(1.0 - pair.alpha));
            m.prefactor_known = true;
            break;
        case KernelFamily::sum_fractional: {
            // the lowest order dominates: mu s ~ delta_1 g_{1-alpha_1}
            const auto& lead = pair.terms.front();
            m.form = DecayForm::algebraic;
            m.rate = lead.alpha;
            m.prefactor = lead.delta / (mu * gamma_fn(1.0 - lead.alpha));
            m.prefactor_known = true;
            break;
        }
        case KernelFamily::fractional_exp:
            m.form = DecayForm::exponential;
            m.rate = omega_root(pair.alpha, pair.gamma, mu);
            break;
        case KernelFamily::switched_exp:
            m.form = DecayForm::plateau;
            m.limit = limit_value(pair, mu);
            break;
        case KernelFamily::distributed_order:
            m.form = DecayForm::logarithmic;  // mu s log t -> 1
            break;
        case KernelFamily::switched_distributed:
            m.form = DecayForm::algebraic;  // same t^-1 decay as the kernel
            m.rate = 1.0;
            m.prefactor_known = false;
            break;
    }
    return m;
}

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass:
            return "pass";
        case Verdict::fail:
            return "fail";
        default:
            return "inconclusive";
    }
}

struct AsymptoticCheck {
    Verdict verdict = Verdict::inconclusive;
    double measured = 0.0;  // fitted rate / end ratio / end value per form
    double expected = 0.0;
    std::string note;
};

// Window verification of a decay model on a relaxation curve.
inline AsymptoticCheck verify_asymptotics(const RelaxationCurve& c,
                                          const AsymptoticModel& m, double win_lo,
                                          double win_hi) {
    AsymptoticCheck out;
    if (win_hi > c.grid.back() * (1.0 + 1e-12) || win_lo >= win_hi) {
        out.note = "window outside the curve";
        return out;
    }
    // last node inside the window with a trustworthy (non-cancelled) value
    std::size_t end = 0;
    std::size_t inside = 0;
    for (std::size_t i = 1; i < c.grid.size(); ++i) {
        if (c.grid[i] < win_lo || c.grid[i] > win_hi) continue;
        ++inside;
        if (c.values[i] > 1e-12) end = i;
    }
    if (inside < 3 || end == 0) {
        out.note = "window too short for the regime";
        return out;
    }

    switch (m.form) {
        case DecayForm::algebraic: {
            const auto fit =
                fit_loglog_slope(c.grid.nodes(), c.values, win_lo, win_hi);
            out.measured = fit.slope;
            out.expected = -m.rate;
            if (fit.points < 3) {
                out.note = "too few positive samples";
                return out;
            }
            bool ok = std::abs(fit.slope + m.rate) <= 0.1 * m.rate;
            if (m.prefactor_known) {
                const double ratio =
                    c.values[end] / (m.prefactor * std::pow(c.grid[end], -m.rate));
                ok = ok && ratio >= 0.5 && ratio <= 2.0;
                out.note = "end ratio " + std::to_string(ratio);
            } else {
                // bounded t^rate s within [0.5, 2] x fitted level
                double lo = 1e308, hi = 0.0, sum = 0.0;
                std::size_t n = 0;
                for (std::size_t i = 1; i < c.grid.size(); ++i) {
                    if (c.grid[i] < win_lo || c.grid[i] > win_hi) continue;
                    if (!(c.values[i] > 1e-12)) continue;
                    const double v = c.values[i] * std::pow(c.grid[i], m.rate);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                    sum += v;
                    ++n;
                }
                const double fitted_c = sum / double(n);
                ok = ok && lo >= 0.5 * fitted_c && hi <= 2.0 * fitted_c;
                out.note = "fitted level " + std::to_string(fitted_c);
            }
            out.verdict = ok ? Verdict::pass : Verdict::fail;
            return out;
        }
        case DecayForm::logarithmic: {
            out.measured = c.mu * c.values[end] * std::log(c.grid[end]);
            out.expected = 1.0;
            out.verdict = (out.measured >= 0.7 && out.measured <= 1.3)
                              ? Verdict::pass
                              : Verdict::fail;
            return out;
        }
        case DecayForm::exponential: {
            const double fit_hi = c.grid[end];
            const auto fit =
                fit_semilog_rate(c.grid.nodes(), c.values, win_lo, fit_hi);
            out.measured = -fit.slope;
            out.expected = m.rate;
            if (fit.points < 3) {
                out.note = "too few positive samples";
                return out;
            }
            // one-sided: s <= M e^(-w t) with unknown M
            out.verdict = out.measured >= 0.9 * m.rate ? Verdict::pass
                                                       : Verdict::fail;
            return out;
        }
        case DecayForm::plateau: {
            out.measured = c.values.back();
            out.expected = m.limit;
            out.verdict = std::abs(out.measured - m.limit) <= 1e-3
                              ? Verdict::pass
                              : Verdict::fail;
            return out;
        }
    }
    return out;
}

enum class TailModel { none, algebraic, exponential, constant };

struct LaplaceResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool tail_mismatch = false;  // data trend inconsistent with the tail model
};

// int_0^T e^(-zt) f(t) dt by product integration of the exponential weight
// against piecewise-linear f, plus an analytic or quadrature tail beyond T.
inline LaplaceResult numerical_laplace(const TimeGrid& grid,
                                       std::span<const double> f, double z,
                                       TailModel tail = TailModel::none,
                                       double tail_param = 0.0) {
    if (!(z > 0.0)) throw std::domain_error("numerical_laplace: z > 0");
    if (f.size() != grid.size())
        throw std::invalid_argument("numerical_laplace: sample/grid mismatch");
    double total = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double a = grid[i - 1], h = grid.step(i);
        const double za = std::exp(-z * a);
        const double x = z * h;
        // m0 = int_0^h e^(-zu) du, m1 = int_0^h u e^(-zu) du (scaled by e^(-za))
        double m0, m1;
        if (x > 1e-4) {
            m0 = -std::expm1(-x) / z;
            m1 = (1.0 - (1.0 + x) * std::exp(-x)) / (z * z);
        } else {
            m0 = h * (1.0 - 0.5 * x + x * x / 6.0 - x * x * x / 24.0);
            m1 = h * h * (0.5 - x / 3.0 + 0.125 * x * x - x * x * x / 30.0);
        }
        const double w_left = za * (m0 - m1 / h);
        const double w_right = za * (m1 / h);
        total += w_left * f[i - 1] + w_right * f[i];
    }
    LaplaceResult out;
    const double T = grid.back();
    const double fT = f.back();
    double tail_value = 0.0;
    if (tail == TailModel::algebraic && fT > 0.0) {
        // f(t) ~ f(T) (t/T)^(-rho) beyond T, integrated adaptively on the
        // exponential support
        const double rho = tail_param;
        tail_value = integrate(
            [&](double t) { return fT * std::pow(t / T, -rho) * std::exp(-z * t); },
            T, T + 60.0 / z, 1e-10, 0.0, 48, 16);
        // consistency of the trend: local slope near T vs -rho
        const auto local = fit_loglog_slope(grid.nodes(), f, T / 10.0, T);
        if (local.points >= 3 && std::abs(local.slope + rho) > 0.5 * std::max(rho, 0.2))
            out.tail_mismatch = true;
    } else if (tail == TailModel::exponential && fT > 0.0) {
        const double w = tail_param;
        tail_value = fT * std::exp(-z * T) / (z + w);
        const auto local = fit_semilog_rate(grid.nodes(), f, T / 2.0, T);
        if (local.points >= 3 && std::abs(-local.slope - w) > 0.5 * w)
            out.tail_mismatch = true;
    } else if (tail == TailModel::constant) {
        tail_value = fT * std::exp(-z * T) / z;
        // the data should have flattened near T
        const auto local = fit_semilog_rate(grid.nodes(), f, T / 2.0, T);
        if (local.points >= 3 && std::abs(local.slope) * T > 0.05)
            out.tail_mismatch = true;
    }
    out.value = total + tail_value;
    out.error_estimate = std::abs(tail_value) * 1e-6 + 1e-12 * std::abs(total);
    return out;
}

// Closed-form transform of the relaxation function.
inline double laplace_s_closed(const KernelPair& pair, double mu, double z) {
    return 1.0 / (z * (1.0 + mu * laplace_l(pair, z)));
}

struct TauberianCheck {
    Verdict verdict = Verdict::inconclusive;
    std::vector<double> z, numeric, closed;
    double max_rel_dev = 0.0;
};

// Transform-side anchor of the Tauberian argument: the numerical transform of
// the computed curve matches the closed form near z = 0 to 5%.
inline TauberianCheck tauberian_cross_check(const RelaxationCurve& c,
                                            const KernelPair& pair, double mu) {
    TauberianCheck out;
    const auto model = predict(pair, mu);
    TailModel tail = TailModel::none;
    double param = 0.0;
    if (model.form == DecayForm::algebraic) {
        tail = TailModel::algebraic;
        param = model.rate;
    } else if (model.form == DecayForm::exponential) {
        tail = TailModel::exponential;
        param = model.rate;
    } else if (model.form == DecayForm::plateau) {
        tail = TailModel::constant;
    }
    bool mismatch = false;
    for (double z : {1e-1, 1e-2, 1e-3}) {
        const auto num = numerical_laplace(c.grid, c.values, z, tail, param);
        const double ref = laplace_s_closed(pair, mu, z);
        out.z.push_back(z);
        out.numeric.push_back(num.value);
        out.closed.push_back(ref);
        out.max_rel_dev =
            std::max(out.max_rel_dev, std::abs(num.value - ref) / std::abs(ref));
        mismatch = mismatch || num.tail_mismatch;
    }
    if (mismatch)
        out.verdict = Verdict::inconclusive;
    else
        out.verdict = out.max_rel_dev <= 0.05 ? Verdict::pass : Verdict::fail;
    return out;
}

// Default curve horizon per family for asymptotic verification.
inline double asymptotic_horizon(const KernelPair& pair, double mu) {
    if (pair.family == KernelFamily::fractional_exp)
        return std::min(1e6, 25.0 / omega_root(pair.alpha, pair.gamma, mu));
    if (pair.family == KernelFamily::switched_exp)
        return std::max(60.0, 60.0 / pair.gamma);
    return 1e6;
}

inline TimeGrid asymptotic_grid(double T, std::size_t n_graded = 500,
                                double r = 4.0, double ratio = 1.05) {
    if (T <= 1.0) return TimeGrid::graded(T, n_graded, r);
    return TimeGrid::composite(1.0, n_graded, r, T, ratio);
}

}  // namespace subdiff
