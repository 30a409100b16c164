#pragma once

// Kernel pairs (k, l) with k nonnegative nonincreasing and k*l = 1:
// the six families used throughout. Every kernel exposes pointwise values,
// cumulative moments K1(t) = int_0^t k and K2(t) = int_0^t s k(s) ds
// (the ingredients of product integration on arbitrary grids), and a
// closed-form Laplace transform on the positive real axis.
//
// All kernel objects are immutable after construction and safe to share
// across threads.

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "subdiff/gamma.hpp"
#include "subdiff/quadrature.hpp"
#include "subdiff/time_grid.hpp"

namespace subdiff {

// g_beta(t) = t^(beta-1) / Gamma(beta); exact at small integer beta
inline double eval_g(double beta, double t) {
    if (!(beta > 0.0)) throw std::domain_error("eval_g: beta > 0 required");
    if (!(t > 0.0)) throw std::domain_error("eval_g: t > 0 required");
    if (beta == 1.0) return 1.0;
    if (beta == 2.0) return t;
    if (beta == 3.0) return 0.5 * t * t;
    if (beta == 4.0) return t * t * t / 6.0;
    return std::exp((beta - 1.0) * std::log(t) - log_gamma(beta));
}

class KernelImpl {
   public:
    virtual ~KernelImpl() = default;
    virtual double point(double t) const = 0;
    virtual double integral(double t) const = 0;      // K1
    virtual double first_moment(double t) const = 0;  // K2
    virtual double laplace(double z) const {
        (void)z;
        throw std::logic_error("kernel has no closed-form Laplace transform");
    }
    // interval moments; overridden where a cancellation-free form exists
    virtual double moment0(double a, double b) const {
        return integral(b) - (a == 0.0 ? 0.0 : integral(a));
    }
    virtual double moment1(double a, double b) const {
        return first_moment(b) - (a == 0.0 ? 0.0 : first_moment(a));
    }
    // int_a^b (s - a) k(s) ds, the hat-function moment of product integration
    virtual double moment1s(double a, double b) const {
        return moment1(a, b) - a * moment0(a, b);
    }
};

// Value handle over an immutable kernel implementation.
class Kernel {
   public:
    Kernel() = default;
    explicit Kernel(std::shared_ptr<const KernelImpl> impl) : impl_(std::move(impl)) {}

    double operator()(double t) const {
        if (!(t > 0.0)) throw std::domain_error("kernel: t > 0 required");
        return impl_->point(t);
    }
    double integral(double t) const {
        if (t == 0.0) return 0.0;
        if (!(t > 0.0)) throw std::domain_error("kernel: t >= 0 required");
        return impl_->integral(t);
    }
    double first_moment(double t) const {
        if (t == 0.0) return 0.0;
        if (!(t > 0.0)) throw std::domain_error("kernel: t >= 0 required");
        return impl_->first_moment(t);
    }
    double laplace(double z) const {
        if (!(z > 0.0)) throw std::domain_error("kernel: z > 0 required");
        return impl_->laplace(z);
    }
    double moment0(double a, double b) const {
        if (a == b) return 0.0;
        return impl_->moment0(a, b);
    }
    double moment1(double a, double b) const {
        if (a == b) return 0.0;
        return impl_->moment1(a, b);
    }
    // int_a^b (s-a) k(s) ds. Far from the kernel origin the cumulative-moment
    // difference cancels to noise, but the integrand is smooth there; a fixed
    // Gauss rule on the interval is then exact to rounding.
    double moment1s(double a, double b) const {
        if (a == b) return 0.0;
        if (a > 50.0 * (b - a)) {
            static constexpr double gx[4] = {0.06943184420297371, 0.33000947820757187,
                                             0.66999052179242813, 0.93056815579702629};
            static constexpr double gw[4] = {0.17392742256872693, 0.32607257743127307,
                                             0.32607257743127307, 0.17392742256872693};
            double s = 0.0;
            for (int q = 0; q < 4; ++q)
                s += gw[q] * gx[q] * impl_->point(a + (b - a) * gx[q]);
            return s * (b - a) * (b - a);
        }
        return impl_->moment1s(a, b);
    }
    bool valid() const { return impl_ != nullptr; }

   private:
    std::shared_ptr<const KernelImpl> impl_;
};

namespace detail {

// ---- g_beta ---------------------------------------------------------------

class GKernel final : public KernelImpl {
   public:
    explicit GKernel(double beta, double scale = 1.0) : beta_(beta), scale_(scale) {}
    double point(double t) const override { return scale_ * eval_g(beta_, t); }
    double integral(double t) const override { return scale_ * eval_g(beta_ + 1.0, t); }
    double first_moment(double t) const override {
        return scale_ * beta_ * eval_g(beta_ + 2.0, t);
    }
    double laplace(double z) const override {
        return scale_ * std::pow(z, -beta_);
    }
    double moment1s(double a, double b) const override {
        if (a == 0.0) return first_moment(b);
        if (beta_ == 1.0) return scale_ * 0.5 * (b - a) * (b - a);
        return KernelImpl::moment1s(a, b);
    }

   private:
    double beta_, scale_;
};

// ---- g_beta e^(-gamma t) --------------------------------------------------

class GExpKernel final : public KernelImpl {
   public:
    GExpKernel(double beta, double gamma) : beta_(beta), gamma_(gamma) {}
    double point(double t) const override {
        return eval_g(beta_, t) * std::exp(-gamma_ * t);
    }
    double integral(double t) const override {
        return std::pow(gamma_, -beta_) * gamma_p(beta_, gamma_ * t);
    }
    double first_moment(double t) const override {
        return beta_ * std::pow(gamma_, -beta_ - 1.0) * gamma_p(beta_ + 1.0, gamma_ * t);
    }
    double laplace(double z) const override { return std::pow(z + gamma_, -beta_); }

   private:
    double beta_, gamma_;
};

// ---- g_alpha e^(-gamma t) + gamma (1 * [g_alpha e^(-gamma .)]) -------------
// The exponentially shifted partner kernel; Laplace (z+gamma)^(1-alpha) / z.

class GExpPlusIntKernel final : public KernelImpl {
   public:
    GExpPlusIntKernel(double alpha, double gamma) : a_(alpha), g_(gamma) {}
    double point(double t) const override {
        return eval_g(a_, t) * std::exp(-g_ * t) +
               std::pow(g_, 1.0 - a_) * gamma_p(a_, g_ * t);
    }
    double integral(double t) const override {
        const double p1 = gamma_p(a_, g_ * t);
        const double p2 = gamma_p(a_ + 1.0, g_ * t);
        return std::pow(g_, -a_) * (p1 * (1.0 + g_ * t) - a_ * p2);
    }
    double first_moment(double t) const override {
        const double p1 = gamma_p(a_, g_ * t);
        const double p2 = gamma_p(a_ + 1.0, g_ * t);
        const double p3 = gamma_p(a_ + 2.0, g_ * t);
        return a_ * std::pow(g_, -a_ - 1.0) * p2 +
               std::pow(g_, 1.0 - a_) * 0.5 * t * t * p1 -
               0.5 * a_ * (a_ + 1.0) * std::pow(g_, -a_ - 1.0) * p3;
    }
    double laplace(double z) const override {
        return std::pow(z + g_, 1.0 - a_) / z;
    }

   private:
    double a_, g_;
};

// ---- sum_j delta_j g_{1-alpha_j} -------------------------------------------

struct SumTerm {
    double delta;
    double alpha;
};

class SumGKernel final : public KernelImpl {
   public:
    explicit SumGKernel(std::vector<SumTerm> terms) : terms_(std::move(terms)) {}
    double point(double t) const override {
        double s = 0.0;
        for (const auto& q : terms_) s += q.delta * eval_g(1.0 - q.alpha, t);
        return s;
    }
    double integral(double t) const override {
        double s = 0.0;
        for (const auto& q : terms_) s += q.delta * eval_g(2.0 - q.alpha, t);
        return s;
    }
    double first_moment(double t) const override {
        double s = 0.0;
        for (const auto& q : terms_)
            s += q.delta * (1.0 - q.alpha) * eval_g(3.0 - q.alpha, t);
        return s;
    }
    double laplace(double z) const override {
        double s = 0.0;
        for (const auto& q : terms_) s += q.delta * std::pow(z, q.alpha - 1.0);
        return s;
    }

   private:
    std::vector<SumTerm> terms_;
};

// ---- int_0^1 g_beta dbeta (distributed order) ------------------------------

// Robust evaluation of int_0^1 e^(beta L) phi(beta) dbeta. For |L| large the
// mass sits in a boundary layer of width 1/|L|; substitute and integrate the
// layer on panels that a 32-point rule resolves.
template <class Phi>
double beta_integral(double L, const Phi& phi) {
    if (std::abs(L) <= 8.0) {
        return gauss32_01([&](double b) { return std::exp(b * L) * phi(b); });
    }
    const double A = std::abs(L);
    const double x_max = std::min(46.0, A);
    static constexpr double cuts[5] = {0.0, 3.0, 10.0, 24.0, 46.0};
    double total = 0.0;
    for (int p = 0; p < 4; ++p) {
        const double lo = cuts[p], hi = std::min(cuts[p + 1], x_max);
        if (hi <= lo) break;
        total += (hi - lo) * gauss32_01([&](double y) {
            const double x = lo + (hi - lo) * y;
            const double b = (L < 0.0) ? x / A : 1.0 - x / A;
            return std::exp(-x) * phi(b);
        });
    }
    total /= A;
    if (L > 0.0) total *= std::exp(L);  // careful: caller keeps L moderate
    return total;
}

class DistributedGKernel final : public KernelImpl {
   public:
    double point(double t) const override {
        const double L = std::log(t);
        if (std::abs(L) <= 8.0) return direct(L, tables().phi_point) / t;
        return beta_integral(L, [](double b) { return rgamma(b); }) / t;
    }
    double integral(double t) const override {
        const double L = std::log(t);
        if (std::abs(L) <= 8.0) return direct(L, tables().phi_k1);
        return beta_integral(L, [](double b) { return rgamma(b + 1.0); });
    }
    double first_moment(double t) const override {
        const double L = std::log(t);
        if (std::abs(L) <= 8.0) return t * direct(L, tables().phi_k2);
        return t * beta_integral(L, [](double b) { return b * rgamma(b + 2.0); });
    }
    double laplace(double z) const override {
        // (z - 1) / (z log z), removable singularity at z = 1
        const double w = z - 1.0;
        if (std::abs(w) < 1e-4)
            return 1.0 - 0.5 * w + (5.0 / 12.0) * w * w - 0.375 * w * w * w;
        return w / (z * std::log(z));
    }

   private:
    // reciprocal-gamma factors frozen at the fixed quadrature nodes
    struct Tables {
        double phi_point[32], phi_k1[32], phi_k2[32];
        Tables() {
            const auto& r = subdiff::detail::gl32();
            for (int i = 0; i < 32; ++i) {
                phi_point[i] = rgamma(r.x[i]);
                phi_k1[i] = rgamma(r.x[i] + 1.0);
                phi_k2[i] = r.x[i] * rgamma(r.x[i] + 2.0);
            }
        }
    };
    static const Tables& tables() {
        static const Tables t;
        return t;
    }
    static double direct(double L, const double phi[32]) {
        const auto& r = subdiff::detail::gl32();
        double s = 0.0;
        for (int i = 0; i < 32; ++i) s += r.w[i] * std::exp(r.x[i] * L) * phi[i];
        return s;
    }
};

// ---- e^t E1(t), the Laplace transform of 1/(1+s) ---------------------------

class ExpIntKernel final : public KernelImpl {
   public:
    double point(double t) const override { return expint_e1_scaled(t); }
    double integral(double t) const override {
        if (t > 0.5) return std::log(t) + euler_gamma + expint_e1_scaled(t);
        // cancellation-free small-t form: (gamma + log t)(1 - e^t) + e^t S(t)
        double term = 1.0, S = 0.0;
        for (int k = 1; k < 40; ++k) {
            term *= -t / k;
            S -= term / k;  // S = sum (-1)^(k+1) t^k/(k k!)
            if (std::abs(term) < 1e-18) break;
        }
        return (euler_gamma + std::log(t)) * (-std::expm1(t)) + std::exp(t) * S;
    }
    double first_moment(double t) const override {
        return t * (expint_e1_scaled(t) + 1.0) - integral(t);
    }
    double laplace(double z) const override {
        const double w = z - 1.0;
        if (std::abs(w) < 1e-4)
            return 1.0 - 0.5 * w + w * w / 3.0 - 0.25 * w * w * w;
        return std::log(z) / w;
    }
};

// ---- uniform-knot log-log cubic Hermite table ------------------------------

class LogLogTable {
   public:
    void build(double u0, double du, std::vector<double> y, std::vector<double> m) {
        u0_ = u0;
        du_ = du;
        y_ = std::move(y);
        m_ = std::move(m);
    }
    double eval_log(double u) const {
        const double s = (u - u0_) / du_;
        std::size_t i = static_cast<std::size_t>(std::max(0.0, std::floor(s)));
        if (i >= y_.size() - 1) i = y_.size() - 2;
        const double x = s - double(i);
        const double h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
        const double h10 = x * (1.0 - x) * (1.0 - x);
        const double h01 = x * x * (3.0 - 2.0 * x);
        const double h11 = x * x * (x - 1.0);
        return h00 * y_[i] + h10 * du_ * m_[i] + h01 * y_[i + 1] + h11 * du_ * m_[i + 1];
    }
    double eval(double tau) const { return std::exp(eval_log(std::log(tau))); }
    bool empty() const { return y_.empty(); }

   private:
    double u0_ = 0.0, du_ = 1.0;
    std::vector<double> y_, m_;
};

// ---- spectral kernel for the resolvent l of a fractional-derivative sum ----
// l-hat(z) = 1 / sum_j delta_j z^(alpha_j); l(t) = int_0^inf e^(-st) rho(s) ds
// with the branch-cut density rho. Cumulative moments are tabulated on a log
// grid with Hermite interpolation; below the table the exact leading order
// l ~ g_{alpha_m}/delta_m applies.

class SpectralSumLKernel final : public KernelImpl {
   public:
    explicit SpectralSumLKernel(std::vector<SumTerm> terms)
        : terms_(std::move(terms)) {
        const auto& top = terms_.back();
        const auto& sub = terms_[terms_.size() - 2];
        lead_alpha_ = top.alpha;
        lead_coef_ = 1.0 / top.delta;
        const double gap = top.alpha - sub.alpha;
        tau_lo_ = std::min(1e-26, std::pow(1e-10 * top.delta / sub.delta, 1.0 / gap));
        tau_lo_ = std::max(tau_lo_, 1e-60);
        tau_hi_ = 2.2e6;
        build();
    }

    double point(double t) const override {
        if (t < tau_lo_) return lead_coef_ * eval_g(lead_alpha_, t);
        check_range(t);
        return point_.eval(t);
    }
    double integral(double t) const override {
        if (t < tau_lo_) return lead_coef_ * eval_g(lead_alpha_ + 1.0, t);
        check_range(t);
        return k1_.eval(t);
    }
    double first_moment(double t) const override {
        if (t < tau_lo_) return lead_coef_ * lead_alpha_ * eval_g(lead_alpha_ + 2.0, t);
        check_range(t);
        return k2_.eval(t);
    }
    double laplace(double z) const override {
        double s = 0.0;
        for (const auto& q : terms_) s += q.delta * std::pow(z, q.alpha);
        return 1.0 / s;
    }

    double rho(double s) const {
        // factored by s^(alpha_m) so very large s cannot overflow the squares
        const double am = terms_.back().alpha;
        double X = 0.0, Y = 0.0;
        for (const auto& q : terms_) {
            const double sa = q.delta * std::pow(s, q.alpha - am);
            X += sa * std::cos(M_PI * q.alpha);
            Y += sa * std::sin(M_PI * q.alpha);
        }
        return Y / (M_PI * std::pow(s, am) * (X * X + Y * Y));
    }

   private:
    void check_range(double t) const {
        if (t > tau_hi_)
            throw std::domain_error("sum-fractional l: t beyond tabulated horizon");
    }

    // stable x -> 1 - (1+x) e^(-x)
    static double one_minus_1px_emx(double x) {
        if (x > 0.05) return -std::expm1(-x) - x * std::exp(-x);
        double p = x * x;  // series x^2/2 - x^3/3 + x^4/8 - x^5/30 + x^6/144
        return p * (0.5 + x * (-1.0 / 3.0 + x * (0.125 + x * (-1.0 / 30.0 + x / 144.0))));
    }

    void build() {
        const double am = terms_.back().alpha;
        const double cm = std::sin(M_PI * am) / (M_PI * terms_.back().delta);
        // where the asymptotic density is accurate to ~1e-11
        double s_star = 1.0;
        for (std::size_t j = 0; j + 1 < terms_.size(); ++j)
            s_star = std::max(
                s_star, std::pow(1e11 * terms_[j].delta / terms_.back().delta,
                                 1.0 / (am - terms_[j].alpha)));
        // crossover scales of the density, to keep inside the window
        double u_cross_lo = 0.0;
        for (std::size_t j = 0; j + 1 < terms_.size(); ++j) {
            const double sc = std::pow(terms_[j].delta / terms_[j + 1].delta,
                                       1.0 / (terms_[j + 1].alpha - terms_[j].alpha));
            u_cross_lo = std::min(u_cross_lo, std::log(sc));
        }

        const double du = 0.08;
        const double u0 = std::log(tau_lo_) - du;
        const std::size_t n =
            static_cast<std::size_t>((std::log(tau_hi_) + du - u0) / du) + 2;
        std::vector<double> yp(n), mp(n), y1(n), m1(n), y2(n), m2(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double tau = std::exp(u0 + du * i);
            const double u_lo =
                std::min({0.0, std::log(1.0 / tau), u_cross_lo}) - 46.0 / (1.0 - am);
            const double u_cut = std::log(46.0 / tau);
            const double u_hi = std::max(u_cut, std::log(s_star));
            const auto quad = [&](auto&& g, double lo, double hi) {
                const int panels = static_cast<int>((hi - lo) / 4.0) + 1;
                return integrate(g, lo, hi, 1e-11, 0.0, 48, panels);
            };
            const double f = quad(
                [&](double u) {
                    const double s = std::exp(u);
                    return std::exp(-s * tau) * rho(s) * s;
                },
                u_lo, u_cut);
            const double fp = quad(
                [&](double u) {
                    const double s = std::exp(u);
                    return std::exp(-s * tau) * rho(s) * s * s;
                },
                u_lo, u_cut);
            double F1 = quad(
                [&](double u) {
                    const double s = std::exp(u);
                    return -std::expm1(-s * tau) * rho(s);
                },
                u_lo, u_hi);
            F1 += cm * std::pow(s_star > 46.0 / tau ? s_star : 46.0 / tau, -am) / am;
            double F2 = quad(
                [&](double u) {
                    const double s = std::exp(u);
                    return one_minus_1px_emx(s * tau) * rho(s) / s;
                },
                u_lo, u_hi);
            F2 += cm * std::pow(s_star > 46.0 / tau ? s_star : 46.0 / tau, -1.0 - am) /
                  (1.0 + am);
            yp[i] = std::log(f);
            mp[i] = -tau * fp / f;
            y1[i] = std::log(F1);
            m1[i] = tau * f / F1;
            y2[i] = std::log(F2);
            m2[i] = tau * tau * f / F2;
        }
        point_.build(u0, du, std::move(yp), std::move(mp));
        k1_.build(u0, du, std::move(y1), std::move(m1));
        k2_.build(u0, du, std::move(y2), std::move(m2));
    }

    std::vector<SumTerm> terms_;
    double lead_alpha_, lead_coef_, tau_lo_, tau_hi_;
    LogLogTable point_, k1_, k2_;
};

}  // namespace detail

using detail::SumTerm;

// Piecewise-linear kernel from samples on a grid (used for the regularized
// kernels k_n, which are bounded and H^1). Interval moments are computed by
// exact local integration, which keeps the history-weight sign structure
// intact to rounding.
class SampledKernel final : public KernelImpl {
   public:
    SampledKernel(TimeGrid grid, std::vector<double> values)
        : grid_(std::move(grid)), v_(std::move(values)) {
        if (v_.size() != grid_.size())
            throw std::invalid_argument("SampledKernel: size mismatch");
        cum1_.resize(v_.size(), 0.0);
        cum2_.resize(v_.size(), 0.0);
        for (std::size_t i = 1; i < v_.size(); ++i) {
            cum1_[i] = cum1_[i - 1] + seg0(i, grid_[i - 1], grid_[i]);
            cum2_[i] = cum2_[i - 1] + seg1(i, grid_[i - 1], grid_[i]);
        }
    }

    double point(double t) const override {
        const std::size_t i = locate(t);
        const double w = (t - grid_[i - 1]) / grid_.step(i);
        return v_[i - 1] * (1.0 - w) + v_[i] * w;
    }
    double integral(double t) const override {
        const std::size_t i = locate(t);
        return cum1_[i - 1] + seg0(i, grid_[i - 1], t);
    }
    double first_moment(double t) const override {
        const std::size_t i = locate(t);
        return cum2_[i - 1] + seg1(i, grid_[i - 1], t);
    }
    double moment0(double a, double b) const override {
        const std::size_t ia = locate(a), ib = locate(b);
        if (ia == ib) return seg0(ia, a, b);
        double s = seg0(ia, a, grid_[ia]) + seg0(ib, grid_[ib - 1], b);
        for (std::size_t i = ia + 1; i < ib; ++i) s += seg0(i, grid_[i - 1], grid_[i]);
        return s;
    }
    double moment1(double a, double b) const override {
        const std::size_t ia = locate(a), ib = locate(b);
        if (ia == ib) return seg1(ia, a, b);
        double s = seg1(ia, a, grid_[ia]) + seg1(ib, grid_[ib - 1], b);
        for (std::size_t i = ia + 1; i < ib; ++i) s += seg1(i, grid_[i - 1], grid_[i]);
        return s;
    }

    const TimeGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return v_; }

   private:
    // interval index i with grid[i-1] <= t <= grid[i]
    std::size_t locate(double t) const {
        if (t < 0.0 || t > grid_.back() * (1.0 + 1e-12))
            throw std::domain_error("SampledKernel: t outside grid");
        const auto& ns = grid_.nodes();
        auto it = std::upper_bound(ns.begin(), ns.end(), t);
        std::size_t i = static_cast<std::size_t>(it - ns.begin());
        if (i == 0) i = 1;
        if (i >= ns.size()) i = ns.size() - 1;
        return i;
    }
    // integral of the linear piece on [x0, x1] inside interval i
    double seg0(std::size_t i, double x0, double x1) const {
        const double tl = grid_[i - 1], h = grid_.step(i);
        const double c0 = v_[i - 1], slope = (v_[i] - v_[i - 1]) / h;
        const double m0 = x0 - tl, m1 = x1 - tl;
        return c0 * (m1 - m0) + 0.5 * slope * (m1 * m1 - m0 * m0);
    }
    // integral of s * linear piece
    double seg1(std::size_t i, double x0, double x1) const {
        const double tl = grid_[i - 1], h = grid_.step(i);
        const double c0 = v_[i - 1], slope = (v_[i] - v_[i - 1]) / h;
        const double m0 = x0 - tl, m1 = x1 - tl;
        // s = tl + m
        const double i0 = (m1 - m0), i1 = 0.5 * (m1 * m1 - m0 * m0),
                     i2 = (m1 * m1 * m1 - m0 * m0 * m0) / 3.0;
        return tl * (c0 * i0 + slope * i1) + c0 * i1 + slope * i2;
    }

    TimeGrid grid_;
    std::vector<double> v_;
    std::vector<double> cum1_, cum2_;
};

enum class KernelFamily {
    fractional,
    fractional_exp,
    switched_exp,
    sum_fractional,
    distributed_order,
    switched_distributed,
};

struct KernelPair {
    KernelFamily family{};
    std::string name;
    double alpha = 0.0;   // fractional families
    double gamma = 0.0;   // exponential weight
    std::vector<SumTerm> terms;  // sum_fractional
    Kernel k, l;
    bool l_integrable = false;
    double l_l1_norm = 0.0;  // meaningful only when l_integrable

    static KernelPair fractional(double alpha) {
        require_alpha(alpha);
        KernelPair p;
        p.family = KernelFamily::fractional;
        p.name = "fractional(alpha=" + fmt(alpha) + ")";
        p.alpha = alpha;
        p.k = Kernel(std::make_shared<detail::GKernel>(1.0 - alpha));
        p.l = Kernel(std::make_shared<detail::GKernel>(alpha));
        return p;
    }

    static KernelPair fractional_exp(double alpha, double gamma) {
        require_alpha(alpha);
        require_positive(gamma, "gamma");
        KernelPair p;
        p.family = KernelFamily::fractional_exp;
        p.name = "fractional_exp(alpha=" + fmt(alpha) + ",gamma=" + fmt(gamma) + ")";
        p.alpha = alpha;
        p.gamma = gamma;
        p.k = Kernel(std::make_shared<detail::GExpKernel>(1.0 - alpha, gamma));
        p.l = Kernel(std::make_shared<detail::GExpPlusIntKernel>(alpha, gamma));
        return p;
    }

    static KernelPair switched_exp(double alpha, double gamma) {
        require_alpha(alpha);
        require_positive(gamma, "gamma");
        KernelPair p;
        p.family = KernelFamily::switched_exp;
        p.name = "switched_exp(alpha=" + fmt(alpha) + ",gamma=" + fmt(gamma) + ")";
        p.alpha = alpha;
        p.gamma = gamma;
        p.k = Kernel(std::make_shared<detail::GExpPlusIntKernel>(alpha, gamma));
        p.l = Kernel(std::make_shared<detail::GExpKernel>(1.0 - alpha, gamma));
        p.l_integrable = true;
        p.l_l1_norm = std::pow(gamma, alpha - 1.0);
        return p;
    }

    static KernelPair sum_fractional(std::vector<SumTerm> terms) {
        if (terms.empty())
            throw std::invalid_argument("sum_fractional: at least one term");
        std::sort(terms.begin(), terms.end(),
                  [](const SumTerm& x, const SumTerm& y) { return x.alpha < y.alpha; });
        for (std::size_t j = 0; j < terms.size(); ++j) {
            require_alpha(terms[j].alpha);
            require_positive(terms[j].delta, "delta");
            if (j > 0 && !(terms[j].alpha > terms[j - 1].alpha))
                throw std::invalid_argument("sum_fractional: alphas must be distinct");
        }
        KernelPair p;
        p.family = KernelFamily::sum_fractional;
        p.name = "sum_fractional(m=" + std::to_string(terms.size()) + ")";
        p.alpha = terms.front().alpha;  // decay-determining order
        p.terms = terms;
        p.k = Kernel(std::make_shared<detail::SumGKernel>(terms));
        if (terms.size() == 1)
            p.l = Kernel(std::make_shared<detail::GKernel>(terms[0].alpha,
                                                           1.0 / terms[0].delta));
        else
            p.l = Kernel(std::make_shared<detail::SpectralSumLKernel>(terms));
        return p;
    }

    static KernelPair distributed_order() {
        KernelPair p;
        p.family = KernelFamily::distributed_order;
        p.name = "distributed_order";
        p.k = Kernel(std::make_shared<detail::DistributedGKernel>());
        p.l = Kernel(std::make_shared<detail::ExpIntKernel>());
        return p;
    }

    static KernelPair switched_distributed() {
        KernelPair p;
        p.family = KernelFamily::switched_distributed;
        p.name = "switched_distributed";
        p.k = Kernel(std::make_shared<detail::ExpIntKernel>());
        p.l = Kernel(std::make_shared<detail::DistributedGKernel>());
        return p;
    }

   private:
    static void require_alpha(double a) {
        if (!(a > 0.0 && a < 1.0))
            throw std::invalid_argument("kernel pair: alpha in (0,1) required");
    }
    static void require_positive(double v, const char* what) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string("kernel pair: ") + what + " > 0");
    }
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return buf;
    }
};

inline double eval_k(const KernelPair& p, double t) { return p.k(t); }
inline double eval_l(const KernelPair& p, double t) { return p.l(t); }
inline double laplace_k(const KernelPair& p, double z) { return p.k.laplace(z); }
inline double laplace_l(const KernelPair& p, double z) { return p.l.laplace(z); }

// Discrete residual of the defining identity (k*l)(t_n) = 1, n >= 2:
// product integration of `exact` against the piecewise-linear interpolant of
// `sampled` on nodes >= t_1, plus the exact sampled-mass of the head interval.
inline std::vector<double> pc_residual(const Kernel& exact, const Kernel& sampled,
                                       const TimeGrid& g) {
    const std::size_t N = g.intervals();
    std::vector<double> lv(N + 1, 0.0);
    for (std::size_t i = 1; i <= N; ++i) lv[i] = sampled(g[i]);
    std::vector<double> res;
    for (std::size_t n = 2; n <= N; ++n) {
        double conv = exact(g[n] - 0.5 * g[1]) * sampled.integral(g[1]);
        for (std::size_t i = 2; i <= n; ++i) {
            const double a = g[n] - g[i], b = g[n] - g[i - 1];
            const double A = exact.moment0(a, b);
            const double S = exact.moment1s(a, b);
            const double h = g.step(i);
            conv += (S / h) * lv[i - 1] + (A - S / h) * lv[i];
        }
        res.push_back(conv - 1.0);
    }
    return res;
}

// Pair-level wrapper; convolution commutes, so interpolate the milder factor
// (the nearly-1/t distributed kernel always plays the exactly-integrated role).
inline std::vector<double> pc_residual(const KernelPair& pair, const TimeGrid& g) {
    if (pair.family == KernelFamily::switched_distributed)
        return pc_residual(pair.l, pair.k, g);
    return pc_residual(pair.k, pair.l, g);
}

}  // namespace subdiff
