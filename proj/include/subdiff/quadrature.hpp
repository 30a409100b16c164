#pragma once

// Adaptive Gauss-Kronrod quadrature and fixed Gauss-Legendre rules.
// All routines are pure and safe to call concurrently.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace subdiff {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
};

namespace detail {

// 7-point Gauss / 15-point Kronrod node-weight pairs on [-1, 1].
inline constexpr double gk_nodes[8] = {
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};
inline constexpr double kronrod_w[8] = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};
inline constexpr double gauss_w[4] = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

template <class F>
QuadResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double kron = kronrod_w[0] * f0;
    double gauss = gauss_w[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * gk_nodes[i];
        const double fs = f(c - dx) + f(c + dx);
        kron += kronrod_w[i] * fs;
        if (i % 2 == 0) gauss += gauss_w[i / 2] * fs;
    }
    QuadResult r;
    r.value = kron * h;
    const double diff = std::abs(kron - gauss) * std::abs(h);
    // standard QUADPACK-style error sharpening
    r.error = diff * std::sqrt(diff) * 200.0;
    if (!(r.error < std::abs(r.value))) r.error = diff;
    return r;
}

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval. `init_panels` forces an
// initial uniform subdivision so narrow features are not missed.
template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 0.0, int max_depth = 48, int init_panels = 1) {
    if (a == b) return 0.0;
    struct Item {
        double a, b, value, error;
        int depth;
    };
    std::vector<Item> stack;
    double total = 0.0;
    double err = 0.0;
    for (int p = 0; p < init_panels; ++p) {
        const double pa = a + (b - a) * p / init_panels;
        const double pb = a + (b - a) * (p + 1) / init_panels;
        auto r = detail::gk15(f, pa, pb);
        stack.push_back({pa, pb, r.value, r.error, 0});
        total += r.value;
        err += r.error;
    }
    while (!stack.empty()) {
        const double tol = std::max(abs_tol, rel_tol * std::abs(total));
        if (err <= tol) break;
        // split the worst interval
        std::size_t worst = 0;
        for (std::size_t i = 1; i < stack.size(); ++i)
            if (stack[i].error > stack[worst].error) worst = i;
        Item it = stack[worst];
        stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(worst));
        if (it.depth >= max_depth) {
            // leave the contribution as is; error stays accounted
            continue;
        }
        const double m = 0.5 * (it.a + it.b);
        auto left = detail::gk15(f, it.a, m);
        auto right = detail::gk15(f, m, it.b);
        total += left.value + right.value - it.value;
        err += left.error + right.error - it.error;
        stack.push_back({it.a, m, left.value, left.error, it.depth + 1});
        stack.push_back({m, it.b, right.value, right.error, it.depth + 1});
        if (stack.size() > 40000)
            throw std::runtime_error("integrate: interval budget exhausted");
    }
    return total;
}

// Integrand with an integrable singularity at the left endpoint `a`:
// splits [a, b] into geometrically shrinking panels toward `a` and stops
// once the extrapolated remaining mass is below tolerance.
template <class F>
double integrate_singular_left(const F& f, double a, double b,
                               double rel_tol = 1e-10) {
    if (!(b > a)) return 0.0;
    const double len = b - a;
    double total = 0.0;
    double hi = len;
    double prev_panel = 0.0;
    for (int j = 0; j < 1000; ++j) {
        const double lo = hi * 0.5;
        const double panel = integrate(f, a + lo, a + hi, rel_tol * 0.1);
        total += panel;
        if (j > 2 && prev_panel != 0.0) {
            const double ratio = std::abs(panel) / std::abs(prev_panel);
            if (ratio < 0.95) {
                const double tail = std::abs(panel) * ratio / (1.0 - ratio);
                if (tail < rel_tol * std::abs(total)) break;
            }
        }
        prev_panel = panel;
        if (a + lo == a) break;
        hi = lo;
    }
    return total;
}

namespace detail {
// 32-point Gauss-Legendre nodes/weights on [0, 1] (symmetric halves stored in full).
struct GL32 {
    double x[32];
    double w[32];
    GL32() {
        // nodes/weights on [-1,1], positive half; filled by Newton on Legendre P32
        for (int i = 0; i < 16; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (32.0 + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= 32; ++k) {
                    double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = 32.0 * (t * p1 - p0) / (t * t - 1.0);
                double dt = -p1 / dp;
                t += dt;
                if (std::abs(dt) < 1e-16) break;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= 32; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = 32.0 * (t * p1 - p0) / (t * t - 1.0);
            double wi = 2.0 / ((1.0 - t * t) * dp * dp);
            // map to [0,1]
            x[i] = 0.5 * (1.0 - t);
            w[i] = 0.5 * wi;
            x[31 - i] = 0.5 * (1.0 + t);
            w[31 - i] = 0.5 * wi;
        }
    }
};

inline const GL32& gl32() {
    static const GL32 rule;
    return rule;
}
}  // namespace detail

// Fixed 32-point Gauss-Legendre on [0, 1].
template <class F>
double gauss32_01(const F& f) {
    const auto& r = detail::gl32();
    double s = 0.0;
    for (int i = 0; i < 32; ++i) s += r.w[i] * f(r.x[i]);
    return s;
}

}  // namespace subdiff
