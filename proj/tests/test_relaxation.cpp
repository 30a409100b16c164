#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "subdiff/gamma.hpp"
#include "subdiff/relaxation.hpp"

using namespace subdiff;

static double rel(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

static Kernel g_kernel(double beta) {
    return Kernel(std::make_shared<detail::GKernel>(beta));
}

TEST_CASE("mu = 0 keeps s identically one") {
    const auto g = TimeGrid::graded(10.0, 64, 2.0);
    const auto c = solve_relaxation(KernelPair::fractional(0.4), 0.0, g);
    for (double v : c.values) CHECK(v == 1.0);
}

TEST_CASE("fractional relaxation matches the Mittag-Leffler closed form") {
    // s(1) = E_{1/2}(-1) = e erfc(1)
    const auto g = TimeGrid::graded(1.0, 800, 4.0);
    const auto c = solve_relaxation(KernelPair::fractional(0.5), 1.0, g);
    CHECK(rel(c.values.back(), 0.427583576155807) < 1e-5);
    CHECK(relaxation_residual(c, KernelPair::fractional(0.5)) < 1e-12);
}

TEST_CASE("l = 1 proxy solves the exponential ODE") {
    // s + 2 (1*s) = 1 is s' = -2 s
    const auto g = TimeGrid::uniform(1.0, 1600);
    const auto c = solve_relaxation(g_kernel(1.0), 2.0, g);
    CHECK(rel(c.values.back(), std::exp(-2.0)) < 1e-5);
}

TEST_CASE("closed-form curve pins") {
    const auto g = TimeGrid::graded(4.0, 32, 2.0);
    const auto c = closed_form_curve(0.5, 4.0, g);
    CHECK(c.values[0] == 1.0);
    // s(4) = E_{1/2}(-8) = erfcx(8), frozen from the erfc oracle
    CHECK(rel(c.values.back(), 0.069985166) < 1e-7);
    CHECK(rel(c.values.back(), erfcx(8.0)) < 1e-10);
}

TEST_CASE("volterra solve converges to the oracle with order >= 1.5") {
    for (double alpha : {0.3, 0.5, 0.7}) {
        const double r = 2.0 / alpha;
        double prev = 0.0;
        std::vector<double> errs;
        for (std::size_t N : {250, 500, 1000}) {
            const auto g = TimeGrid::graded(10.0, N, r);
            const auto c = solve_relaxation(KernelPair::fractional(alpha), 1.0, g);
            const auto o = closed_form_curve(alpha, 1.0, g);
            double mx = 0.0;
            for (std::size_t i = 1; i < g.size(); ++i)
                mx = std::max(mx, std::abs(c.values[i] - o.values[i]) / o.values[i]);
            errs.push_back(mx);
            prev = mx;
        }
        CHECK(prev < 2e-5);
        const double order01 = std::log2(errs[0] / errs[1]);
        const double order12 = std::log2(errs[1] / errs[2]);
        CHECK(order01 > 1.5);
        CHECK(order12 > 1.5);
    }
}

TEST_CASE("curves are monotone in t and in mu, and stay in (0, 1]") {
    const auto g = TimeGrid::graded(50.0, 400, 3.0);
    for (const auto& pair :
         {KernelPair::fractional(0.6), KernelPair::distributed_order(),
          KernelPair::switched_exp(0.5, 2.0)}) {
        std::vector<double> prev;
        for (double mu : {0.1, 1.0, 10.0}) {
            const auto c = solve_relaxation(pair, mu, g);
            for (std::size_t i = 1; i < c.values.size(); ++i) {
                CHECK(c.values[i] > 0.0);
                CHECK(c.values[i] <= c.values[i - 1] * (1.0 + 1e-13));
            }
            if (!prev.empty())
                for (std::size_t i = 0; i < c.values.size(); ++i)
                    CHECK(c.values[i] <= prev[i] * (1.0 + 1e-13));
            prev = c.values;
        }
    }
}

TEST_CASE("two-sided bounds hold for every family and mu in {0.1, 1, 10}") {
    const auto g = TimeGrid::graded(50.0, 500, 3.0);
    const auto g_half = TimeGrid::graded(50.0, 250, 3.0);
    for (const auto& pair :
         {KernelPair::fractional(0.5), KernelPair::fractional_exp(0.5, 1.0),
          KernelPair::switched_exp(0.5, 4.0),
          KernelPair::sum_fractional({{1.0, 0.3}, {1.0, 0.7}}),
          KernelPair::distributed_order(), KernelPair::switched_distributed()}) {
        for (double mu : {0.1, 1.0, 10.0}) {
            const auto c = solve_relaxation(pair, mu, g);
            const auto c2 = solve_relaxation(pair, mu, g_half);
            // discretization estimate by grid halving
            double disc = 0.0;
            for (std::size_t i = 1; i < c2.values.size(); ++i)
                disc = std::max(disc, std::abs(c2.values[i] - c.values[2 * i]));
            const auto rep = check_bounds(c, pair);
            const double tol = 1e-3 + disc;
            CHECK(rep.max_lower_violation <= tol);
            CHECK(rep.max_upper_violation <= tol);
        }
    }
}

TEST_CASE("bounds reduce to the ML sandwich for the fractional family") {
    const auto g = TimeGrid::graded(10.0, 100, 3.0);
    const auto pair = KernelPair::fractional(0.5);
    const auto c = closed_form_curve(0.5, 1.0, g);
    const auto rep = check_bounds(c, pair);
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double x = std::pow(g[i], 0.5);
        const auto b = ml_bounds(0.5, x);
        CHECK(rel(rep.lower[i], b.lower) < 1e-12);
        CHECK(rel(rep.upper[i], b.upper) < 1e-12);
    }
    // mu = 0: both bounds equal 1 and so does the curve
    const auto c0 = solve_relaxation(pair, 0.0, g);
    const auto rep0 = check_bounds(c0, pair);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(rep0.lower[i] == 1.0);
        CHECK(rep0.upper[i] == 1.0);
    }
}

TEST_CASE("switched_exp plateau value") {
    const auto pair = KernelPair::switched_exp(0.5, 4.0);
    CHECK(rel(limit_value(pair, 2.0), 0.5) < 1e-14);
    const auto g = TimeGrid::graded(60.0, 600, 2.0);
    const auto c = solve_relaxation(pair, 2.0, g);
    CHECK(std::abs(c.values.back() - 0.5) < 1e-3);
}

TEST_CASE("limit classification by integrability of l") {
    CHECK(limit_value(KernelPair::fractional(0.3), 1.0) == 0.0);
    CHECK(limit_value(KernelPair::distributed_order(), 1.0) == 0.0);
    CHECK(limit_value(KernelPair::sum_fractional({{1.0, 0.3}, {1.0, 0.7}}), 1.0) == 0.0);
    // |l|_1 = gamma^(alpha-1) for the switched family; quadrature cross-check
    const double q = integrate_singular_left(
        [](double t) { return eval_g(0.5, t) * std::exp(-t); }, 0.0, 60.0, 1e-12);
    CHECK(rel(q, 1.0) < 1e-9);
    CHECK(rel(limit_value(KernelPair::switched_exp(0.5, 1.0), 1.0), 0.5) < 1e-12);
    // mu -> inf drives the limit to 0
    CHECK(limit_value(KernelPair::switched_exp(0.5, 1.0), 1e12) < 1e-11);
}

TEST_CASE("resolvent kernel: exponential oracle, positivity, 1*h = 1 - s") {
    const auto g = TimeGrid::uniform(5.0, 2000);
    // l = 1: h + mu (1*h) = mu has the solution mu e^(-mu t)
    const auto h = resolvent_h(g_kernel(1.0), 1.0, g);
    for (std::size_t i = 1; i < g.size(); ++i) {
        CHECK(h[i] >= 0.0);
        CHECK(std::abs(h[i] - std::exp(-g[i])) < 2e-3);
    }
    // mu -> 0 sends h to zero uniformly
    for (double v : resolvent_h(g_kernel(1.0), 1e-12, g)) CHECK(std::abs(v) < 1e-11);

    // fractional pair: 1*h = 1 - s with the ML oracle
    const auto gf = TimeGrid::graded(16.0, 1500, 4.0);
    const auto pair = KernelPair::fractional(0.5);
    const auto hf = resolvent_h(pair, 1.0, gf);
    double run = 0.0;
    for (std::size_t i = 1; i < gf.size(); ++i) {
        CHECK(hf[i] >= 0.0);
        run += hf[i] * gf.step(i);
    }
    const double s_oracle = ml_neg(0.5, std::pow(16.0, 0.5));
    CHECK(std::abs(run - (1.0 - s_oracle)) < 2e-3);
}

TEST_CASE("regularized kernels: identity k_n = n s_n and convolution route") {
    const auto g = TimeGrid::graded(8.0, 700, 4.0);
    const auto pair = KernelPair::fractional(0.5);
    SUBCASE("n = 1 equals the relaxation curve itself") {
        const auto reg = regularized_k(pair, 1.0, g);
        const auto o = closed_form_curve(0.5, 1.0, g);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(std::abs(reg.values[i] - o.values[i]) < 2e-4);
    }
    SUBCASE("samples are nonnegative, nonincreasing, start at n") {
        const auto reg = regularized_k(pair, 8.0, g);
        CHECK(reg.values[0] == 8.0);
        for (std::size_t i = 1; i < g.size(); ++i) {
            CHECK(reg.values[i] >= 0.0);
            CHECK(reg.values[i] <= reg.values[i - 1] * (1.0 + 1e-13));
        }
        CHECK(reg.max_disagreement < 0.02);
    }
    SUBCASE("k_n * v approaches k * v as n grows, v(t) = t") {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = g[i];
        const double exact = eval_g(2.5, 8.0);  // (g_{1/2} * t)(8)
        double prev = 1e300;
        for (double n : {1.0, 4.0, 16.0, 64.0}) {
            const auto reg = regularized_k(pair, n, g);
            const ConvolutionWeights w(reg.kernel, g);
            const double got = w.apply(v).back();
            const double err = std::abs(got - exact);
            CHECK(err < prev * 1.02);
            prev = err;
        }
        CHECK(prev < 0.05 * exact);
    }
}

TEST_CASE("discrete comparison: f1 <= f2 implies u1 <= u2") {
    const auto g = TimeGrid::graded(3.0, 80, 2.0);
    const auto pair = KernelPair::fractional(0.4);
    const auto reg = regularized_k(pair, 4.0, g);
    const HistoryWeights hw(reg.kernel, g);
    std::mt19937_64 rng(1234);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * double(rng() >> 11) * 0x1p-53;
    };
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> f1(g.size()), f2(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            f1[i] = uniform(-1.0, 1.0);
            f2[i] = f1[i] + uniform(0.0, 0.5);
        }
        const double mu = uniform(0.0, 3.0);
        const auto u1 = solve_history_ode(reg.kernel, reg.values[0], hw, mu, f1);
        const auto u2 = solve_history_ode(reg.kernel, reg.values[0], hw, mu, f2);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(u1[i] <= u2[i] + 1e-13);
    }
}
