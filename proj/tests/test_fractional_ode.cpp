#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subdiff/fractional_ode.hpp"
#include "subdiff/mittag_leffler.hpp"
#include "subdiff/relaxation.hpp"

using namespace subdiff;

static double rel(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

TEST_CASE("linear case reduces to the Mittag-Leffler relaxation") {
    const auto g = TimeGrid::graded(1.0, 1000, 4.0);
    ScalarProblem p(0.5, 1.0, 1.0, 1.0, g);
    const auto u = solve_scalar(p);
    CHECK(rel(u.back(), 0.427583576155807) < 5e-5);
    CHECK(solve_scalar_residual(p, u) < 1e-10);
}

TEST_CASE("nu = 0 keeps u constant") {
    const auto g = TimeGrid::graded(5.0, 64, 2.0);
    ScalarProblem p(0.4, 0.0, 2.0, 0.7, g);
    for (double x : solve_scalar(p)) CHECK(x == 0.7);
}

TEST_CASE("gamma = 1 equals the relaxation module to 1e-6") {
    const auto g = TimeGrid::graded(0.5, 8000, 4.0);
    ScalarProblem p(0.5, 2.0, 1.0, 1.0, g);
    const auto u = solve_scalar(p);
    const auto s = solve_relaxation(KernelPair::fractional(0.5), 2.0, g);
    double mx = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        mx = std::max(mx, std::abs(u[i] - s.values[i]));
    CHECK(mx < 1e-6);
}

TEST_CASE("solution is positive and nonincreasing") {
    const auto g = ScalarProblem::default_grid(0.4, 1e4, 200);
    for (double gamma : {0.5, 1.0, 3.0}) {
        ScalarProblem p(0.4, 1.0, gamma, 1.0, g);
        const auto u = solve_scalar(p);
        for (std::size_t i = 1; i < u.size(); ++i) {
            CHECK(u[i] > 0.0);
            CHECK(u[i] <= u[i - 1]);
        }
    }
}

TEST_CASE("subsolution: pinned values and continuity at eps") {
    const auto g = TimeGrid::graded(1.0, 8, 2.0);
    ScalarProblem p(0.5, 1.0, 1.0, 1.0, g);
    CHECK(subsolution_v(p, 0.0) == 1.0);
    // eps = (Gamma(3/2)/pi)^2 for these parameters
    const double eps = std::pow(gamma_fn(1.5) / M_PI, 2.0);
    CHECK(rel(subsolution_v(p, eps), 0.5) < 1e-12);
    CHECK(rel(subsolution_v(p, eps * (1.0 - 1e-12)),
              subsolution_v(p, eps * (1.0 + 1e-12))) < 1e-9);
    // nonincreasing and positive
    double prev = 1.0;
    for (double t = 1e-4; t < 50.0; t *= 1.3) {
        const double v = subsolution_v(p, t);
        CHECK(v > 0.0);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
}

TEST_CASE("supersolution: plateau, continuity, pinned t0") {
    const auto g = TimeGrid::graded(1.0, 8, 2.0);
    ScalarProblem p(0.5, 1.0, 1.0, 1.0, g);
    // t0^(1/2) = g_{1/2}(1/2) + (1/2) 2 / Gamma(3/2)
    const double sq = eval_g(0.5, 0.5) + 0.5 * 2.0 / gamma_fn(1.5);
    const double t0 = sq * sq;
    CHECK(rel(t0, 3.710494) < 1e-6);  // frozen arithmetic of the stated formula
    CHECK(supersolution_w(p, 0.0) == 1.0);
    CHECK(supersolution_w(p, t0 * 0.999) == 1.0);
    CHECK(rel(supersolution_w(p, t0 * (1.0 + 1e-9)), 1.0) < 1e-8);
    CHECK(supersolution_w(p, 100.0) < 1.0);
}

TEST_CASE("closed-form linear solution lies between the barriers") {
    const auto g = TimeGrid::graded(1.0, 8, 2.0);
    for (double alpha : {0.3, 0.5, 0.7}) {
        ScalarProblem p(alpha, 1.0, 1.0, 1.0, g);
        for (double t = 1e-6; t < 1e6; t *= 2.3) {
            const double u = ml_neg(alpha, std::pow(t, alpha));
            CHECK(u >= subsolution_v(p, t) - 1e-11);
            CHECK(u <= supersolution_w(p, t) + 1e-11);
        }
    }
}

TEST_CASE("sandwich check passes with the expected exponent") {
    for (double gamma : {0.5, 2.0}) {
        ScalarProblem p(0.5, 1.0, gamma, 1.0, ScalarProblem::default_grid(0.5));
        const auto rep = sandwich_check(p);
        CHECK(rep.pass);
        CHECK(rep.min_u > 0.0);
        CHECK(rep.c1 > 0.0);
        CHECK(rep.c2 >= rep.c1);
        CHECK(std::abs(rep.fitted_exponent - rep.target_exponent) <=
              0.1 * std::abs(rep.target_exponent));
    }
}

TEST_CASE("comparison check: trivial equality and the barrier pairs") {
    const auto g = ScalarProblem::default_grid(0.5, 1e3, 128);
    ScalarProblem p(0.5, 1.0, 2.0, 1.0, g);
    const auto u = solve_scalar(p);
    const auto f = [&](double x) {
        return p.nu * std::copysign(std::pow(std::abs(x), p.gamma_exp), x);
    };

    SUBCASE("v = w passes trivially") {
        const auto verdict = comparison_check(f, 0.5, u, u, g, 1e-8, 1e-15);
        CHECK(verdict.premises_ok);
        CHECK(verdict.conclusion_ok);
    }
    SUBCASE("subsolution below the solver output") {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = subsolution_v(p, g[i]);
        // premise tolerance covers the discrete-operator error at the kink
        const auto verdict = comparison_check(f, 0.5, v, u, g, 0.1, 1e-6);
        CHECK(verdict.premises_ok);
        CHECK(verdict.conclusion_ok);
    }
    SUBCASE("solver output below the supersolution") {
        std::vector<double> w(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) w[i] = supersolution_w(p, g[i]);
        const auto verdict = comparison_check(f, 0.5, u, w, g, 0.1, 1e-6);
        CHECK(verdict.premises_ok);
        CHECK(verdict.conclusion_ok);
    }
    SUBCASE("violated premise names the first bad node") {
        std::vector<double> bad(g.size(), 1.0);
        bad[5] = 5.0;  // jump up: not a subsolution
        CHECK_THROWS_AS(comparison_check(f, 0.5, bad, u, g, 1e-6, 1e-6),
                        std::invalid_argument);
    }
}

TEST_CASE("parameter validation") {
    const auto g = TimeGrid::uniform(1.0, 4);
    CHECK_THROWS_AS(ScalarProblem(1.0, 1.0, 1.0, 1.0, g), std::invalid_argument);
    CHECK_THROWS_AS(ScalarProblem(0.5, 1.0, 0.0, 1.0, g), std::invalid_argument);
    CHECK_THROWS_AS(ScalarProblem(0.5, 1.0, 1.0, -1.0, g), std::invalid_argument);
}
