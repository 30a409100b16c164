#pragma once

// Product-integration machinery: lower-triangular convolution weights for
// (k*v)(t_n) with piecewise-linear v, and the differentiated "history"
// operator d/dt (k*[v - v0]) in generalized-L1 form.
//
// Weight tables are immutable after construction; applying them is pure.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "subdiff/kernels.hpp"
#include "subdiff/time_grid.hpp"

namespace subdiff {

// (k*v)(t_n) ~= sum_{j<=n} w[n][j] v(t_j), exact for piecewise-linear v.
class ConvolutionWeights {
   public:
    ConvolutionWeights(const Kernel& k, const TimeGrid& grid) : grid_(grid) {
        const std::size_t N = grid.intervals();
        offs_.resize(N + 2, 0);
        for (std::size_t n = 0; n <= N; ++n) offs_[n + 1] = offs_[n] + n + 1;
        w_.assign(offs_[N + 1], 0.0);
        for (std::size_t n = 1; n <= N; ++n) {
            double* row = &w_[offs_[n]];
            for (std::size_t i = 1; i <= n; ++i) {
                // hat contributions over [t_{i-1}, t_i] in the kernel variable
                // s = t_n - t; S = moment of (s - a) avoids t-scale cancellation
                const double a = grid[n] - grid[i], b = grid[n] - grid[i - 1];
                const double A = k.moment0(a, b);
                const double S = k.moment1s(a, b);
                const double h = grid.step(i);
                row[i - 1] += S / h;
                row[i] += A - S / h;
            }
        }
    }

    std::size_t intervals() const { return grid_.intervals(); }
    const TimeGrid& grid() const { return grid_; }
    double weight(std::size_t n, std::size_t j) const { return w_[offs_[n] + j]; }
    std::span<const double> row(std::size_t n) const {
        return {&w_[offs_[n]], n + 1};
    }

    // convolution values at every node
    std::vector<double> apply(std::span<const double> v) const {
        check(v.size());
        std::vector<double> out(grid_.size(), 0.0);
        for (std::size_t n = 1; n < grid_.size(); ++n) {
            const double* row = &w_[offs_[n]];
            double s = 0.0;
            for (std::size_t j = 0; j <= n; ++j) s += row[j] * v[j];
            out[n] = s;
        }
        return out;
    }

    // partial sum over the strict past, used by implicit solvers:
    // sum_{j<n} w[n][j] v_j
    double past_sum(std::size_t n, std::span<const double> v) const {
        const double* row = &w_[offs_[n]];
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += row[j] * v[j];
        return s;
    }
    double diagonal(std::size_t n) const { return w_[offs_[n] + n]; }

   private:
    void check(std::size_t m) const {
        if (m != grid_.size())
            throw std::invalid_argument("ConvolutionWeights: sample/grid mismatch");
    }
    TimeGrid grid_;
    std::vector<double> w_;
    std::vector<std::size_t> offs_;
};

// Generalized-L1 discretization of d/dt (k*[v - v0])(t_n) for v with
// v(0) = v0:   L_n(v) = sum_{i=1}^n d[n][i] (v_i - v_{i-1}),
// d[n][i] = (1/h_i) int_{t_n - t_i}^{t_n - t_{i-1}} k.  The coefficients
// d[n][.] are nonnegative and nondecreasing in i for nonincreasing k, which
// is what the discrete convexity and comparison arguments rely on.
class HistoryWeights {
   public:
    HistoryWeights(const Kernel& k, const TimeGrid& grid) : grid_(grid) {
        const std::size_t N = grid.intervals();
        offs_.resize(N + 2, 0);
        for (std::size_t n = 0; n <= N; ++n) offs_[n + 1] = offs_[n] + n;
        d_.assign(offs_[N + 1], 0.0);
        for (std::size_t n = 1; n <= N; ++n) {
            double* row = &d_[offs_[n]];  // row[i-1] = d[n][i]
            for (std::size_t i = 1; i <= n; ++i) {
                const double a = grid[n] - grid[i], b = grid[n] - grid[i - 1];
                row[i - 1] = k.moment0(a, b) / grid.step(i);
            }
        }
    }

    std::size_t intervals() const { return grid_.intervals(); }
    const TimeGrid& grid() const { return grid_; }
    double coeff(std::size_t n, std::size_t i) const { return d_[offs_[n] + i - 1]; }
    double diagonal(std::size_t n) const { return coeff(n, n); }

    // sum_{i<n} d[n][i] (v_i - v_{i-1}); completes to L_n with the implicit term
    double past_sum(std::size_t n, std::span<const double> v) const {
        const double* row = &d_[offs_[n]];
        double s = 0.0;
        for (std::size_t i = 1; i < n; ++i) s += row[i - 1] * (v[i] - v[i - 1]);
        return s;
    }

    double operator_at(std::size_t n, std::span<const double> v) const {
        const double* row = &d_[offs_[n]];
        double s = 0.0;
        for (std::size_t i = 1; i <= n; ++i) s += row[i - 1] * (v[i] - v[i - 1]);
        return s;
    }

    // d/dt (k*[v - v0])(t_n) at every node (node 0 is set to 0 by convention);
    // v[0] may differ from v0, contributing (v[0] - v0) k(t_n).
    std::vector<double> apply(std::span<const double> v, double v0,
                              const Kernel& k) const {
        if (v.size() != grid_.size())
            throw std::invalid_argument("HistoryWeights: sample/grid mismatch");
        std::vector<double> out(grid_.size(), 0.0);
        for (std::size_t n = 1; n < grid_.size(); ++n) {
            double s = operator_at(n, v);
            if (v[0] != v0) s += (v[0] - v0) * k(grid_[n]);
            out[n] = s;
        }
        return out;
    }

   private:
    TimeGrid grid_;
    std::vector<double> d_;
    std::vector<std::size_t> offs_;
};

}  // namespace subdiff
