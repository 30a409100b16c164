#pragma once

// Time grids for the Volterra and history-operator discretizations:
// uniform, graded t_i = T (i/N)^r, and graded-then-geometric composites
// for long-horizon asymptotics.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace subdiff {

class TimeGrid {
   public:
    explicit TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
        if (nodes_.size() < 3)
            throw std::invalid_argument("TimeGrid: need N >= 2 intervals");
        if (nodes_.front() != 0.0)
            throw std::invalid_argument("TimeGrid: t0 must be 0");
        for (std::size_t i = 1; i < nodes_.size(); ++i)
            if (!(nodes_[i] > nodes_[i - 1]))
                throw std::invalid_argument("TimeGrid: nodes must increase strictly");
    }

    static TimeGrid uniform(double T, std::size_t N) { return graded(T, N, 1.0); }

    static TimeGrid graded(double T, std::size_t N, double r) {
        if (!(T > 0.0) || N < 2 || !(r >= 1.0))
            throw std::invalid_argument("TimeGrid::graded: T > 0, N >= 2, r >= 1");
        std::vector<double> nodes(N + 1);
        for (std::size_t i = 0; i <= N; ++i)
            nodes[i] = T * std::pow(double(i) / double(N), r);
        nodes[N] = T;
        return TimeGrid(std::move(nodes));
    }

    // Graded nodes on [0, t_switch], then geometric stretching by `ratio`
    // up to T. Covers many decades at O(log T) extra nodes.
    static TimeGrid composite(double t_switch, std::size_t n_graded, double r,
                              double T, double ratio) {
        if (!(T > t_switch) || !(ratio > 1.0))
            throw std::invalid_argument("TimeGrid::composite: T > t_switch, ratio > 1");
        std::vector<double> nodes;
        for (std::size_t i = 0; i <= n_graded; ++i)
            nodes.push_back(t_switch * std::pow(double(i) / double(n_graded), r));
        double t = t_switch;
        while (t < T) {
            t *= ratio;
            if (t >= T * 0.9999) t = T;
            nodes.push_back(t);
        }
        return TimeGrid(std::move(nodes));
    }

    std::size_t size() const { return nodes_.size(); }          // N + 1 nodes
    std::size_t intervals() const { return nodes_.size() - 1; }  // N
    double operator[](std::size_t i) const { return nodes_[i]; }
    double back() const { return nodes_.back(); }
    double step(std::size_t i) const { return nodes_[i] - nodes_[i - 1]; }
    std::span<const double> nodes() const { return nodes_; }

    bool same_nodes(const TimeGrid& other) const { return nodes_ == other.nodes_; }

   private:
    std::vector<double> nodes_;
};

}  // namespace subdiff
