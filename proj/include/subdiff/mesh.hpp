#pragma once

// 1D Dirichlet interval mesh with the discrete Laplacian eigenpairs in
// closed form, nodal fields, and bounded measurable coefficients.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace subdiff {

class Mesh1D {
   public:
    Mesh1D(double length, std::size_t interior_nodes)
        : L_(length), M_(interior_nodes) {
        if (!(L_ > 0.0)) throw std::invalid_argument("Mesh1D: L > 0");
        if (M_ < 3) throw std::invalid_argument("Mesh1D: M >= 3");
    }

    double length() const { return L_; }
    std::size_t interior() const { return M_; }
    double h() const { return L_ / double(M_ + 1); }
    double x(std::size_t i) const { return h() * double(i); }  // i = 1..M

    // eigenvalues of the discrete Dirichlet Laplacian -D+D- on the mesh
    double eigenvalue(std::size_t n) const {
        const double s = std::sin(0.5 * M_PI * double(n) * h() / L_);
        return 4.0 / (h() * h()) * s * s;
    }
    double lambda1() const { return eigenvalue(1); }
    double lambda1_continuum() const { return std::pow(M_PI / L_, 2.0); }

    // discrete-L2-normalized eigenvector sqrt(2/L) sin(n pi x / L)
    std::vector<double> eigenvector(std::size_t n) const {
        std::vector<double> v(M_);
        const double c = std::sqrt(2.0 / L_);
        for (std::size_t i = 1; i <= M_; ++i)
            v[i - 1] = c * std::sin(double(n) * M_PI * x(i) / L_);
        return v;
    }

    double l2_norm(const std::vector<double>& u) const {
        double s = 0.0;
        for (double v : u) s += v * v;
        return std::sqrt(h() * s);
    }
    double lp_norm(const std::vector<double>& u, double p) const {
        double s = 0.0;
        for (double v : u) s += std::pow(std::abs(v), p);
        return std::pow(h() * s, 1.0 / p);
    }
    double inner(const std::vector<double>& u, const std::vector<double>& v) const {
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
        return h() * s;
    }

   private:
    double L_;
    std::size_t M_;
};

using Field = std::vector<double>;  // interior nodal values, boundary = 0

struct Coefficient {
    std::function<double(double t, double x)> a;
    double nu;      // declared lower bound
    double Lambda;  // declared upper bound

    static Coefficient constant(double value) {
        return {[value](double, double) { return value; }, value, value};
    }
};

}  // namespace subdiff
