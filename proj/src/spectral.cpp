#include "chns/spectral.hpp"

#include <cmath>
#include <numbers>

#include "chns/error.hpp"

namespace chns {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double mode_eigenvalue(int k, int n, double h) {
    return -(2.0 - 2.0 * std::cos(std::numbers::pi * k / n)) / (h * h);
}

}  // namespace

AxisBasis make_axis_basis(int n, double h, Closure c) {
    using std::numbers::pi;
    AxisBasis b;
    switch (c) {
        case Closure::neumann: {
            b.n = n;
            b.q.resize(n, n);
            b.lambda.resize(n);
            for (int k = 0; k < n; ++k) {
                const double ck = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
                for (int i = 0; i < n; ++i) b.q(i, k) = ck * std::cos(pi * k * (i + 0.5) / n);
                b.lambda(k) = k == 0 ? 0.0 : mode_eigenvalue(k, n, h);
            }
            break;
        }
        case Closure::dirichlet_node: {
            // n cells -> n - 1 interior nodes
            const int m = n - 1;
            b.n = m;
            b.q.resize(m, m);
            b.lambda.resize(m);
            const double ck = std::sqrt(2.0 / n);
            for (int k = 1; k <= m; ++k) {
                for (int i = 1; i <= m; ++i) b.q(i - 1, k - 1) = ck * std::sin(pi * k * i / n);
                b.lambda(k - 1) = mode_eigenvalue(k, n, h);
            }
            break;
        }
        case Closure::dirichlet_ghost: {
            b.n = n;
            b.q.resize(n, n);
            b.lambda.resize(n);
            for (int k = 1; k <= n; ++k) {
                const double ck = k == n ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
                for (int i = 0; i < n; ++i) b.q(i, k - 1) = ck * std::sin(pi * k * (i + 0.5) / n);
                b.lambda(k - 1) = mode_eigenvalue(k, n, h);
            }
            break;
        }
    }
    return b;
}

Eigen::MatrixXd second_difference_matrix(int n, double h, Closure c) {
    const int m = c == Closure::dirichlet_node ? n - 1 : n;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    const double r = 1.0 / (h * h);
    for (int i = 0; i < m; ++i) {
        a(i, i) = -2.0 * r;
        if (i > 0) a(i, i - 1) = r;
        if (i < m - 1) a(i, i + 1) = r;
    }
    if (c == Closure::neumann) {
        a(0, 0) = -r;
        a(m - 1, m - 1) = -r;
    } else if (c == Closure::dirichlet_ghost) {
        a(0, 0) = -3.0 * r;
        a(m - 1, m - 1) = -3.0 * r;
    }
    return a;
}

SeparableSolver::SeparableSolver(AxisBasis x, AxisBasis y) : bx_(std::move(x)), by_(std::move(y)) {}

void SeparableSolver::solve(std::span<const double> rhs, std::span<double> out,
                            const std::function<double(double)>& symbol, double singular_tol) const {
    const int nx = bx_.n, ny = by_.n;
    if (rhs.size() != static_cast<std::size_t>(nx * ny) || out.size() != rhs.size())
        throw ShapeMismatch("separable solve: array size does not match basis");
    Eigen::Map<const RowMat> f(rhs.data(), ny, nx);
    RowMat hat = by_.q.transpose() * f * bx_.q;
    for (int l = 0; l < ny; ++l)
        for (int k = 0; k < nx; ++k) {
            const double s = symbol(bx_.lambda(k) + by_.lambda(l));
            hat(l, k) = std::abs(s) <= singular_tol ? 0.0 : hat(l, k) / s;
        }
    RowMat back = by_.q * hat * bx_.q.transpose();
    Eigen::Map<RowMat>(out.data(), ny, nx) = back;
}

double SeparableSolver::max_symbol(const std::function<double(double)>& symbol) const {
    double m = 0.0;
    for (int l = 0; l < by_.n; ++l)
        for (int k = 0; k < bx_.n; ++k) m = std::max(m, std::abs(symbol(bx_.lambda(k) + by_.lambda(l))));
    return m;
}

}  // namespace chns
