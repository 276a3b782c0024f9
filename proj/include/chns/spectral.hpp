#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>

namespace chns {

/// Closure of the 1D second-difference operator along one axis.
enum class Closure {
    neumann,          // cell-centered unknowns, mirror ghosts (DCT-II basis)
    dirichlet_node,   // unknowns strictly between two Dirichlet nodes (DST-I basis)
    dirichlet_ghost,  // cell-centered unknowns, wall half a cell away (DST-II basis)
};

/// Orthonormal eigenbasis of the 1D second-difference matrix with the given
/// closure. Columns of `q` are eigenvectors; `lambda` holds the (non-positive)
/// eigenvalues.
struct AxisBasis {
    int n = 0;
    Eigen::MatrixXd q;
    Eigen::VectorXd lambda;
};

AxisBasis make_axis_basis(int n, double h, Closure c);

/// The dense second-difference matrix the basis diagonalizes. Used by tests.
Eigen::MatrixXd second_difference_matrix(int n, double h, Closure c);

/// Direct solver for operators that are functions of a separable 2D Laplacian
/// Lx (x) I + I (x) Ly. `solve` applies s(L)^{-1} for a scalar symbol s; modes
/// where |s| is below `singular_tol` are mapped to zero, which selects the
/// zero-mean solution of singular Neumann problems.
class SeparableSolver {
public:
    SeparableSolver() = default;
    SeparableSolver(AxisBasis x, AxisBasis y);

    int nx() const noexcept { return bx_.n; }
    int ny() const noexcept { return by_.n; }

    /// rhs and out are row-major ny x nx arrays; they may alias.
    void solve(std::span<const double> rhs, std::span<double> out,
               const std::function<double(double)>& symbol, double singular_tol = 0.0) const;

    /// Largest |s(lambda)| over the grid modes; scales residual checks.
    double max_symbol(const std::function<double(double)>& symbol) const;

private:
    AxisBasis bx_, by_;
};

}  // namespace chns
