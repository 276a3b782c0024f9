#pragma once

#include "chns/control.hpp"
#include "chns/grid.hpp"
#include "chns/spectral.hpp"

namespace chns {

/// Direct solvers for the three MAC unknown layouts of one grid.
struct Operators {
    Grid grid;
    SeparableSolver ux;    // interior x faces: (nx-1) x ny
    SeparableSolver uy;    // interior y faces: nx x (ny-1)
    SeparableSolver cell;  // cell centers, Neumann closure

    explicit Operators(const Grid& g);
};

/// Velocity Laplacian on interior faces. Boundary faces of u supply the
/// normal data, `wall` the tangential data through ghost values 2w - u.
/// Boundary faces of the result are zero.
VelocityField velocity_laplacian(const VelocityField& u, const WallData& wall);

/// Conservative centered MAC discretization of div(a (x) b) on interior
/// faces: a transports b. `wall_b` holds b's tangential wall values; only the
/// boundary faces of a are read for its wall data. Bilinear in (a, b).
VelocityField convect(const VelocityField& a, const VelocityField& b, const WallData& wall_b);

/// (p . grad^T) u on interior faces: component i is sum_j p_j d_i u_j.
VelocityField transpose_gradient_contract(const VelocityField& p, const VelocityField& u);

/// Conservative centered div(u f). Interior faces carry the face average of
/// f, boundary faces the adjacent cell value.
ScalarField advect(const VelocityField& u, const ScalarField& f);

/// mu_face * grad_face(phi) on interior faces (mu averaged to the face).
VelocityField capillary(const ScalarField& mu, const ScalarField& phi);

/// Cellwise p . grad(g): face products p_f (grad g)_f averaged onto cells.
ScalarField dot_gradient(const VelocityField& p, const ScalarField& g);

/// div((grad p) . grad phi) + div((grad^T grad phi) . p), each factor taken at
/// cell centers and the resulting vector averaged to interior faces; zero
/// flux through the walls.
ScalarField coupling_divergence(const VelocityField& p, const ScalarField& phi);

/// Solves (I - c Lap_h) v = rhs on interior faces with boundary faces equal
/// to the normal trace and the given tangential wall data.
VelocityField viscous_solve(const Operators& ops, const VelocityField& rhs, const BoundaryTrace& normal,
                            const WallData& wall, double c, double lin_tol);

/// Solves (I + dt(Lap_N^2 - s Lap_N)) f = rhs.
ScalarField cahn_hilliard_solve(const Operators& ops, const ScalarField& rhs, double dt, double s,
                                double lin_tol);

/// Zero-mean psi with Lap_N psi = f - mean(f).
ScalarField poisson_neumann(const Operators& ops, const ScalarField& f, double lin_tol);

struct Projection {
    VelocityField u;  // divergence-free, boundary faces kept from the input
    ScalarField psi;  // zero-mean potential with u = u* - grad psi
};

/// Discrete Leray projection. Throws CompatibilityViolation if the boundary
/// faces carry net flux above `flux_tol`.
Projection project_divergence_free(const Operators& ops, const VelocityField& ustar, double lin_tol,
                                   double flux_tol);

}  // namespace chns
