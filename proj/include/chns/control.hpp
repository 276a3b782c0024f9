#pragma once

#include <vector>

#include "chns/grid.hpp"

namespace chns {

/// Time-indexed boundary velocity h on the walls, one tangential and one
/// normal trace per time node. At face f the wall velocity is
/// tangential[f] * tau_f + normal[f] * n_f.
struct BoundaryControl {
    std::vector<double> time_nodes;
    std::vector<BoundaryTrace> tangential;
    std::vector<BoundaryTrace> normal;

    static BoundaryControl zeros(const Grid& g, std::vector<double> nodes);
    /// Nodes 0, dt, ..., steps*dt.
    static BoundaryControl zeros(const Grid& g, double dt, int steps);

    int nodes() const noexcept { return static_cast<int>(time_nodes.size()); }
    const Grid& grid() const { return tangential.front().grid; }

    /// Face-length weighted normal flux of node n.
    double net_flux(int n) const;

    BoundaryControl& axpy(double a, const BoundaryControl& o);
    BoundaryControl& operator*=(double a);
    BoundaryControl& operator+=(const BoundaryControl& o) { return axpy(1.0, o); }
    BoundaryControl& operator-=(const BoundaryControl& o) { return axpy(-1.0, o); }
};

/// Composite trapezoid weights of the node list.
std::vector<double> trapezoid_weights(const std::vector<double>& nodes);

/// L2(Sigma) inner product: trapezoid in time, face-length weighted in space,
/// summed over both components.
double dot(const BoundaryControl& a, const BoundaryControl& b);
double norm(const BoundaryControl& a);
double max_abs(const BoundaryControl& a);

/// Throws TimeNodeMismatch unless both controls share grid and time nodes.
void require_same_nodes(const BoundaryControl& a, const BoundaryControl& b);

/// Tangential wall velocity at the grid nodes along each wall, as used by
/// the ghost closures and convective fluxes. bottom/top hold the x velocity at
/// x = i hx (i = 0..nx), left/right the y velocity at y = j hy (j = 0..ny).
/// Interior nodes average the two adjacent faces; the corner entries are not
/// referenced by any stencil.
struct WallData {
    std::vector<double> bottom, top, left, right;
};

WallData wall_data(const BoundaryTrace& tangential);
WallData zero_wall(const Grid& g);

/// Writes the normal trace into the boundary faces of u.
void set_normal_faces(VelocityField& u, const BoundaryTrace& normal);

/// Reads the normal component of u at the boundary faces.
BoundaryTrace normal_faces(const VelocityField& u);

}  // namespace chns
