#pragma once

#include <vector>

#include "chns/state_solver.hpp"

namespace chns {

/// Tracking data of the cost. uQ and phiQ hold either one field (constant in
/// time) or one field per time node.
struct Targets {
    std::vector<VelocityField> uQ;
    std::vector<ScalarField> phiQ;
    VelocityField uOmega;
    ScalarField phiOmega;

    static Targets zeros(const Grid& g);
    /// Targets met exactly by the given trajectory.
    static Targets from_trajectory(const Trajectory& traj);

    const VelocityField& uq(int n) const { return uQ.size() == 1 ? uQ.front() : uQ[static_cast<std::size_t>(n)]; }
    const ScalarField& phiq(int n) const {
        return phiQ.size() == 1 ? phiQ.front() : phiQ[static_cast<std::size_t>(n)];
    }

    /// Throws ShapeMismatch/TimeNodeMismatch unless the targets fit the grid and node count.
    void validate(const Grid& g, int nodes) const;
};

struct AdjointState {
    double t = 0.0;
    VelocityField p;       // zero on boundary faces, discretely divergence-free for t < T
    ScalarField zeta;
    ScalarField phat;      // zero mean; zero at t = T
    VelocityField p_visc;  // (I - dt nu Lap)^{-1} p, the field that meets the wall data in the forward step
};

/// Backward march of the adjoint system; result[n] lives at time node n.
/// Terminal data p(T) = u(T) - uOmega (boundary faces zeroed), zeta(T) = phi(T) - phiOmega.
std::vector<AdjointState> solve_adjoint(const Trajectory& base, const Targets& targets, const SimConfig& cfg,
                                        const Potential& pot);

struct BoundaryMultipliers {
    std::vector<VectorTrace> p1;              // -phat n - nu dp/dn per node
    std::vector<BoundaryTrace> zeta1_flux;    // -d/dn (p . grad phi) per node
};

/// Both traces are taken from p_visc, so h + p1 is the reduced gradient.
BoundaryMultipliers boundary_multipliers(const std::vector<AdjointState>& adj, const Trajectory& base, double nu);

/// -phat n - nu dp/dn at one node, with phat taken from the adjacent cell and
/// dp/dn from wall_derivative_trace.
VectorTrace multiplier_trace(const VelocityField& p, const ScalarField& phat, double nu);

}  // namespace chns
