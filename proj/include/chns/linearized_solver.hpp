#pragma once

#include <vector>

#include "chns/state_solver.hpp"

namespace chns {

struct LinearizedState {
    double t = 0.0;
    VelocityField w;
    ScalarField psi;
    ScalarField mu_psi;
};

/// Directional derivative of the discrete control-to-state map at base.control
/// in direction eta: every operator is the exact linearization of the one used
/// by step_state. eta must vanish at t = 0 and carry zero net flux per node.
std::vector<LinearizedState> solve_linearized(const Trajectory& base, const BoundaryControl& eta,
                                              const SimConfig& cfg, const Potential& pot);

}  // namespace chns
