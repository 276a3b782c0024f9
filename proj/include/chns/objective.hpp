#pragma once

#include <vector>

#include "chns/adjoint_solver.hpp"
#include "chns/control.hpp"
#include "chns/state_solver.hpp"

namespace chns {

struct CostBreakdown {
    double track_u = 0.0;
    double track_phi = 0.0;
    double final_u = 0.0;
    double final_phi = 0.0;
    double control = 0.0;
    double total = 0.0;
};

/// Five-term quadratic cost: trapezoid in time, cell/face quadrature in space,
/// face-length weighted boundary norm.
CostBreakdown eval_cost(const Trajectory& traj, const BoundaryControl& h, const Targets& targets);

/// g = h - phat n - nu dp/dn per node and face, split into tangential and
/// normal components like the control itself.
using GradientField = BoundaryControl;

GradientField reduced_gradient(const BoundaryControl& h, const std::vector<AdjointState>& adj, double nu);

}  // namespace chns
