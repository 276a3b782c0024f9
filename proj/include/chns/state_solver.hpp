#pragma once

#include <vector>

#include "chns/control.hpp"
#include "chns/grid.hpp"
#include "chns/potential.hpp"
#include "chns/stencils.hpp"

namespace chns {

struct SimConfig {
    Grid grid;
    double nu = 1.0;
    double T = 0.1;
    double dt = 2.5e-3;
    double div_tol = 1e-10;
    double lin_tol = 1e-10;
    double blowup = 1e8;
    /// Test-only toggle: drops (u.grad)u and u.grad(phi).
    bool convection = true;

    /// Number of time steps; throws ValidationError unless dt divides T.
    int steps() const;
    /// Collects every violated constraint (empty when valid).
    std::vector<std::string> violations() const;
    void validate() const;
};

struct State {
    double t = 0.0;
    VelocityField u;
    ScalarField phi;
    ScalarField mu;
    ScalarField pi;
};

struct Trajectory {
    double dt = 0.0;
    std::vector<State> states;
    BoundaryControl control;

    int steps() const noexcept { return static_cast<int>(states.size()) - 1; }
    const Grid& grid() const { return states.front().phi.grid(); }
};

/// Tangential wall trace of a face field by linear extrapolation of the two
/// nearest tangential averages. Used only for the t = 0 compatibility check.
BoundaryTrace tangential_trace(const VelocityField& u);

/// Chemical potential of the initial phase field, -Lap phi + F'(phi).
ScalarField chemical_potential(const ScalarField& phi, const Potential& pot);

/// One splitting step from s to t + dt. `wall_now` is the tangential wall
/// data of s (from the control at t), `tangential_next` and `normal_next` are
/// the control slice at t + dt.
State step_state(const Operators& ops, const State& s, const WallData& wall_now,
                 const BoundaryTrace& tangential_next, const BoundaryTrace& normal_next, const SimConfig& cfg,
                 const Potential& pot);

/// Checks zero net flux of every node and h(0) against the trace of u0.
void check_compatibility(const VelocityField& u0, const BoundaryControl& h, double tol = 1e-10);

Trajectory solve_forward(const VelocityField& u0, const ScalarField& phi0, const BoundaryControl& h,
                         const SimConfig& cfg, const Potential& pot);

/// Steady Stokes lifting: -Lap u + grad pi = 0, div u = 0, u = h on the walls.
/// Solved by conjugate gradients on the pressure Schur complement.
VelocityField solve_steady_stokes(const BoundaryTrace& tangential, const BoundaryTrace& normal,
                                  const SimConfig& cfg);

struct Diagnostics {
    double t;
    double mass;
    double kinetic;
    double mixing;
    double div_res;
};

Diagnostics diagnose(const State& s, const Potential& pot);
std::vector<Diagnostics> diagnostics(const Trajectory& traj, const Potential& pot);

/// Largest tangential slip between the near-wall extrapolated velocity and
/// the control over the whole trajectory.
double max_slip(const Trajectory& traj);

}  // namespace chns
