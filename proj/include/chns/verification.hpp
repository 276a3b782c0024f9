#pragma once

#include <cstdint>
#include <vector>

#include "chns/adjoint_solver.hpp"
#include "chns/objective.hpp"
#include "chns/optimizer.hpp"

namespace chns {

/// Everything a forward solve and the cost need.
struct Problem {
    SimConfig cfg;
    Potential pot;
    VelocityField u0;
    ScalarField phi0;
    BoundaryControl h;
    Targets targets;
    AdmissibleSet set;
    OptimizerConfig opt;
};

inline const std::vector<double> default_eps_ladder{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

/// Discrete C(0,T;L2) + L2(0,T;H1) norm of a velocity/phase series pair.
double w_norm(const std::vector<VelocityField>& u, const std::vector<ScalarField>& phi,
              const std::vector<double>& time_nodes);

struct TaylorReport {
    std::vector<double> eps_list;
    std::vector<double> remainder_norms;
    double fitted_order = 0.0;
    /// Set when every remainder is at roundoff level (zero direction or a
    /// problem that is linear in h); fitted_order is NaN then.
    bool degenerate = false;
};

/// Remainders ||S(h + eps eta) - S(h) - eps S'(h) eta||_W and their fitted
/// log-log slope.
TaylorReport taylor_test(const Problem& pb, const BoundaryControl& eta,
                         const std::vector<double>& eps_list = default_eps_ladder);

/// (J(h + eps eta) - J(h - eps eta)) / (2 eps) from two forward solves.
double fd_gradient(const Problem& pb, const BoundaryControl& eta, double eps);

/// Smooth random admissible direction: sin(pi t / T) in time, a random
/// combination of the first three edge sine modes per edge and component.
/// Zero at t = 0; the normal part is present only in free mode and carries
/// no net flux.
BoundaryControl random_direction(const Grid& g, const std::vector<double>& nodes, ControlMode mode,
                                 std::uint64_t seed);

struct GradCheckRow {
    double fd = 0.0;
    double adjoint = 0.0;
    double rel_error = 0.0;
};

struct GradCheckReport {
    double eps = 0.0;
    std::vector<GradCheckRow> rows;
    double worst_error = 0.0;
};

/// Compares <g, eta> with fd_gradient over `directions` random directions.
GradCheckReport gradcheck(const Problem& pb, int directions, std::uint64_t seed, double eps = 1e-3);

struct DualityReport {
    double lhs = 0.0;  // tracking/terminal pairings of the linearized output
    double rhs = 0.0;  // <p1, eta>
    double defect = 0.0;
};

/// Relative defect |L - R| / max(|L|, |R|), defined as 0 when both vanish.
DualityReport adjoint_identity_test(const Problem& pb, const BoundaryControl& eta);

}  // namespace chns
