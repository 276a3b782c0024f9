#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chns/adjoint_solver.hpp"
#include "chns/objective.hpp"

namespace chns {

enum class ControlMode { tangential_only, free_with_zero_flux };

/// Discrete admissible set: a ball of radius L in L2(Sigma) intersected with
/// the subspace of the mode. When `pinned` is set the t = 0 slice is fixed to
/// it (compatibility with u0) and the ball constrains the whole control with
/// that slice held.
struct AdmissibleSet {
    double L = std::numeric_limits<double>::infinity();
    ControlMode mode = ControlMode::tangential_only;
    std::optional<double> hmax;
    struct Slice {
        BoundaryTrace tangential, normal;
    };
    std::optional<Slice> pinned;

    /// Pin the t = 0 slice of h.
    static Slice slice_of(const BoundaryControl& h) { return {h.tangential.front(), h.normal.front()}; }
};

/// (i) mode projection per node, (ii) radial scaling into the ball,
/// (iii) optional pointwise clamp to hmax followed by one flux correction.
/// Without hmax this is the orthogonal projection onto the set.
BoundaryControl project(const BoundaryControl& h, const AdmissibleSet& set);

struct OptimizerConfig {
    int max_iters = 50;
    double c1 = 1e-4;
    double beta = 0.5;
    double step0 = 1.0;
    double grad_tol = 1e-8;
    double cost_tol = 1e-12;
    int max_backtracks = 30;

    std::vector<std::string> violations() const;
};

enum class Termination { grad_tol, cost_tol, max_iters, line_search_failure };

std::string to_string(Termination t);

struct OptimizationResult {
    BoundaryControl h_final;
    Trajectory trajectory;                   // forward solve of h_final
    std::vector<CostBreakdown> cost_history;  // entry 0 is the initial control
    std::vector<double> grad_norm_history;    // projected-gradient residual per entry
    std::vector<double> step_history;         // accepted step per entry (0 for entry 0)
    int iterations = 0;
    Termination termination = Termination::max_iters;
};

/// Projected gradient residual ||h - P(h - a g)|| / a.
double projected_gradient_residual(const BoundaryControl& h, const GradientField& g, const AdmissibleSet& set,
                                   double a);

/// Projected-gradient descent with Armijo backtracking on the reduced cost.
/// The t = 0 slice of the search direction is zeroed.
OptimizationResult optimize(const VelocityField& u0, const ScalarField& phi0, const BoundaryControl& h0,
                            const Targets& targets, const AdmissibleSet& set, const OptimizerConfig& ocfg,
                            const SimConfig& cfg, const Potential& pot);

}  // namespace chns
