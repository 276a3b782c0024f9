#include "chns/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "chns/error.hpp"

namespace chns {

namespace {

void remove_mean_flux(BoundaryTrace& nt) {
    const Grid& g = nt.grid;
    double flux = 0.0, perimeter = 0.0;
    for (int f = 0; f < nt.size(); ++f) {
        flux += g.face(f).length * nt[f];
        perimeter += g.face(f).length;
    }
    const double c = flux / perimeter;
    for (double& v : nt.values) v -= c;
}

void mode_project(BoundaryControl& h, ControlMode mode) {
    for (auto& nt : h.normal) {
        if (mode == ControlMode::tangential_only)
            std::fill(nt.values.begin(), nt.values.end(), 0.0);
        else
            remove_mean_flux(nt);
    }
}

double slice_sq(const BoundaryControl& h, std::size_t n) {
    return dot(h.tangential[n], h.tangential[n]) + dot(h.normal[n], h.normal[n]);
}

void ball_project(BoundaryControl& h, double L, bool pinned) {
    if (!std::isfinite(L)) return;
    const std::vector<double> w = trapezoid_weights(h.time_nodes);
    const std::size_t first = pinned ? 1 : 0;
    double fixed = 0.0, free = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) (n < first ? fixed : free) += w[n] * slice_sq(h, n);
    if (fixed + free <= L * L) return;
    const double room = L * L - fixed;
    if (room < 0.0) throw CompatibilityViolation("pinned initial slice lies outside the control ball");
    const double s = free > 0.0 ? std::sqrt(room / free) : 0.0;
    for (std::size_t n = first; n < w.size(); ++n) {
        for (double& v : h.tangential[n].values) v *= s;
        for (double& v : h.normal[n].values) v *= s;
    }
}

}  // namespace

BoundaryControl project(const BoundaryControl& h, const AdmissibleSet& set) {
    if (!(set.L > 0.0)) throw ValidationError({"control.L must be positive"});
    BoundaryControl out = h;
    if (set.pinned) {
        out.tangential.front() = set.pinned->tangential;
        out.normal.front() = set.pinned->normal;
    }
    mode_project(out, set.mode);
    ball_project(out, set.L, set.pinned.has_value());
    if (set.hmax) {
        const double c = *set.hmax;
        const std::size_t first = set.pinned ? 1 : 0;
        for (std::size_t n = first; n < out.time_nodes.size(); ++n) {
            for (double& v : out.tangential[n].values) v = std::clamp(v, -c, c);
            for (double& v : out.normal[n].values) v = std::clamp(v, -c, c);
            if (set.mode == ControlMode::free_with_zero_flux) remove_mean_flux(out.normal[n]);
        }
    }
    return out;
}

std::vector<std::string> OptimizerConfig::violations() const {
    std::vector<std::string> v;
    if (max_iters < 0) v.emplace_back("optimizer.max_iters must be >= 0");
    if (!(c1 > 0.0 && c1 < 1.0)) v.emplace_back("optimizer.c1 must lie in (0, 1)");
    if (!(beta > 0.0 && beta < 1.0)) v.emplace_back("optimizer.beta must lie in (0, 1)");
    if (!(step0 > 0.0)) v.emplace_back("optimizer.step0 must be positive");
    if (!(grad_tol >= 0.0)) v.emplace_back("optimizer.grad_tol must be >= 0");
    if (!(cost_tol >= 0.0)) v.emplace_back("optimizer.cost_tol must be >= 0");
    if (max_backtracks < 1) v.emplace_back("optimizer.max_backtracks must be >= 1");
    return v;
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::grad_tol: return "grad_tol";
        case Termination::cost_tol: return "cost_tol";
        case Termination::max_iters: return "max_iters";
        case Termination::line_search_failure: return "line_search_failure";
    }
    return "unknown";
}

namespace {

BoundaryControl descent_step(const BoundaryControl& h, const GradientField& g, double a) {
    BoundaryControl out = h;
    for (std::size_t n = 1; n < out.time_nodes.size(); ++n) {
        for (int f = 0; f < g.tangential[n].size(); ++f) {
            out.tangential[n][f] -= a * g.tangential[n][f];
            out.normal[n][f] -= a * g.normal[n][f];
        }
    }
    return out;
}

}  // namespace

double projected_gradient_residual(const BoundaryControl& h, const GradientField& g, const AdmissibleSet& set,
                                   double a) {
    BoundaryControl d = project(descent_step(h, g, a), set);
    d -= h;
    return norm(d) / a;
}

OptimizationResult optimize(const VelocityField& u0, const ScalarField& phi0, const BoundaryControl& h0,
                            const Targets& targets, const AdmissibleSet& set, const OptimizerConfig& ocfg,
                            const SimConfig& cfg, const Potential& pot) {
    if (auto v = ocfg.violations(); !v.empty()) throw ValidationError(std::move(v));
    AdmissibleSet s = set;
    if (!s.pinned) s.pinned = AdmissibleSet::slice_of(h0);

    OptimizationResult r;
    r.h_final = project(h0, s);
    r.trajectory = solve_forward(u0, phi0, r.h_final, cfg, pot);
    CostBreakdown cost = eval_cost(r.trajectory, r.h_final, targets);
    r.cost_history.push_back(cost);
    r.step_history.push_back(0.0);

    double alpha = ocfg.step0;
    for (;;) {
        const auto adj = solve_adjoint(r.trajectory, targets, cfg, pot);
        const GradientField g = reduced_gradient(r.h_final, adj, cfg.nu);
        const double res = projected_gradient_residual(r.h_final, g, s, ocfg.step0);
        r.grad_norm_history.push_back(res);
        if (res <= ocfg.grad_tol) {
            r.termination = Termination::grad_tol;
            break;
        }
        if (r.iterations >= ocfg.max_iters) {
            r.termination = Termination::max_iters;
            break;
        }

        bool accepted = false;
        for (int b = 0; b < ocfg.max_backtracks; ++b) {
            BoundaryControl trial = project(descent_step(r.h_final, g, alpha), s);
            BoundaryControl d = trial;
            d -= r.h_final;
            const double dd = dot(d, d);
            Trajectory tt;
            CostBreakdown tc;
            bool ok = true;
            try {
                tt = solve_forward(u0, phi0, trial, cfg, pot);
                tc = eval_cost(tt, trial, targets);
            } catch (const StabilityBreach&) {
                ok = false;
            }
            if (ok && tc.total <= cost.total - ocfg.c1 / alpha * dd) {
                const double drop = cost.total - tc.total;
                r.h_final = std::move(trial);
                r.trajectory = std::move(tt);
                cost = tc;
                r.cost_history.push_back(cost);
                r.step_history.push_back(alpha);
                ++r.iterations;
                accepted = true;
                if (drop <= ocfg.cost_tol * std::max(1.0, std::abs(cost.total))) r.termination = Termination::cost_tol;
                if (b == 0) alpha /= ocfg.beta;
                break;
            }
            alpha *= ocfg.beta;
        }
        if (!accepted) {
            r.termination = Termination::line_search_failure;
            break;
        }
        if (r.termination == Termination::cost_tol) {
            // residual of the final iterate for the history
            const auto a2 = solve_adjoint(r.trajectory, targets, cfg, pot);
            r.grad_norm_history.push_back(
                projected_gradient_residual(r.h_final, reduced_gradient(r.h_final, a2, cfg.nu), s, ocfg.step0));
            break;
        }
    }
    return r;
}

}  // namespace chns
