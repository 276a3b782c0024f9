#include "chns/linearized_solver.hpp"

#include <cmath>

#include "chns/error.hpp"

namespace chns {

namespace {

LinearizedState step_linearized(const Operators& ops, const State& b0, const State& b1, const WallData& wall0,
                                const LinearizedState& s, const WallData& dwall0, const BoundaryTrace& dtan1,
                                const BoundaryTrace& dnor1, const SimConfig& cfg, const Potential& pot) {
    const Grid& g = ops.grid;
    const double dt = cfg.dt;
    const double S = pot.stabilization;
    LinearizedState out;
    out.t = s.t + dt;

    ScalarField lin(g);  // (F''(phi^n) - S) psi^n
    {
        auto l = lin.values();
        auto p = b0.phi.values();
        auto q = s.psi.values();
        for (std::size_t k = 0; k < l.size(); ++k) l[k] = (pot.f_d2(p[k]) - S) * q[k];
    }
    ScalarField rhs = s.psi;
    rhs.axpy(dt, laplacian_neumann(lin));
    if (cfg.convection) {
        rhs.axpy(-dt, advect(s.w, b0.phi));
        rhs.axpy(-dt, advect(b0.u, s.psi));
    }
    out.psi = cahn_hilliard_solve(ops, rhs, dt, S, cfg.lin_tol);

    out.mu_psi = laplacian_neumann(out.psi);
    out.mu_psi *= -1.0;
    {
        auto m = out.mu_psi.values();
        auto pn = out.psi.values();
        auto q = s.psi.values();
        auto p = b0.phi.values();
        for (std::size_t k = 0; k < m.size(); ++k) m[k] += pot.f_d2(p[k]) * q[k] + S * (pn[k] - q[k]);
    }

    VelocityField urhs = s.w;
    if (cfg.convection) {
        urhs.axpy(-dt, convect(b0.u, s.w, dwall0));
        urhs.axpy(-dt, convect(s.w, b0.u, wall0));
    }
    urhs.axpy(dt, capillary(out.mu_psi, b0.phi));
    urhs.axpy(dt, capillary(b1.mu, s.psi));
    const VelocityField wstar = viscous_solve(ops, urhs, dnor1, wall_data(dtan1), dt * cfg.nu, cfg.lin_tol);
    Projection pr =
        project_divergence_free(ops, wstar, cfg.lin_tol, 1e-9 * (1.0 + max_abs(wstar)) * 2.0 * (g.lx + g.ly));
    out.w = std::move(pr.u);
    const double dres = max_abs(divergence(out.w));
    if (!(dres <= cfg.div_tol))
        throw LinearSolveFailure("linearized divergence residual " + std::to_string(dres) + " exceeds div_tol");
    return out;
}

}  // namespace

std::vector<LinearizedState> solve_linearized(const Trajectory& base, const BoundaryControl& eta,
                                              const SimConfig& cfg, const Potential& pot) {
    if (base.states.empty() || base.steps() != cfg.steps())
        throw TrajectoryIncomplete("base trajectory does not cover [0, T]");
    require_same_nodes(base.control, eta);
    const Grid& g = base.grid();
    for (int f = 0; f < g.boundary_faces(); ++f)
        if (eta.tangential[0][f] != 0.0 || eta.normal[0][f] != 0.0)
            throw CompatibilityViolation("perturbation must vanish at t = 0");
    for (int n = 0; n < eta.nodes(); ++n) {
        double scale = 0.0;
        for (int f = 0; f < g.boundary_faces(); ++f)
            scale += g.face(f).length * std::abs(eta.normal[static_cast<std::size_t>(n)][f]);
        if (std::abs(eta.net_flux(n)) > 1e-12 * std::max(1.0, scale))
            throw CompatibilityViolation("perturbation has nonzero net flux");
    }

    const Operators ops(g);
    std::vector<LinearizedState> out;
    out.reserve(base.states.size());
    LinearizedState s0;
    s0.w = VelocityField(g);
    s0.psi = ScalarField(g);
    s0.mu_psi = ScalarField(g);
    out.push_back(std::move(s0));
    for (int n = 0; n < base.steps(); ++n) {
        const auto k = static_cast<std::size_t>(n);
        out.push_back(step_linearized(ops, base.states[k], base.states[k + 1], wall_data(base.control.tangential[k]),
                                      out[k], wall_data(eta.tangential[k]), eta.tangential[k + 1],
                                      eta.normal[k + 1], cfg, pot));
        out.back().t = base.states[k + 1].t;
    }
    return out;
}

}  // namespace chns
