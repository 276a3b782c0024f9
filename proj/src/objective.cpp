#include "chns/objective.hpp"

#include "chns/error.hpp"

namespace chns {

CostBreakdown eval_cost(const Trajectory& traj, const BoundaryControl& h, const Targets& targets) {
    if (traj.states.empty()) throw TrajectoryIncomplete("empty trajectory");
    const Grid& g = traj.grid();
    if (!(h.grid() == g)) throw ShapeMismatch("control grid differs from trajectory grid");
    if (h.nodes() != static_cast<int>(traj.states.size())) throw ShapeMismatch("control and trajectory lengths differ");
    targets.validate(g, h.nodes());

    const std::vector<double> w = trapezoid_weights(h.time_nodes);
    CostBreakdown c;
    for (std::size_t n = 0; n < w.size(); ++n) {
        VelocityField du = traj.states[n].u;
        du -= targets.uq(static_cast<int>(n));
        ScalarField dp = traj.states[n].phi;
        dp -= targets.phiq(static_cast<int>(n));
        c.track_u += 0.5 * w[n] * dot(du, du);
        c.track_phi += 0.5 * w[n] * dot(dp, dp);
        c.control += 0.5 * w[n] * (dot(h.tangential[n], h.tangential[n]) + dot(h.normal[n], h.normal[n]));
    }
    VelocityField du = traj.states.back().u;
    du -= targets.uOmega;
    ScalarField dp = traj.states.back().phi;
    dp -= targets.phiOmega;
    c.final_u = 0.5 * dot(du, du);
    c.final_phi = 0.5 * dot(dp, dp);
    c.total = c.track_u + c.track_phi + c.final_u + c.final_phi + c.control;
    return c;
}

GradientField reduced_gradient(const BoundaryControl& h, const std::vector<AdjointState>& adj, double nu) {
    if (adj.size() != static_cast<std::size_t>(h.nodes()))
        throw TimeNodeMismatch("adjoint and control have different node counts");
    for (std::size_t n = 0; n < adj.size(); ++n)
        if (std::abs(adj[n].t - h.time_nodes[n]) > 1e-9 * (1.0 + std::abs(h.time_nodes[n])))
            throw TimeNodeMismatch("adjoint and control time nodes differ");
    const Grid& g = h.grid();
    GradientField gr = h;
    for (std::size_t n = 0; n < adj.size(); ++n) {
        const VectorTrace p1 = multiplier_trace(adj[n].p_visc, adj[n].phat, nu);
        for (int f = 0; f < g.boundary_faces(); ++f) {
            const Face fc = g.face(f);
            gr.tangential[n][f] += p1.x[f] * fc.tx + p1.y[f] * fc.ty;
            gr.normal[n][f] += p1.x[f] * fc.nx + p1.y[f] * fc.ny;
        }
    }
    return gr;
}

}  // namespace chns
