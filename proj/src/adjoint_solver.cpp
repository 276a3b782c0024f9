#include "chns/adjoint_solver.hpp"

#include <algorithm>
#include <cmath>

#include "chns/error.hpp"

namespace chns {

Targets Targets::zeros(const Grid& g) {
    Targets t;
    t.uQ.emplace_back(g);
    t.phiQ.emplace_back(g);
    t.uOmega = VelocityField(g);
    t.phiOmega = ScalarField(g);
    return t;
}

Targets Targets::from_trajectory(const Trajectory& traj) {
    Targets t;
    for (const State& s : traj.states) {
        t.uQ.push_back(s.u);
        t.phiQ.push_back(s.phi);
    }
    t.uOmega = traj.states.back().u;
    t.phiOmega = traj.states.back().phi;
    return t;
}

void Targets::validate(const Grid& g, int nodes) const {
    if (uQ.empty() || phiQ.empty()) throw ShapeMismatch("targets are empty");
    auto series_ok = [nodes](std::size_t n) { return n == 1 || n == static_cast<std::size_t>(nodes); };
    if (!series_ok(uQ.size()) || !series_ok(phiQ.size()))
        throw TimeNodeMismatch("target series length must be 1 or the number of time nodes");
    for (const auto& u : uQ)
        if (!(u.grid() == g)) throw ShapeMismatch("velocity target grid differs");
    for (const auto& p : phiQ)
        if (!(p.grid() == g)) throw ShapeMismatch("phase target grid differs");
    if (!(uOmega.grid() == g) || !(phiOmega.grid() == g)) throw ShapeMismatch("terminal target grid differs");
}

namespace {

double flux_tol(const VelocityField& u) {
    const Grid& g = u.grid();
    return 1e-9 * (1.0 + max_abs(u)) * 2.0 * (g.lx + g.ly);
}

}  // namespace

std::vector<AdjointState> solve_adjoint(const Trajectory& base, const Targets& targets, const SimConfig& cfg,
                                        const Potential& pot) {
    const int m = cfg.steps();
    if (base.states.empty() || base.steps() != m) throw TrajectoryIncomplete("base trajectory does not cover [0, T]");
    const Grid& g = base.grid();
    targets.validate(g, m + 1);

    const Operators ops(g);
    const double dt = cfg.dt;
    const double S = pot.stabilization;
    const std::vector<double> w = trapezoid_weights(base.control.time_nodes);
    const WallData no_wall = zero_wall(g);
    const BoundaryTrace no_trace(g);

    std::vector<AdjointState> adj(static_cast<std::size_t>(m + 1));
    {
        AdjointState& a = adj.back();
        const State& b = base.states.back();
        a.t = b.t;
        a.p = b.u;
        a.p -= targets.uOmega;
        a.p.zero_boundary_faces();
        a.zeta = b.phi;
        a.zeta -= targets.phiOmega;
        a.phat = ScalarField(g);
    }

    for (int n = m - 1; n >= 0; --n) {
        const auto k = static_cast<std::size_t>(n);
        const State& b0 = base.states[k];
        const State& b1 = base.states[k + 1];
        AdjointState& next = adj[k + 1];

        VelocityField lam = next.p;
        ScalarField zin = next.zeta;
        if (n + 1 == m) {
            // tracking contribution of the final node
            VelocityField du = b1.u;
            du -= targets.uq(m);
            du.zero_boundary_faces();
            lam.axpy(w[k + 1], du);
            ScalarField dp = b1.phi;
            dp -= targets.phiq(m);
            zin.axpy(w[k + 1], dp);
            lam = project_divergence_free(ops, lam, cfg.lin_tol, flux_tol(lam)).u;
        }
        const VelocityField sigma = viscous_solve(ops, lam, no_trace, no_wall, dt * cfg.nu, cfg.lin_tol);
        next.p_visc = sigma;

        // coupling through the capillary force mu^{n+1} grad phi^n
        zin.axpy(dt, dot_gradient(sigma, laplacian_neumann(b1.phi)));
        zin.axpy(-dt, coupling_divergence(sigma, b0.phi));
        const ScalarField xi = cahn_hilliard_solve(ops, zin, dt, S, cfg.lin_tol);

        AdjointState& a = adj[k];
        a.t = b0.t;
        a.zeta = xi;
        if (cfg.convection) a.zeta.axpy(dt, advect(b0.u, xi));
        {
            ScalarField lx = laplacian_neumann(xi);
            auto z = a.zeta.values();
            auto l = lx.values();
            auto p = b0.phi.values();
            for (std::size_t i = 0; i < z.size(); ++i) z[i] += dt * (pot.f_d2(p[i]) - S) * l[i];
        }
        {
            ScalarField dp = b0.phi;
            dp -= targets.phiq(n);
            a.zeta.axpy(w[k], dp);
        }

        VelocityField q = sigma;
        if (cfg.convection) {
            q.axpy(dt, convect(b0.u, sigma, no_wall));
            q.axpy(-dt, transpose_gradient_contract(sigma, b0.u));
            q.axpy(-dt, capillary(xi, b0.phi));
        }
        {
            VelocityField du = b0.u;
            du -= targets.uq(n);
            q.axpy(w[k], du);
        }
        q.zero_boundary_faces();
        Projection pr = project_divergence_free(ops, q, cfg.lin_tol, flux_tol(q));
        a.p = std::move(pr.u);
        a.phat = std::move(pr.psi);
        a.phat *= -1.0 / dt;
        const double dres = max_abs(divergence(a.p));
        if (!(dres <= cfg.div_tol))
            throw LinearSolveFailure("adjoint divergence residual " + std::to_string(dres) + " exceeds div_tol");
    }
    adj.front().p_visc = adj.front().p;
    return adj;
}

VectorTrace multiplier_trace(const VelocityField& p, const ScalarField& phat, double nu) {
    const Grid& g = p.grid();
    const VectorTrace dn = wall_derivative_trace(p);
    const BoundaryTrace pw = adjacent_cell_trace(phat);
    VectorTrace out{BoundaryTrace(g), BoundaryTrace(g)};
    for (int f = 0; f < g.boundary_faces(); ++f) {
        const Face fc = g.face(f);
        out.x[f] = -pw[f] * fc.nx - nu * dn.x[f];
        out.y[f] = -pw[f] * fc.ny - nu * dn.y[f];
    }
    return out;
}

BoundaryMultipliers boundary_multipliers(const std::vector<AdjointState>& adj, const Trajectory& base, double nu) {
    if (adj.size() != base.states.size()) throw TrajectoryIncomplete("adjoint and base differ in length");
    const Grid& g = base.grid();
    BoundaryMultipliers bm;
    for (std::size_t n = 0; n < adj.size(); ++n) {
        bm.p1.push_back(multiplier_trace(adj[n].p_visc, adj[n].phat, nu));
        // p vanishes on the wall and dphi/dn = 0 there, so d/dn(p . grad phi) = (dp/dn . tau) dphi/dtau
        const VectorTrace dn = wall_derivative_trace(adj[n].p_visc);
        const ScalarField& phi = base.states[n].phi;
        BoundaryTrace z(g);
        for (int f = 0; f < g.boundary_faces(); ++f) {
            const Face fc = g.face(f);
            double dtau = 0.0;
            auto along = [&](int i, int j, int di, int dj, int len, double h) {
                const int km = std::max(fc.k - 1, 0), kp = std::min(fc.k + 1, len - 1);
                const double fm = phi(i + di * (km - fc.k), j + dj * (km - fc.k));
                const double fp = phi(i + di * (kp - fc.k), j + dj * (kp - fc.k));
                return (fp - fm) / (h * (kp - km));
            };
            switch (fc.edge) {
                case Edge::bottom: dtau = along(fc.k, 0, 1, 0, g.nx, g.hx()); break;
                case Edge::top: dtau = -along(fc.k, g.ny - 1, 1, 0, g.nx, g.hx()); break;
                case Edge::right: dtau = along(g.nx - 1, fc.k, 0, 1, g.ny, g.hy()); break;
                case Edge::left: dtau = -along(0, fc.k, 0, 1, g.ny, g.hy()); break;
            }
            const double dpt = dn.x[f] * fc.tx + dn.y[f] * fc.ty;
            z[f] = -dpt * dtau;
        }
        bm.zeta1_flux.push_back(std::move(z));
    }
    return bm;
}

}  // namespace chns
