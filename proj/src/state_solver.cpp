#include "chns/state_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chns/error.hpp"

namespace chns {

std::vector<std::string> SimConfig::violations() const {
    std::vector<std::string> bad;
    if (!(nu > 0.0)) bad.push_back("physics.nu must be positive");
    if (!(T > 0.0)) bad.push_back("time.T must be positive");
    if (!(dt > 0.0)) bad.push_back("time.dt must be positive");
    if (dt > 0.0 && T > 0.0) {
        const double m = T / dt;
        if (std::abs(m - std::round(m)) > 1e-9 * std::max(1.0, m) || std::round(m) < 1.0)
            bad.push_back("time.dt must divide T");
    }
    if (!(div_tol > 0.0)) bad.push_back("solver.div_tol must be positive");
    if (!(lin_tol > 0.0)) bad.push_back("solver.lin_tol must be positive");
    return bad;
}

void SimConfig::validate() const {
    auto bad = violations();
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

int SimConfig::steps() const {
    validate();
    return static_cast<int>(std::lround(T / dt));
}

BoundaryTrace tangential_trace(const VelocityField& u) {
    const Grid& g = u.grid();
    BoundaryTrace t(g);
    const int nx = g.nx, ny = g.ny;
    auto ext = [](double a0, double a1) { return 1.5 * a0 - 0.5 * a1; };
    for (int i = 0; i < nx; ++i) {
        const double b0 = 0.5 * (u.ux(i, 0) + u.ux(i + 1, 0));
        const double b1 = 0.5 * (u.ux(i, 1) + u.ux(i + 1, 1));
        const double t0 = 0.5 * (u.ux(i, ny - 1) + u.ux(i + 1, ny - 1));
        const double t1 = 0.5 * (u.ux(i, ny - 2) + u.ux(i + 1, ny - 2));
        t[g.face_id(Edge::bottom, i)] = ext(b0, b1);
        t[g.face_id(Edge::top, i)] = -ext(t0, t1);
    }
    for (int j = 0; j < ny; ++j) {
        const double l0 = 0.5 * (u.uy(0, j) + u.uy(0, j + 1));
        const double l1 = 0.5 * (u.uy(1, j) + u.uy(1, j + 1));
        const double r0 = 0.5 * (u.uy(nx - 1, j) + u.uy(nx - 1, j + 1));
        const double r1 = 0.5 * (u.uy(nx - 2, j) + u.uy(nx - 2, j + 1));
        t[g.face_id(Edge::left, j)] = -ext(l0, l1);
        t[g.face_id(Edge::right, j)] = ext(r0, r1);
    }
    return t;
}

ScalarField chemical_potential(const ScalarField& phi, const Potential& pot) {
    ScalarField mu = laplacian_neumann(phi);
    mu *= -1.0;
    auto m = mu.values();
    auto p = phi.values();
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += pot.f_d1(p[k]);
    return mu;
}

namespace {

void guard(const State& s, double blowup) {
    if (!all_finite(s.u) || !all_finite(s.phi) || max_abs(s.u) > blowup || max_abs(s.phi) > blowup)
        throw StabilityBreach("state exceeded the blowup guard at t = " + std::to_string(s.t));
}

double flux_tolerance(const VelocityField& u) {
    const Grid& g = u.grid();
    return 1e-9 * (1.0 + max_abs(u)) * 2.0 * (g.lx + g.ly);
}

}  // namespace

State step_state(const Operators& ops, const State& s, const WallData& wall_now,
                 const BoundaryTrace& tangential_next, const BoundaryTrace& normal_next, const SimConfig& cfg,
                 const Potential& pot) {
    const Grid& g = ops.grid;
    const double dt = cfg.dt;
    const double S = pot.stabilization;
    State out;
    out.t = s.t + dt;

    // Cahn-Hilliard
    ScalarField expl(g);
    {
        auto e = expl.values();
        auto p = s.phi.values();
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = pot.f_d1(p[k]) - S * p[k];
    }
    ScalarField rhs = s.phi;
    rhs.axpy(dt, laplacian_neumann(expl));
    if (cfg.convection) rhs.axpy(-dt, advect(s.u, s.phi));
    out.phi = cahn_hilliard_solve(ops, rhs, dt, S, cfg.lin_tol);

    out.mu = laplacian_neumann(out.phi);
    out.mu *= -1.0;
    {
        auto m = out.mu.values();
        auto pn = out.phi.values();
        auto p = s.phi.values();
        for (std::size_t k = 0; k < m.size(); ++k) m[k] += pot.f_d1(p[k]) + S * (pn[k] - p[k]);
    }

    // tentative velocity
    VelocityField urhs = s.u;
    if (cfg.convection) urhs.axpy(-dt, convect(s.u, s.u, wall_now));
    urhs.axpy(dt, capillary(out.mu, s.phi));
    const VelocityField ustar =
        viscous_solve(ops, urhs, normal_next, wall_data(tangential_next), dt * cfg.nu, cfg.lin_tol);

    // projection
    Projection pr = project_divergence_free(ops, ustar, cfg.lin_tol, flux_tolerance(ustar));
    out.u = std::move(pr.u);
    out.pi = std::move(pr.psi);
    out.pi *= 1.0 / dt;

    const double dres = max_abs(divergence(out.u));
    if (!(dres <= cfg.div_tol))
        throw LinearSolveFailure("divergence residual " + std::to_string(dres) + " exceeds div_tol");
    guard(out, cfg.blowup);
    return out;
}

void check_compatibility(const VelocityField& u0, const BoundaryControl& h, double tol) {
    const Grid& g = u0.grid();
    if (h.nodes() < 2) throw ValidationError({"control needs at least two time nodes"});
    if (!(h.grid() == g)) throw ShapeMismatch("control grid differs from the state grid");
    for (int n = 0; n < h.nodes(); ++n) {
        double scale = 0.0;
        for (int f = 0; f < g.boundary_faces(); ++f)
            scale += g.face(f).length * std::abs(h.normal[static_cast<std::size_t>(n)][f]);
        if (std::abs(h.net_flux(n)) > 1e-12 * std::max(1.0, scale))
            throw CompatibilityViolation("control has nonzero net flux at t = " +
                                         std::to_string(h.time_nodes[static_cast<std::size_t>(n)]));
    }
    const BoundaryTrace nt = normal_faces(u0);
    const BoundaryTrace tt = tangential_trace(u0);
    double worst = 0.0;
    for (int f = 0; f < g.boundary_faces(); ++f) {
        worst = std::max(worst, std::abs(nt[f] - h.normal[0][f]));
        worst = std::max(worst, std::abs(tt[f] - h.tangential[0][f]));
    }
    if (worst > tol)
        throw CompatibilityViolation("control at t = 0 differs from the initial velocity trace by " +
                                     std::to_string(worst));
}

Trajectory solve_forward(const VelocityField& u0, const ScalarField& phi0, const BoundaryControl& h,
                         const SimConfig& cfg, const Potential& pot) {
    const int m = cfg.steps();
    const Grid& g = cfg.grid;
    if (!(u0.grid() == g) || !(phi0.grid() == g)) throw ShapeMismatch("initial data grid differs from config");
    if (h.nodes() != m + 1) throw TimeNodeMismatch("control node count does not match T/dt");
    for (int n = 0; n <= m; ++n)
        if (std::abs(h.time_nodes[static_cast<std::size_t>(n)] - n * cfg.dt) > 1e-9 * cfg.dt)
            throw TimeNodeMismatch("control nodes are not the uniform time grid");
    check_compatibility(u0, h);

    const Operators ops(g);
    Trajectory traj;
    traj.dt = cfg.dt;
    traj.control = h;
    traj.states.reserve(static_cast<std::size_t>(m + 1));
    State s0;
    s0.u = u0;
    s0.phi = phi0;
    s0.mu = chemical_potential(phi0, pot);
    s0.pi = ScalarField(g);
    traj.states.push_back(std::move(s0));
    for (int n = 0; n < m; ++n) {
        const auto k = static_cast<std::size_t>(n);
        traj.states.push_back(step_state(ops, traj.states[k], wall_data(h.tangential[k]), h.tangential[k + 1],
                                         h.normal[k + 1], cfg, pot));
        traj.states.back().t = h.time_nodes[k + 1];
    }
    return traj;
}

VelocityField solve_steady_stokes(const BoundaryTrace& tangential, const BoundaryTrace& normal,
                                  const SimConfig& cfg) {
    const Grid& g = cfg.grid;
    const Operators ops(g);
    double flux = 0.0, scale = 0.0;
    for (int f = 0; f < g.boundary_faces(); ++f) {
        flux += g.face(f).length * normal[f];
        scale += g.face(f).length * std::abs(normal[f]);
    }
    if (std::abs(flux) > 1e-12 * std::max(1.0, scale))
        throw CompatibilityViolation("steady Stokes data has nonzero net flux");

    const WallData wall = wall_data(tangential);
    // u(pi) = (-Lap_0)^{-1}(L_b - grad pi) on interior faces, boundary faces = normal data
    auto velocity_for = [&](const ScalarField& pi) {
        VelocityField b(g);
        set_normal_faces(b, normal);
        VelocityField r = velocity_laplacian(b, wall);
        r.axpy(-1.0, gradient_to_faces(pi));
        VelocityField v = r;  // interior values overwritten below
        std::vector<double> bx, by;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i) bx.push_back(r.ux(i, j));
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) by.push_back(r.uy(i, j));
        auto sym = [](double lam) { return -lam; };
        ops.ux.solve(bx, bx, sym);
        ops.uy.solve(by, by, sym);
        std::size_t k = 0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i) v.ux(i, j) = bx[k++];
        k = 0;
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) v.uy(i, j) = by[k++];
        set_normal_faces(v, normal);
        return v;
    };
    // Schur operator A pi = div(u(pi) - u(0)) = div (-Lap_0)^{-1} div^T pi is
    // symmetric positive semidefinite; div u(pi) = 0 is A pi = -div u(0).
    const VelocityField u0 = velocity_for(ScalarField(g));
    auto apply = [&](const ScalarField& pi) {
        VelocityField d = velocity_for(pi);
        d -= u0;
        return divergence(d);
    };
    auto demean = [](ScalarField& f) {
        const double m = mean(f);
        for (double& x : f.values()) x -= m;
    };

    ScalarField pi(g);
    ScalarField r = divergence(u0);  // residual b - A pi with b = -div u(0)
    r *= -1.0;
    demean(r);
    ScalarField p = r;
    double rr = dot(r, r);
    const int max_iter = 10 * g.cells();
    int it = 0;
    for (; it < max_iter && std::sqrt(rr / g.area()) > 0.1 * cfg.div_tol; ++it) {
        ScalarField ap = apply(p);
        demean(ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) break;
        const double alpha = rr / pap;
        pi.axpy(alpha, p);
        r.axpy(-alpha, ap);
        const double rr_new = dot(r, r);
        ScalarField pn = r;
        pn.axpy(rr_new / rr, p);
        p = std::move(pn);
        rr = rr_new;
    }
    VelocityField u = velocity_for(pi);
    const double dres = max_abs(divergence(u));
    if (!(dres <= cfg.div_tol))
        throw LinearSolveFailure("steady Stokes: divergence residual " + std::to_string(dres) + " after " +
                                 std::to_string(it) + " iterations");
    return u;
}

Diagnostics diagnose(const State& s, const Potential& pot) {
    const Grid& g = s.phi.grid();
    Diagnostics d{};
    d.t = s.t;
    double mass = 0.0, fsum = 0.0;
    for (double x : s.phi.values()) {
        mass += x;
        fsum += pot.f_val(x);
    }
    d.mass = mass * g.cell_area();
    d.kinetic = 0.5 * dot(s.u, s.u);
    const VelocityField gp = gradient_to_faces(s.phi);
    d.mixing = 0.5 * dot(gp, gp) + fsum * g.cell_area();
    d.div_res = max_abs(divergence(s.u));
    return d;
}

std::vector<Diagnostics> diagnostics(const Trajectory& traj, const Potential& pot) {
    std::vector<Diagnostics> out;
    out.reserve(traj.states.size());
    for (const State& s : traj.states) out.push_back(diagnose(s, pot));
    return out;
}

double max_slip(const Trajectory& traj) {
    double worst = 0.0;
    for (std::size_t n = 1; n < traj.states.size(); ++n) {
        const BoundaryTrace t = tangential_trace(traj.states[n].u);
        for (int f = 0; f < t.size(); ++f)
            worst = std::max(worst, std::abs(t[f] - traj.control.tangential[n][f]));
    }
    return worst;
}

}  // namespace chns
