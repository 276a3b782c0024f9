#include "chns/verification.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "chns/error.hpp"
#include "chns/linearized_solver.hpp"

namespace chns {

namespace {

// Sum of squared first differences over a row-major array, scaled to an
// H1 seminorm contribution.
double diff_sq(std::span<const double> v, int cols, int rows, double hx, double hy) {
    double s = 0.0;
    const double a = hx * hy;
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i + 1 < cols; ++i) {
            const double d = (v[static_cast<std::size_t>(j * cols + i + 1)] - v[static_cast<std::size_t>(j * cols + i)]) / hx;
            s += a * d * d;
        }
    for (int j = 0; j + 1 < rows; ++j)
        for (int i = 0; i < cols; ++i) {
            const double d = (v[static_cast<std::size_t>((j + 1) * cols + i)] - v[static_cast<std::size_t>(j * cols + i)]) / hy;
            s += a * d * d;
        }
    return s;
}

double h1_sq(const VelocityField& u) {
    const Grid& g = u.grid();
    return diff_sq(u.ux_values(), g.nx + 1, g.ny, g.hx(), g.hy()) +
           diff_sq(u.uy_values(), g.nx, g.ny + 1, g.hx(), g.hy());
}

double h1_sq(const ScalarField& f) {
    const Grid& g = f.grid();
    return diff_sq(f.values(), g.nx, g.ny, g.hx(), g.hy());
}

double total_cost(const Problem& pb, const BoundaryControl& h) {
    const Trajectory tr = solve_forward(pb.u0, pb.phi0, h, pb.cfg, pb.pot);
    return eval_cost(tr, h, pb.targets).total;
}

}  // namespace

double w_norm(const std::vector<VelocityField>& u, const std::vector<ScalarField>& phi,
              const std::vector<double>& time_nodes) {
    if (u.size() != phi.size() || u.size() != time_nodes.size())
        throw TimeNodeMismatch("series lengths differ from the node count");
    const std::vector<double> w = trapezoid_weights(time_nodes);
    double sup = 0.0, l2h1 = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) {
        sup = std::max(sup, dot(u[n], u[n]) + dot(phi[n], phi[n]));
        l2h1 += w[n] * (dot(u[n], u[n]) + dot(phi[n], phi[n]) + h1_sq(u[n]) + h1_sq(phi[n]));
    }
    return std::sqrt(sup) + std::sqrt(l2h1);
}

TaylorReport taylor_test(const Problem& pb, const BoundaryControl& eta, const std::vector<double>& eps_list) {
    for (std::size_t k = 1; k < eps_list.size(); ++k)
        if (!(eps_list[k] < eps_list[k - 1])) throw ValidationError({"eps list must be strictly decreasing"});
    const Trajectory base = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
    const auto lin = solve_linearized(base, eta, pb.cfg, pb.pot);

    TaylorReport r;
    r.eps_list = eps_list;
    double scale = 0.0;
    for (const State& s : base.states) scale = std::max(scale, std::max(max_abs(s.u), max_abs(s.phi)));
    bool all_tiny = true;
    for (double eps : eps_list) {
        BoundaryControl hp = pb.h;
        hp.axpy(eps, eta);
        const Trajectory tp = solve_forward(pb.u0, pb.phi0, hp, pb.cfg, pb.pot);
        std::vector<VelocityField> du;
        std::vector<ScalarField> dp;
        for (std::size_t n = 0; n < tp.states.size(); ++n) {
            VelocityField a = tp.states[n].u;
            a -= base.states[n].u;
            a.axpy(-eps, lin[n].w);
            ScalarField b = tp.states[n].phi;
            b -= base.states[n].phi;
            b.axpy(-eps, lin[n].psi);
            du.push_back(std::move(a));
            dp.push_back(std::move(b));
        }
        const double rn = w_norm(du, dp, pb.h.time_nodes);
        r.remainder_norms.push_back(rn);
        if (rn > 1e-13 * (1.0 + scale)) all_tiny = false;
    }
    if (all_tiny || eps_list.size() < 2) {
        r.degenerate = true;
        r.fitted_order = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    // least-squares slope of log r against log eps
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(eps_list.size());
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        const double x = std::log(eps_list[k]);
        const double y = std::log(std::max(r.remainder_norms[k], std::numeric_limits<double>::min()));
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    r.fitted_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return r;
}

double fd_gradient(const Problem& pb, const BoundaryControl& eta, double eps) {
    BoundaryControl hp = pb.h, hm = pb.h;
    hp.axpy(eps, eta);
    hm.axpy(-eps, eta);
    return (total_cost(pb, hp) - total_cost(pb, hm)) / (2.0 * eps);
}

BoundaryControl random_direction(const Grid& g, const std::vector<double>& nodes, ControlMode mode,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    constexpr int modes = 3;
    double a[2][4][modes];
    for (auto& comp : a)
        for (auto& edge : comp)
            for (double& c : edge) c = coef(rng);

    BoundaryControl e = BoundaryControl::zeros(g, nodes);
    const double T = nodes.back() - nodes.front();
    const double pi = std::numbers::pi;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        const double tf = std::sin(pi * (nodes[n] - nodes.front()) / T);
        for (int f = 0; f < g.boundary_faces(); ++f) {
            const Face fc = g.face(f);
            const bool horizontal = fc.edge == Edge::bottom || fc.edge == Edge::top;
            const double s = horizontal ? fc.cx / g.lx : fc.cy / g.ly;
            const int edge = static_cast<int>(fc.edge);
            double vt = 0.0, vn = 0.0;
            for (int m = 0; m < modes; ++m) {
                const double b = std::sin((m + 1) * pi * s);
                vt += a[0][edge][m] * b;
                vn += a[1][edge][m] * b;
            }
            e.tangential[n][f] = tf * vt;
            if (mode == ControlMode::free_with_zero_flux) e.normal[n][f] = tf * vn;
        }
    }
    if (mode == ControlMode::free_with_zero_flux) {
        AdmissibleSet s;
        s.mode = mode;
        e = project(e, s);
    }
    e.tangential.front() = BoundaryTrace(g);
    e.normal.front() = BoundaryTrace(g);
    return e;
}

GradCheckReport gradcheck(const Problem& pb, int directions, std::uint64_t seed, double eps) {
    const Trajectory base = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
    const auto adj = solve_adjoint(base, pb.targets, pb.cfg, pb.pot);
    const GradientField g = reduced_gradient(pb.h, adj, pb.cfg.nu);

    GradCheckReport r;
    r.eps = eps;
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(directions));
    {
        std::mt19937_64 rng(seed);
        for (auto& s : seeds) s = rng();
    }
    for (int d = 0; d < directions; ++d) {
        const BoundaryControl eta =
            random_direction(pb.cfg.grid, pb.h.time_nodes, pb.set.mode, seeds[static_cast<std::size_t>(d)]);
        GradCheckRow row;
        row.fd = fd_gradient(pb, eta, eps);
        row.adjoint = dot(g, eta);
        const double den = std::max(std::abs(row.fd), std::abs(row.adjoint));
        row.rel_error = den > 0.0 ? std::abs(row.fd - row.adjoint) / den : 0.0;
        r.worst_error = std::max(r.worst_error, row.rel_error);
        r.rows.push_back(row);
    }
    return r;
}

DualityReport adjoint_identity_test(const Problem& pb, const BoundaryControl& eta) {
    const Trajectory base = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
    const auto lin = solve_linearized(base, eta, pb.cfg, pb.pot);
    const auto adj = solve_adjoint(base, pb.targets, pb.cfg, pb.pot);
    const BoundaryMultipliers bm = boundary_multipliers(adj, base, pb.cfg.nu);

    DualityReport r;
    const std::vector<double> w = trapezoid_weights(pb.h.time_nodes);
    for (std::size_t n = 0; n < w.size(); ++n) {
        VelocityField du = base.states[n].u;
        du -= pb.targets.uq(static_cast<int>(n));
        ScalarField dp = base.states[n].phi;
        dp -= pb.targets.phiq(static_cast<int>(n));
        r.lhs += w[n] * (dot(du, lin[n].w) + dot(dp, lin[n].psi));
    }
    {
        VelocityField du = base.states.back().u;
        du -= pb.targets.uOmega;
        ScalarField dp = base.states.back().phi;
        dp -= pb.targets.phiOmega;
        r.lhs += dot(du, lin.back().w) + dot(dp, lin.back().psi);
    }
    const Grid& g = pb.cfg.grid;
    for (std::size_t n = 0; n < w.size(); ++n) {
        double s = 0.0;
        for (int f = 0; f < g.boundary_faces(); ++f) {
            const Face fc = g.face(f);
            const double et = eta.tangential[n][f], en = eta.normal[n][f];
            const double ex = et * fc.tx + en * fc.nx, ey = et * fc.ty + en * fc.ny;
            s += fc.length * (bm.p1[n].x[f] * ex + bm.p1[n].y[f] * ey);
        }
        r.rhs += w[n] * s;
    }
    const double den = std::max(std::abs(r.lhs), std::abs(r.rhs));
    r.defect = den > 0.0 ? std::abs(r.lhs - r.rhs) / den : 0.0;
    return r;
}

}  // namespace chns
