#include <cmath>
#include <numbers>

#include "chns/adjoint_solver.hpp"
#include "chns/error.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

using namespace chns;
using std::numbers::pi;

namespace {

// targets that leave the given mismatches against the trajectory
Targets offset_targets(const Trajectory& tr, const VelocityField& mu, const ScalarField& mphi) {
    Targets t = Targets::from_trajectory(tr);
    for (auto& u : t.uQ) u -= mu;
    for (auto& p : t.phiQ) p -= mphi;
    t.uOmega -= mu;
    t.phiOmega -= mphi;
    return t;
}

double adjoint_size(const AdjointState& s) { return std::hypot(norm(s.p), norm(s.zeta), norm(s.phat)); }

}  // namespace

TEST_SUITE("adjoint") {

TEST_CASE("matched targets give a zero adjoint") {
    const Problem pb = support::lid(16, 10);
    const Trajectory tr = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
    const auto adj = solve_adjoint(tr, Targets::from_trajectory(tr), pb.cfg, pb.pot);
    CHECK(adj.size() == 11);
    for (const auto& s : adj) CHECK(adjoint_size(s) < 1e-13);
}

TEST_CASE("cosine mode decays at the modal rate backward in time") {
    // zero base: zeta solves -zeta_t + Lap^2 zeta + 4 Lap zeta = 0, so a Neumann
    // eigenmode with eigenvalue lambda of -Lap scales by exp(-(lambda^2 - 4 lambda)(T - t))
    const int n = 32;
    const double T = 0.02;
    auto run = [&](int steps) {
        const Problem pb = support::zero_problem(n, steps, T);
        const Trajectory tr = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
        Targets tg = Targets::zeros(pb.cfg.grid);
        tg.phiOmega = ScalarField::sample(pb.cfg.grid, [](double x, double) { return std::cos(pi * x); });
        const auto adj = solve_adjoint(tr, tg, pb.cfg, pb.pot);
        const double lam = oracle::neumann_eigenvalue(n, 1.0 / n, 1);
        double worst = 0.0;
        for (const auto& s : adj) {
            CHECK(max_abs(s.p) < 1e-12);
            const double amp = -std::exp(-(lam * lam - 4 * lam) * (T - s.t));
            ScalarField expect = tg.phiOmega;
            expect *= amp;
            worst = std::max(worst, support::rel_diff(s.zeta, expect));
        }
        return worst;
    };
    const double e1 = run(200), e2 = run(400);
    CHECK(e2 < 1e-2);
    CHECK(std::log2(e1 / e2) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("superposition in the mismatch") {
    const Problem pb = support::lid(16, 10);
    const Trajectory tr = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
    const Grid& g = pb.cfg.grid;
    const VelocityField m1 = support::random_velocity(g, 1), m2 = support::random_velocity(g, 2);
    const ScalarField q1 = support::random_scalar(g, 3), q2 = support::random_scalar(g, 4);
    const double a = 1.3, b = -0.4;
    VelocityField mc = m1;
    mc *= a;
    mc.axpy(b, m2);
    ScalarField qc = q1;
    qc *= a;
    qc.axpy(b, q2);
    const auto A1 = solve_adjoint(tr, offset_targets(tr, m1, q1), pb.cfg, pb.pot);
    const auto A2 = solve_adjoint(tr, offset_targets(tr, m2, q2), pb.cfg, pb.pot);
    const auto Ac = solve_adjoint(tr, offset_targets(tr, mc, qc), pb.cfg, pb.pot);
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < Ac.size(); ++n) {
        VelocityField dp = A1[n].p;
        dp *= a;
        dp.axpy(b, A2[n].p);
        dp -= Ac[n].p;
        ScalarField dz = A1[n].zeta;
        dz *= a;
        dz.axpy(b, A2[n].zeta);
        dz -= Ac[n].zeta;
        ScalarField dh = A1[n].phat;
        dh *= a;
        dh.axpy(b, A2[n].phat);
        dh -= Ac[n].phat;
        num = std::max(num, std::hypot(norm(dp), norm(dz), norm(dh)));
        den = std::max(den, adjoint_size(Ac[n]));
    }
    CHECK(num / den <= 1e-10);
}

TEST_CASE("adjoint invariants") {
    const Problem pb = support::lid(16, 10);
    const Trajectory tr = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
    const auto adj = solve_adjoint(tr, pb.targets, pb.cfg, pb.pot);
    for (std::size_t n = 0; n < adj.size(); ++n) {
        const auto& s = adj[n];
        CHECK(s.t == doctest::Approx(pb.h.time_nodes[n]));
        for (double v : normal_faces(s.p).values) CHECK(v == 0.0);
        CHECK(std::abs(mean(s.phat)) < 1e-12);
        if (n + 1 < adj.size()) CHECK(max_abs(divergence(s.p)) <= pb.cfg.div_tol);
    }
    CHECK(max_abs(adj.back().phat) == 0.0);
}

TEST_CASE("targets must fit the grid") {
    const Problem pb = support::lid(16, 10);
    const Trajectory tr = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
    CHECK_THROWS_AS(solve_adjoint(tr, Targets::zeros(Grid(8, 8, 1.0, 1.0)), pb.cfg, pb.pot), ShapeMismatch);
    Targets t = Targets::zeros(pb.cfg.grid);
    t.phiQ.resize(3, t.phiQ[0]);
    CHECK_THROWS_AS(solve_adjoint(tr, t, pb.cfg, pb.pot), TimeNodeMismatch);
}

TEST_CASE("multipliers of a zero adjoint vanish") {
    const Grid g(8, 8, 1.0, 1.0);
    const VectorTrace p1 = multiplier_trace(VelocityField(g), ScalarField(g), 1.0);
    for (int f = 0; f < g.boundary_faces(); ++f) {
        CHECK(p1.x[f] == 0.0);
        CHECK(p1.y[f] == 0.0);
    }
}

TEST_CASE("constant pressure multiplier gives -c n") {
    const Grid g(8, 6, 1.0, 2.0);
    const double c = 2.5;
    const VectorTrace p1 = multiplier_trace(VelocityField(g), ScalarField(g, c), 0.7);
    for (int f = 0; f < g.boundary_faces(); ++f) {
        const Face fc = g.face(f);
        CHECK(p1.x[f] == doctest::Approx(-c * fc.nx));
        CHECK(p1.y[f] == doctest::Approx(-c * fc.ny));
    }
}

TEST_CASE("multiplier trace matches an independent assembly") {
    const Grid g(10, 7, 1.0, 0.8);
    const double nu = 0.3;
    const VelocityField p = support::random_velocity(g, 5);
    const ScalarField ph = support::random_scalar(g, 6);
    const VectorTrace p1 = multiplier_trace(p, ph, nu);
    const VectorTrace dn = oracle::wall_derivative(p);
    for (int f = 0; f < g.boundary_faces(); ++f) {
        const Face fc = g.face(f);
        const int i = std::min(g.nx - 1, static_cast<int>(fc.cx / g.hx()));
        const int j = std::min(g.ny - 1, static_cast<int>(fc.cy / g.hy()));
        CHECK(p1.x[f] == doctest::Approx(-ph(i, j) * fc.nx - nu * dn.x[f]).epsilon(1e-10));
        CHECK(p1.y[f] == doctest::Approx(-ph(i, j) * fc.ny - nu * dn.y[f]).epsilon(1e-10));
    }
}

TEST_CASE("boundary multipliers cover every node") {
    const Problem pb = support::lid(16, 10);
    const Trajectory tr = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
    const auto adj = solve_adjoint(tr, pb.targets, pb.cfg, pb.pot);
    const BoundaryMultipliers bm = boundary_multipliers(adj, tr, pb.cfg.nu);
    CHECK(bm.p1.size() == adj.size());
    CHECK(bm.zeta1_flux.size() == adj.size());
    const VectorTrace direct = multiplier_trace(adj[4].p_visc, adj[4].phat, pb.cfg.nu);
    for (int f = 0; f < pb.cfg.grid.boundary_faces(); ++f) CHECK(bm.p1[4].x[f] == direct.x[f]);
}

}  // TEST_SUITE
