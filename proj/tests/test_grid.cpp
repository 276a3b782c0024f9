#include <cmath>
#include <numbers>
#include <random>

#include "chns/error.hpp"
#include "chns/grid.hpp"
#include "chns/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chns;
using std::numbers::pi;

namespace {

ScalarField random_scalar(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    ScalarField f(g);
    for (double& v : f.values()) v = U(rng);
    return f;
}

VelocityField random_velocity(const Grid& g, std::uint64_t seed, bool zero_walls) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    VelocityField u(g);
    for (double& v : u.ux_values()) v = U(rng);
    for (double& v : u.uy_values()) v = U(rng);
    if (zero_walls) u.zero_boundary_faces();
    return u;
}

double order(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("boundary faces run counterclockwise with outward normals") {
    const Grid g(4, 6, 2.0, 3.0);
    CHECK(g.boundary_faces() == 20);
    const Face b0 = g.face(0);
    CHECK(b0.edge == Edge::bottom);
    CHECK(b0.cx == doctest::Approx(0.25));
    CHECK(b0.ny == -1.0);
    const Face r0 = g.face(4);
    CHECK(r0.edge == Edge::right);
    CHECK(r0.cy == doctest::Approx(0.25));
    const Face t0 = g.face(10);
    CHECK(t0.edge == Edge::top);
    CHECK(t0.cx == doctest::Approx(1.75));
    CHECK(t0.tx == -1.0);
    const Face l0 = g.face(14);
    CHECK(l0.edge == Edge::left);
    CHECK(l0.cy == doctest::Approx(2.75));
    CHECK(l0.ty == -1.0);
    for (int f = 0; f < g.boundary_faces(); ++f) {
        const Face fc = g.face(f);
        CHECK(g.face_id(fc.edge, fc.k) == f);
        CHECK(fc.tx == -fc.ny);
        CHECK(fc.ty == fc.nx);
    }
}

TEST_CASE("grid rejects degenerate sizes") {
    CHECK_THROWS_AS(Grid(2, 8, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(Grid(8, 8, 0.0, 1.0), ValidationError);
}

TEST_CASE("Neumann Laplacian of a constant vanishes") {
    const Grid g(8, 5, 1.0, 2.0);
    CHECK(max_abs(laplacian_neumann(ScalarField(g, 3.7))) < 1e-12);
}

TEST_CASE("Neumann Laplacian spike response is the stencil") {
    const Grid g(8, 8, 1.0, 2.0);
    ScalarField f(g);
    f(3, 4) = 1.0;
    const ScalarField L = laplacian_neumann(f);
    const double ax = 1.0 / (g.hx() * g.hx()), ay = 1.0 / (g.hy() * g.hy());
    CHECK(L(3, 4) == doctest::Approx(-2 * ax - 2 * ay));
    CHECK(L(2, 4) == doctest::Approx(ax));
    CHECK(L(4, 4) == doctest::Approx(ax));
    CHECK(L(3, 3) == doctest::Approx(ay));
    CHECK(L(3, 5) == doctest::Approx(ay));
    CHECK(L(0, 0) == 0.0);
}

TEST_CASE("Neumann Laplacian sums to zero") {
    const Grid g(9, 7, 1.3, 0.8);
    for (std::uint64_t s = 1; s <= 5; ++s) {
        const ScalarField L = laplacian_neumann(random_scalar(g, s));
        double sum = 0.0;
        for (double v : L.values()) sum += v;
        CHECK(std::abs(sum) < 1e-9 * max_abs(L));
    }
}

TEST_CASE("Neumann Laplacian of cos converges at second order") {
    std::vector<double> err;
    for (int n : {16, 32, 64}) {
        const Grid g(n, n, 2.0, 1.0);
        const ScalarField f = ScalarField::sample(g, [](double x, double) { return std::cos(pi * x / 2.0); });
        const ScalarField L = laplacian_neumann(f);
        double e = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                e = std::max(e, std::abs(L(i, j) + (pi / 2) * (pi / 2) * std::cos(pi * g.xc(i) / 2.0)));
        err.push_back(e);
    }
    CHECK(order(err[0], err[1]) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(order(err[1], err[2]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("divergence of constant and linear fields is exact") {
    const Grid g(7, 9, 1.0, 1.5);
    const VelocityField c = VelocityField::sample(g, [](double, double) { return 0.3; }, [](double, double) { return -1.2; });
    CHECK(max_abs(divergence(c)) < 1e-12);
    const VelocityField l = VelocityField::sample(g, [](double x, double) { return x; }, [](double, double y) { return -y; });
    CHECK(max_abs(divergence(l)) < 1e-12);
}

TEST_CASE("divergence of sin converges at second order") {
    std::vector<double> err;
    for (int n : {16, 32, 64}) {
        const Grid g(n, n, 1.0, 1.0);
        const VelocityField u =
            VelocityField::sample(g, [](double x, double) { return std::sin(pi * x); }, [](double, double) { return 0.0; });
        const ScalarField d = divergence(u);
        double e = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) e = std::max(e, std::abs(d(i, j) - pi * std::cos(pi * g.xc(i))));
        err.push_back(e);
    }
    CHECK(order(err[0], err[1]) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(order(err[1], err[2]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("gradient of constant is zero, gradient of x is one") {
    const Grid g(6, 5, 1.2, 1.0);
    CHECK(max_abs(gradient_to_faces(ScalarField(g, -2.0))) < 1e-12);
    const VelocityField gx = gradient_to_faces(ScalarField::sample(g, [](double x, double) { return x; }));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) CHECK(gx.ux(i, j) == doctest::Approx(1.0));
    for (double v : gx.uy_values()) CHECK(std::abs(v) < 1e-12);
    CHECK(gx.ux(0, 2) == 0.0);
    CHECK(gx.ux(g.nx, 2) == 0.0);
}

TEST_CASE("gradient is the negative adjoint of divergence on wall-free fields") {
    const Grid g(8, 6, 1.0, 0.7);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const ScalarField f = random_scalar(g, 100 + s);
        const VelocityField u = random_velocity(g, 200 + s, true);
        const double lhs = dot(gradient_to_faces(f), u);
        const double rhs = -dot(f, divergence(u));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("stencils are linear") {
    const Grid g(6, 6, 1.0, 1.0);
    const ScalarField a = random_scalar(g, 1), b = random_scalar(g, 2);
    ScalarField c = a;
    c *= 2.5;
    c.axpy(-0.75, b);
    ScalarField expect = laplacian_neumann(a);
    expect *= 2.5;
    expect.axpy(-0.75, laplacian_neumann(b));
    ScalarField diff = laplacian_neumann(c);
    diff -= expect;
    CHECK(max_abs(diff) < 1e-10 * max_abs(expect));
}

TEST_CASE("normal derivative trace") {
    const Grid g(8, 8, 1.0, 1.0);
    const BoundaryTrace zero = normal_derivative_trace(ScalarField(g, 5.0));
    for (double v : zero.values) CHECK(std::abs(v) < 1e-10);

    const BoundaryTrace ty = normal_derivative_trace(ScalarField::sample(g, [](double, double y) { return y; }));
    for (int k = 0; k < g.nx; ++k) {
        CHECK(ty[g.face_id(Edge::bottom, k)] == doctest::Approx(-1.0));
        CHECK(ty[g.face_id(Edge::top, k)] == doctest::Approx(1.0));
    }
    for (int k = 0; k < g.ny; ++k) CHECK(std::abs(ty[g.face_id(Edge::left, k)]) < 1e-10);

    // d(y^2)/dn = 0 at the bottom wall: the three-point one-sided formula is
    // exact for quadratics, and for y^3 its error falls at second order
    const BoundaryTrace tq = normal_derivative_trace(ScalarField::sample(g, [](double, double y) { return y * y; }));
    for (int k = 0; k < g.nx; ++k) CHECK(std::abs(tq[g.face_id(Edge::bottom, k)]) < 1e-10);
    std::vector<double> err;
    for (int n : {8, 16, 32}) {
        const Grid gn(n, n, 1.0, 1.0);
        const BoundaryTrace t = normal_derivative_trace(ScalarField::sample(gn, [](double, double y) { return y * y * y; }));
        double e = 0.0;
        for (int k = 0; k < n; ++k) e = std::max(e, std::abs(t[gn.face_id(Edge::bottom, k)]));
        err.push_back(e);
    }
    CHECK(order(err[0], err[1]) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(order(err[1], err[2]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("wall derivative trace matches the position-based oracle") {
    const Grid g(6, 9, 1.5, 1.0);
    for (std::uint64_t s = 0; s < 3; ++s) {
        const VelocityField u = random_velocity(g, 300 + s, true);
        const VectorTrace a = wall_derivative_trace(u);
        const VectorTrace b = oracle::wall_derivative(u);
        for (int f = 0; f < g.boundary_faces(); ++f) {
            CHECK(a.x[f] == doctest::Approx(b.x[f]).epsilon(1e-12));
            CHECK(a.y[f] == doctest::Approx(b.y[f]).epsilon(1e-12));
        }
    }
}

TEST_CASE("adjacent cell trace picks the wall cell") {
    const Grid g(5, 4, 1.0, 1.0);
    const ScalarField f = ScalarField::sample(g, [](double x, double y) { return 10 * x + y; });
    const BoundaryTrace t = adjacent_cell_trace(f);
    for (int f_id = 0; f_id < g.boundary_faces(); ++f_id) {
        const Face fc = g.face(f_id);
        const int i = fc.edge == Edge::left ? 0 : fc.edge == Edge::right ? g.nx - 1 : fc.k;
        const int j = fc.edge == Edge::bottom ? 0 : fc.edge == Edge::top ? g.ny - 1 : fc.k;
        CHECK(t[f_id] == f(i, j));
    }
}

TEST_CASE("boundary inner product weighs face lengths") {
    const Grid g(4, 8, 2.0, 1.0);
    const BoundaryTrace one(g, 1.0);
    CHECK(dot(one, one) == doctest::Approx(2 * (g.lx + g.ly)));
}

TEST_CASE("spectral bases diagonalize the second-difference matrices") {
    for (Closure c : {Closure::neumann, Closure::dirichlet_node, Closure::dirichlet_ghost}) {
        const AxisBasis b = make_axis_basis(11, 0.1, c);
        const Eigen::MatrixXd M = second_difference_matrix(11, 0.1, c);
        const Eigen::MatrixXd R = b.q * b.lambda.asDiagonal() * b.q.transpose() - M;
        CHECK(R.cwiseAbs().maxCoeff() < 1e-9 * M.cwiseAbs().maxCoeff());
        const Eigen::MatrixXd I = b.q.transpose() * b.q - Eigen::MatrixXd::Identity(b.q.cols(), b.q.cols());
        CHECK(I.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Neumann eigenvalue closed form matches the dense spectrum") {
    const AxisBasis b = make_axis_basis(16, 1.0 / 16, Closure::neumann);
    std::vector<double> lam(b.lambda.data(), b.lambda.data() + 16);
    std::sort(lam.begin(), lam.end(), std::greater<>());
    CHECK(-lam[1] == doctest::Approx(oracle::neumann_eigenvalue(16, 1.0 / 16, 1)));
}

}  // TEST_SUITE
