#include <cmath>
#include <fstream>

#include "chns/error.hpp"
#include "chns/io.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace chns;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::current_path() / "io_scratch" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("minimal file takes the documented defaults") {
    const RunConfig rc = parse_config("[run]\npreset = lid\n");
    CHECK(rc.spec.cfg.div_tol == 1e-10);
    CHECK(rc.spec.cfg.lin_tol == 1e-10);
    CHECK(rc.spec.cfg.grid.nx == 32);
    CHECK(rc.spec.cfg.steps() == 40);
    CHECK(rc.spec.opt.max_iters == 50);
    CHECK(std::isinf(rc.spec.L));
    CHECK(rc.verify.directions == 5);
}

TEST_CASE("dt must divide T") {
    CHECK_THROWS_WITH_AS(parse_config("[time]\nT = 1.0\ndt = 0.3\n"), doctest::Contains("dt must divide T"),
                         ValidationError);
}

TEST_CASE("every violation is reported at once") {
    try {
        parse_config("[grid]\nnx = 2\n[physics]\nnu = abc\nbogus = 1\n[optimizer]\nbeta = 2\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.violations().size() >= 4);
        const std::string all = e.what();
        CHECK(all.find("physics.nu") != std::string::npos);
        CHECK(all.find("physics.bogus") != std::string::npos);
        CHECK(all.find("nx") != std::string::npos);
        CHECK(all.find("beta") != std::string::npos);
    }
}

TEST_CASE("malformed lines carry their line number") {
    try {
        parse_config("[grid]\nnx = 8\nthis line has no equals\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_config("[grid\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[grid]\nnx = 8\nnx = 16\n"), ParseError);
}

TEST_CASE("comments and overrides") {
    const RunConfig rc = parse_config(
        "# comment\n[run]\npreset = inverse_crime\nseed = 4\n[grid]\nnx = 16 ; trailing\nny = 16\n[time]\nT = 1\ndt = 0.05\n"
        "[control]\nmode = free\nL = 2.5\n");
    CHECK(rc.spec.preset == "inverse_crime");
    CHECK(rc.seed == 4);
    CHECK(rc.spec.cfg.grid.nx == 16);
    CHECK(rc.spec.cfg.steps() == 20);
    CHECK(rc.spec.mode == ControlMode::free_with_zero_flux);
    CHECK(rc.spec.L == 2.5);
}

TEST_CASE("unknown preset") {
    CHECK_THROWS_AS(parse_config("[run]\npreset = nope\n"), ValidationError);
}

TEST_CASE("control file incompatible with the initial velocity") {
    const fs::path dir = scratch("compat");
    RunConfig rc = default_config("lid");
    const Problem pb = make_problem(rc);
    BoundaryControl h = pb.h;
    h.tangential[0][3] = 1e-6;
    write_control(h, dir / "control.csv");
    CHECK_THROWS_AS(parse_config("[run]\npreset = lid\n[control]\nfile = control.csv\n", dir), CompatibilityViolation);
    write_control(pb.h, dir / "control.csv");
    CHECK_NOTHROW(parse_config("[run]\npreset = lid\n[control]\nfile = control.csv\n", dir));
}

TEST_CASE("missing referenced file") {
    CHECK_THROWS_WITH_AS(parse_config("[initial]\nphi0 = nowhere.txt\n", scratch("missing")),
                         doctest::Contains("file not found"), ValidationError);
    CHECK_THROWS_AS(load_config(scratch("missing") / "absent.ini"), ValidationError);
}

TEST_CASE("digest is reproducible and sensitive") {
    const RunConfig a = parse_config("[run]\npreset = lid\nseed = 1\n");
    const RunConfig b = parse_config("[run]\nseed = 1\npreset = lid\n");
    const RunConfig c = parse_config("[run]\npreset = lid\nseed = 2\n");
    CHECK(a.digest() == b.digest());
    CHECK(a.digest() != c.digest());
    CHECK(a.digest().size() == 16);
}

TEST_CASE("snapshot round trip is exact") {
    const fs::path dir = scratch("snap");
    const Grid g(7, 5, 1.3, 0.9);
    const ScalarField f = support::random_scalar(g, 1);
    VelocityField u = support::random_velocity(g, 2);
    u.ux(0, 2) = 0.123456789012345678;
    write_snapshot(f, 0.25, dir / "f.txt");
    write_snapshot(u, 0.5, dir / "u.txt");
    double t = 0.0;
    const ScalarField f2 = read_scalar_snapshot(dir / "f.txt", &t);
    CHECK(t == 0.25);
    ScalarField df = f2;
    df -= f;
    CHECK(max_abs(df) == 0.0);
    VelocityField du = read_velocity_snapshot(dir / "u.txt", &t);
    CHECK(t == 0.5);
    du -= u;
    CHECK(max_abs(du) == 0.0);
}

TEST_CASE("truncated snapshot names the expected count") {
    const fs::path dir = scratch("trunc");
    const Grid g(4, 4, 1.0, 1.0);
    write_snapshot(ScalarField(g, 1.0), 0.0, dir / "f.txt");
    std::string text = read_text(dir / "f.txt");
    text.resize(text.size() - 10);
    write_atomic(dir / "f.txt", text);
    CHECK_THROWS_WITH_AS(read_scalar_snapshot(dir / "f.txt"), doctest::Contains("expected 16"), FormatError);
    CHECK_THROWS_AS(read_scalar_snapshot(dir / "absent.txt"), MissingInput);
}

TEST_CASE("control round trip") {
    const fs::path dir = scratch("control");
    const Problem pb = support::lid(8, 4);
    write_control(pb.h, dir / "h.csv");
    BoundaryControl h = read_control(dir / "h.csv", pb.cfg.grid);
    CHECK(h.time_nodes == pb.h.time_nodes);
    h -= pb.h;
    CHECK(max_abs(h) == 0.0);
    write_atomic(dir / "bad.csv", "t,face,tangential,normal\n0,0,1\n");
    CHECK_THROWS_AS(read_control(dir / "bad.csv", pb.cfg.grid), FormatError);
}

TEST_CASE("trajectory reloaded from disk gives identical diagnostics") {
    const fs::path dir = scratch("traj");
    const Problem pb = support::lid(8, 6);
    const Trajectory tr = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
    write_trajectory(tr, dir);
    const Trajectory back = read_trajectory(dir, pb.cfg.grid);
    const auto a = diagnostics(tr, pb.pot), b = diagnostics(back, pb.pot);
    REQUIRE(a.size() == b.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
        CHECK(a[n].t == b[n].t);
        CHECK(a[n].mass == b[n].mass);
        CHECK(a[n].kinetic == b[n].kinetic);
        CHECK(a[n].mixing == b[n].mixing);
    }
    const auto adj1 = solve_adjoint(tr, pb.targets, pb.cfg, pb.pot);
    const auto adj2 = solve_adjoint(back, pb.targets, pb.cfg, pb.pot);
    ScalarField dz = adj1[0].zeta;
    dz -= adj2[0].zeta;
    CHECK(max_abs(dz) == 0.0);
}

TEST_CASE("targets file accepts only targets keys") {
    const fs::path dir = scratch("targets");
    const Grid g(32, 32, 1.0, 1.0);
    write_snapshot(ScalarField(g, 0.5), 0.0, dir / "phiq.txt");
    write_atomic(dir / "t.ini", "[targets]\nphiq = phiq.txt\n");
    RunConfig rc = default_config("lid");
    load_targets(rc, dir / "t.ini");
    REQUIRE(rc.phiq_file);
    const Problem pb = make_problem(rc);
    CHECK(pb.targets.phiQ[0](3, 3) == 0.5);
    write_atomic(dir / "bad.ini", "[grid]\nnx = 8\n");
    CHECK_THROWS_AS(load_targets(rc, dir / "bad.ini"), ValidationError);
}

TEST_CASE("manifest records digest and metrics") {
    const fs::path dir = scratch("manifest");
    const RunConfig rc = default_config("rest");
    write_manifest(dir, rc, "simulate", 1.5, {{"energy_final", "0"}});
    const std::string m = read_text(dir / "manifest.txt");
    CHECK(m.find("config_digest = " + rc.digest()) != std::string::npos);
    CHECK(m.find("subcommand = simulate") != std::string::npos);
    CHECK(m.find("energy_final = 0") != std::string::npos);
}

TEST_CASE("doubles print with 17 significant digits") {
    CHECK(std::stod(format_double(0.1)) == 0.1);
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

}  // TEST_SUITE
