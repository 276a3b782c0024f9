#include <fstream>

#include "chns/error.hpp"
#include "chns/io.hpp"
#include "chns/plot.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace chns;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::current_path() / "plot_scratch" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_SUITE("plot") {

TEST_CASE("optimize directory gets a log-scale cost chart") {
    const fs::path dir = scratch("opt");
    write_atomic(dir / "history.csv",
                 "iter,J_total,track_u,track_phi,final_u,final_phi,control,grad_norm,step\n"
                 "0,1,0,0,0,0,0,1,0\n1,0.1,0,0,0,0,0,0.5,1\n2,0.01,0,0,0,0,0,0.1,1\n");
    const auto made = emit_plots(dir);
    REQUIRE(fs::exists(dir / "cost_history.svg"));
    const std::string svg = read_text(dir / "cost_history.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("log scale") != std::string::npos);
    CHECK(made.size() == 1);
}

TEST_CASE("uncontrolled simulation gives a decreasing energy chart and frames") {
    const fs::path dir = scratch("sim");
    ProblemSpec spec = support::resized("spinodal", 16, 20);
    const Problem pb = build_problem(spec, 1);
    const Trajectory tr = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
    const auto d = diagnostics(tr, pb.pot);
    for (std::size_t n = 1; n < d.size(); ++n)
        CHECK(d[n].kinetic + d[n].mixing <= d[n - 1].kinetic + d[n - 1].mixing + 1e-10 * (d[0].kinetic + d[0].mixing));
    write_diagnostics(d, dir / "diagnostics.csv");
    write_trajectory(tr, dir, 10);
    emit_plots(dir);
    CHECK(fs::exists(dir / "energy.svg"));
    CHECK(fs::exists(dir / "frames" / "phi_0000.ppm"));
    CHECK(fs::exists(dir / "frames" / "phi_0020.ppm"));
    const std::string ppm = read_text(dir / "frames" / "phi_0000.ppm");
    CHECK(ppm.rfind("P6\n64 64\n255\n", 0) == 0);
    CHECK(ppm.size() == std::string("P6\n64 64\n255\n").size() + 64 * 64 * 3);
}

TEST_CASE("empty directory") {
    CHECK_THROWS_AS(emit_plots(scratch("empty")), MissingInput);
}

TEST_CASE("chart of constant data still renders") {
    const std::string svg = line_chart_svg("flat", "x", {{"c", {0, 1, 2}, {1, 1, 1}}}, false);
    CHECK(svg.find("polyline") != std::string::npos);
}

}  // TEST_SUITE
