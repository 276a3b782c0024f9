#include "chns/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "chns/error.hpp"

namespace chns {

namespace {

constexpr double pi = std::numbers::pi;

void set_time(SimConfig& c, double T, int steps) {
    c.T = T;
    c.dt = T / steps;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"rest", "spinodal", "lid", "inverse_crime"};
    return names;
}

ProblemSpec preset_spec(const std::string& name) {
    ProblemSpec s;
    s.preset = name;
    if (name == "rest") {
        s.cfg.grid = Grid(16, 16, 1.0, 1.0);
        set_time(s.cfg, 0.2, 200);
    } else if (name == "spinodal") {
        // 2 pi box: the lowest Neumann modes lie inside the unstable band 0 < lambda < 4
        s.cfg.grid = Grid(32, 32, 2.0 * pi, 2.0 * pi);
        set_time(s.cfg, 2.0, 200);
    } else if (name == "lid") {
        s.cfg.grid = Grid(32, 32, 1.0, 1.0);
        set_time(s.cfg, 0.1, 40);
    } else if (name == "inverse_crime") {
        s.cfg.grid = Grid(32, 32, 100.0, 100.0);
        s.cfg.nu = 1e5;
        set_time(s.cfg, 1.0, 40);
        s.amplitude = 0.01;
    } else {
        throw ValidationError({"unknown preset '" + name + "'"});
    }
    return s;
}

BoundaryControl inverse_crime_source(const ProblemSpec& spec) {
    const Grid& g = spec.cfg.grid;
    const int steps = spec.cfg.steps();
    BoundaryControl h = BoundaryControl::zeros(g, spec.cfg.dt, steps);
    // all four walls rotate counterclockwise, ramped up from rest
    for (int n = 0; n <= steps; ++n) {
        const double a = spec.amplitude * std::sin(0.5 * pi * h.time_nodes[static_cast<std::size_t>(n)] / spec.cfg.T);
        for (int f = 0; f < g.boundary_faces(); ++f) h.tangential[static_cast<std::size_t>(n)][f] = a * 0.5 * g.lx;
    }
    return h;
}

Problem build_problem(const ProblemSpec& spec, std::uint64_t seed) {
    if (auto v = spec.cfg.violations(); !v.empty()) throw ValidationError(std::move(v));
    Problem pb;
    pb.cfg = spec.cfg;
    pb.pot = spec.pot;
    pb.set.L = spec.L;
    pb.set.mode = spec.mode;
    pb.set.hmax = spec.hmax;
    pb.opt = spec.opt;

    const Grid& g = spec.cfg.grid;
    const int steps = spec.cfg.steps();
    const double lx = g.lx, ly = g.ly;
    pb.u0 = VelocityField(g);
    pb.phi0 = ScalarField(g);
    pb.h = BoundaryControl::zeros(g, spec.cfg.dt, steps);
    pb.targets = Targets::zeros(g);

    if (spec.preset == "rest") {
    } else if (spec.preset == "spinodal") {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> noise(-0.05, 0.05);
        for (double& v : pb.phi0.values()) v = noise(rng);
    } else if (spec.preset == "lid") {
        pb.phi0 = ScalarField::sample(
            g, [&](double x, double y) { return 0.6 * std::cos(pi * x / lx) * std::cos(pi * y / ly) + 0.2; });
        for (int n = 0; n <= steps; ++n) {
            const double a = spec.amplitude * std::sin(0.5 * pi * pb.h.time_nodes[static_cast<std::size_t>(n)] / spec.cfg.T);
            // the top tangent points in -x, so a positive lid speed is a negative tangential value
            for (int i = 0; i < g.nx; ++i) {
                const double x = g.xc(i);
                pb.h.tangential[static_cast<std::size_t>(n)][g.face_id(Edge::top, i)] = -8.0 * a * x * (lx - x) / (lx * lx);
            }
        }
        pb.targets.uQ[0] = VelocityField::sample(
            g, [&](double, double y) { return 0.3 * std::sin(pi * y / ly); }, [](double, double) { return 0.0; });
        pb.targets.phiQ[0] = ScalarField::sample(g, [&](double x, double) { return std::cos(pi * x / lx); });
        pb.targets.uOmega = pb.targets.uQ[0];
        pb.targets.phiOmega = ScalarField(g, 0.1);
    } else if (spec.preset == "inverse_crime") {
        pb.phi0 = ScalarField::sample(
            g, [&](double x, double y) { return 0.5 * std::cos(pi * x / lx) * std::cos(pi * y / ly); });
    } else {
        throw ValidationError({"unknown preset '" + spec.preset + "'"});
    }
    if (spec.phi0_constant) pb.phi0 = ScalarField(g, *spec.phi0_constant);
    if (spec.preset == "inverse_crime")
        pb.targets = Targets::from_trajectory(solve_forward(pb.u0, pb.phi0, inverse_crime_source(spec), spec.cfg, pb.pot));
    return pb;
}

}  // namespace chns
