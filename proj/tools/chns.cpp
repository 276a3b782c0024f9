// Command-line front end: simulate, linearize, adjoint, optimize, verify, plot.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "chns/error.hpp"
#include "chns/io.hpp"
#include "chns/plot.hpp"

using namespace chns;

namespace {

constexpr int exit_validation = 2;
constexpr int exit_solver = 3;
constexpr int exit_threshold = 4;

struct Globals {
    std::string config;
    std::string preset;
    std::string out = "run";
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

RunConfig resolve(const Globals& g) {
    RunConfig rc = g.config.empty() ? default_config(g.preset.empty() ? "lid" : g.preset) : load_config(g.config);
    if (!g.config.empty() && !g.preset.empty() && g.preset != rc.spec.preset)
        throw ValidationError({"--preset conflicts with run.preset of the config file"});
    if (g.seed) rc.seed = *g.seed;
    return rc;
}

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void say(const Globals& g, const std::string& s) {
    if (!g.quiet) std::cout << s << "\n";
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int cmd_simulate(const Globals& g) {
    Clock clk;
    const RunConfig rc = resolve(g);
    const Problem pb = make_problem(rc);
    const Trajectory tr = solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot);
    const auto d = diagnostics(tr, pb.pot);
    const fs::path out(g.out);
    write_trajectory(tr, out, rc.output_every);
    write_diagnostics(d, out / "diagnostics.csv");
    const CostBreakdown c = eval_cost(tr, pb.h, pb.targets);
    double div = 0.0;
    for (const auto& x : d) div = std::max(div, x.div_res);
    write_manifest(out, rc, "simulate", clk.seconds(),
                   {{"steps", std::to_string(tr.steps())},
                    {"energy_initial", format_double(d.front().kinetic + d.front().mixing)},
                    {"energy_final", format_double(d.back().kinetic + d.back().mixing)},
                    {"mass_drift", format_double(d.back().mass - d.front().mass)},
                    {"max_div_res", format_double(div)},
                    {"J_total", format_double(c.total)}});
    say(g, "simulated " + std::to_string(tr.steps()) + " steps, energy " +
               fmt("%.6e", d.front().kinetic + d.front().mixing) + " -> " +
               fmt("%.6e", d.back().kinetic + d.back().mixing) + ", J = " + fmt("%.6e", c.total));
    return 0;
}

int cmd_linearize(const Globals& g, const std::string& base, const std::string& direction) {
    Clock clk;
    const RunConfig rc = resolve(g);
    const Problem pb = make_problem(rc);
    const Trajectory tr =
        base.empty() ? solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot) : read_trajectory(base, pb.cfg.grid);
    const BoundaryControl eta = direction.empty()
                                    ? random_direction(pb.cfg.grid, pb.h.time_nodes, pb.set.mode, rc.seed)
                                    : read_control(direction, pb.cfg.grid);
    const auto lin = solve_linearized(tr, eta, pb.cfg, pb.pot);
    const fs::path out(g.out);
    write_control(eta, out / "direction.csv");
    std::string csv = "t,norm_w,norm_psi\n";
    for (std::size_t n = 0; n < lin.size(); ++n) {
        char buf[32];
        if (n % static_cast<std::size_t>(rc.output_every) == 0 || n + 1 == lin.size()) {
            std::snprintf(buf, sizeof buf, "%04zu", n);
            write_snapshot(lin[n].w, lin[n].t, out / "snapshots" / ("w_" + std::string(buf) + ".txt"));
            write_snapshot(lin[n].psi, lin[n].t, out / "snapshots" / ("psi_" + std::string(buf) + ".txt"));
        }
        csv += format_double(lin[n].t) + "," + format_double(norm(lin[n].w)) + "," + format_double(norm(lin[n].psi)) +
               "\n";
    }
    write_atomic(out / "linearized.csv", csv);
    write_manifest(out, rc, "linearize", clk.seconds(),
                   {{"norm_w_final", format_double(norm(lin.back().w))},
                    {"norm_psi_final", format_double(norm(lin.back().psi))}});
    say(g, "linearized along " + std::string(direction.empty() ? "a random direction" : direction) +
               ", |w(T)| = " + fmt("%.6e", norm(lin.back().w)) + ", |psi(T)| = " + fmt("%.6e", norm(lin.back().psi)));
    return 0;
}

int cmd_adjoint(const Globals& g, const std::string& base, const std::string& targets) {
    Clock clk;
    RunConfig rc = resolve(g);
    if (!targets.empty()) load_targets(rc, targets);
    const Problem pb = make_problem(rc);
    const Trajectory tr =
        base.empty() ? solve_forward(pb.u0, pb.phi0, pb.h, pb.cfg, pb.pot) : read_trajectory(base, pb.cfg.grid);
    const auto adj = solve_adjoint(tr, pb.targets, pb.cfg, pb.pot);
    const BoundaryMultipliers bm = boundary_multipliers(adj, tr, pb.cfg.nu);
    const GradientField gr = reduced_gradient(tr.control, adj, pb.cfg.nu);
    const fs::path out(g.out);
    for (std::size_t n = 0; n < adj.size(); ++n) {
        if (n % static_cast<std::size_t>(rc.output_every) != 0 && n + 1 != adj.size()) continue;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%04zu", n);
        write_snapshot(adj[n].p, adj[n].t, out / "snapshots" / ("p_" + std::string(buf) + ".txt"));
        write_snapshot(adj[n].zeta, adj[n].t, out / "snapshots" / ("zeta_" + std::string(buf) + ".txt"));
        write_snapshot(adj[n].phat, adj[n].t, out / "snapshots" / ("phat_" + std::string(buf) + ".txt"));
    }
    write_multipliers(bm, tr.control.time_nodes, out / "multipliers.csv");
    write_control(gr, out / "gradient.csv");
    write_manifest(out, rc, "adjoint", clk.seconds(),
                   {{"gradient_norm", format_double(norm(gr))}, {"base", base.empty() ? "recomputed" : base}});
    say(g, "adjoint solved over " + std::to_string(adj.size() - 1) + " steps, |g| = " + fmt("%.6e", norm(gr)));
    return 0;
}

int cmd_optimize(const Globals& g, const std::string& targets) {
    Clock clk;
    RunConfig rc = resolve(g);
    if (!targets.empty()) load_targets(rc, targets);
    const Problem pb = make_problem(rc);
    const OptimizationResult r = optimize(pb.u0, pb.phi0, pb.h, pb.targets, pb.set, pb.opt, pb.cfg, pb.pot);
    const fs::path out(g.out);
    write_history(r, out / "history.csv");
    write_control(r.h_final, out / "control_final.csv");
    write_trajectory(r.trajectory, out, rc.output_every);
    write_diagnostics(diagnostics(r.trajectory, pb.pot), out / "diagnostics.csv");
    const double j0 = r.cost_history.front().total, j1 = r.cost_history.back().total;
    write_manifest(out, rc, "optimize", clk.seconds(),
                   {{"iterations", std::to_string(r.iterations)},
                    {"termination", to_string(r.termination)},
                    {"J_initial", format_double(j0)},
                    {"J_final", format_double(j1)},
                    {"norm_h_final", format_double(norm(r.h_final))},
                    {"grad_residual_final", format_double(r.grad_norm_history.back())}});
    say(g, "optimize: " + std::to_string(r.iterations) + " iterations (" + to_string(r.termination) + "), J " +
               fmt("%.6e", j0) + " -> " + fmt("%.6e", j1));
    return r.termination == Termination::line_search_failure ? exit_solver : 0;
}

int cmd_verify(const Globals& g, const std::string& which) {
    Clock clk;
    const RunConfig rc = resolve(g);
    const Problem pb = make_problem(rc);
    const VerifyConfig& v = rc.verify;
    const fs::path out(g.out);
    bool pass = false;
    std::map<std::string, std::string> metrics;
    if (which == "taylor") {
        const BoundaryControl eta = random_direction(pb.cfg.grid, pb.h.time_nodes, pb.set.mode, rc.seed);
        const TaylorReport r = taylor_test(pb, eta, v.eps);
        write_taylor(r, out / "taylor.csv");
        if (!g.quiet) {
            std::printf("%-10s %-14s\n", "eps", "remainder");
            for (std::size_t k = 0; k < r.eps_list.size(); ++k)
                std::printf("%-10.3g %-14.6e\n", r.eps_list[k], r.remainder_norms[k]);
            std::printf("fitted order %.4f%s\n", r.fitted_order, r.degenerate ? " (degenerate)" : "");
        }
        pass = !r.degenerate && r.fitted_order >= v.order_min && r.fitted_order <= v.order_max;
        metrics["fitted_order"] = format_double(r.fitted_order);
    } else if (which == "gradcheck") {
        const GradCheckReport r = gradcheck(pb, v.directions, rc.seed, v.fd_eps);
        write_gradcheck(r, out / "gradcheck.csv");
        if (!g.quiet) {
            std::printf("%-10s %-18s %-18s %-10s\n", "eps", "fd", "adjoint", "rel_error");
            for (const auto& row : r.rows)
                std::printf("%-10.3g %-18.10e %-18.10e %-10.3e\n", r.eps, row.fd, row.adjoint, row.rel_error);
            std::printf("worst relative error %.3e\n", r.worst_error);
        }
        pass = r.worst_error <= v.gradcheck_tol;
        metrics["worst_error"] = format_double(r.worst_error);
    } else {
        const BoundaryControl eta = random_direction(pb.cfg.grid, pb.h.time_nodes, pb.set.mode, rc.seed);
        const DualityReport r = adjoint_identity_test(pb, eta);
        write_atomic(out / "duality.csv", "lhs,rhs,defect\n" + format_double(r.lhs) + "," + format_double(r.rhs) + "," +
                                              format_double(r.defect) + "\n");
        if (!g.quiet) std::printf("lhs %.12e rhs %.12e defect %.3e\n", r.lhs, r.rhs, r.defect);
        pass = r.defect <= v.duality_tol;
        metrics["defect"] = format_double(r.defect);
    }
    metrics["pass"] = pass ? "true" : "false";
    write_manifest(out, rc, "verify " + which, clk.seconds(), metrics);
    say(g, std::string(pass ? "PASS" : "FAIL") + " verify " + which);
    return pass ? 0 : exit_threshold;
}

int cmd_plot(const Globals& g, const std::string& dir) {
    const auto made = emit_plots(dir.empty() ? fs::path(g.out) : fs::path(dir));
    for (const auto& p : made) say(g, "wrote " + p.string());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary control of the Cahn-Hilliard-Navier-Stokes system"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "run configuration file");
    app.add_option("--preset", g.preset, "preset used when no config is given (rest, spinodal, lid, inverse_crime)");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--seed", g.seed, "seed for random directions and noise");
    app.add_flag("--quiet", g.quiet, "suppress console output");

    auto* sim = app.add_subcommand("simulate", "forward solve, diagnostics and snapshots");
    std::string direction, base, targets;
    auto* lin = app.add_subcommand("linearize", "linearized solve along a direction");
    lin->add_option("--base", base, "trajectory directory written by simulate (default: solve it)");
    lin->add_option("--eta", direction, "control CSV of the direction (default: random smooth direction)");
    auto* adj = app.add_subcommand("adjoint", "adjoint sweep, boundary multipliers and gradient");
    adj->add_option("--base", base, "trajectory directory written by simulate");
    adj->add_option("--targets", targets, "file with a [targets] section");
    auto* opt = app.add_subcommand("optimize", "projected-gradient optimization");
    opt->add_option("--targets", targets, "file with a [targets] section");
    auto* ver = app.add_subcommand("verify", "Taylor, gradient and duality checks");
    std::string which;
    ver->add_option("check", which, "taylor, gradcheck or duality")
        ->required()
        ->check(CLI::IsMember({"taylor", "gradcheck", "duality"}));
    std::string plot_dir;
    auto* plot = app.add_subcommand("plot", "render charts and phase-field frames of a run directory");
    plot->add_option("--dir", plot_dir, "run directory (default: --out)");

    // global flags are accepted after the subcommand as well
    for (auto* sub : {sim, lin, adj, opt, ver, plot}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }

    try {
        if (*sim) return cmd_simulate(g);
        if (*lin) return cmd_linearize(g, base, direction);
        if (*adj) return cmd_adjoint(g, base, targets);
        if (*opt) return cmd_optimize(g, targets);
        if (*ver) return cmd_verify(g, which);
        if (*plot) return cmd_plot(g, plot_dir);
    } catch (const ParseError& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return exit_validation;
    } catch (const ValidationError& e) {
        std::cerr << "invalid configuration:\n";
        for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
        return exit_validation;
    } catch (const LinearSolveFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return exit_solver;
    } catch (const StabilityBreach& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return exit_solver;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_solver;
    }
    return 0;
}
