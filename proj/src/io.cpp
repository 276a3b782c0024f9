#include "chns/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "chns/error.hpp"

#ifndef CHNS_VERSION
#define CHNS_VERSION "0.0.0"
#endif

namespace chns {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_double(const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<long long> to_int(const std::string& s) {
    long long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<bool> to_bool(const std::string& s) {
    if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "off" || s == "no" || s == "0") return false;
    return std::nullopt;
}

std::string mode_name(ControlMode m) { return m == ControlMode::tangential_only ? "tangential" : "free"; }

struct Entry {
    std::string value;
    int line;
};

std::map<std::string, Entry> parse_lines(const std::string& text) {
    std::map<std::string, Entry> out;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (const auto c = s.find_first_of("#;"); c != std::string::npos) s.erase(c);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3) throw ParseError(line, "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw ParseError(line, "empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (out.count(full)) throw ParseError(line, "duplicate key '" + full + "'");
        out[full] = {trim(s.substr(eq + 1)), line};
    }
    return out;
}

std::map<std::string, std::string> settings(const RunConfig& rc) {
    const ProblemSpec& s = rc.spec;
    std::map<std::string, std::string> m;
    auto d = [](double v) { return format_double(v); };
    m["run.preset"] = s.preset;
    m["run.seed"] = std::to_string(rc.seed);
    m["grid.nx"] = std::to_string(s.cfg.grid.nx);
    m["grid.ny"] = std::to_string(s.cfg.grid.ny);
    m["grid.lx"] = d(s.cfg.grid.lx);
    m["grid.ly"] = d(s.cfg.grid.ly);
    m["physics.nu"] = d(s.cfg.nu);
    m["physics.stabilization"] = d(s.pot.stabilization);
    m["physics.potential"] = s.pot.enabled ? "true" : "false";
    m["physics.convection"] = s.cfg.convection ? "true" : "false";
    m["time.T"] = d(s.cfg.T);
    m["time.dt"] = d(s.cfg.dt);
    m["solver.div_tol"] = d(s.cfg.div_tol);
    m["solver.lin_tol"] = d(s.cfg.lin_tol);
    m["solver.blowup"] = d(s.cfg.blowup);
    m["control.mode"] = mode_name(s.mode);
    m["control.L"] = d(s.L);
    m["control.hmax"] = s.hmax ? d(*s.hmax) : "none";
    m["control.amplitude"] = d(s.amplitude);
    m["control.file"] = rc.control_file ? rc.control_file->string() : "none";
    m["initial.phi0_constant"] = s.phi0_constant ? d(*s.phi0_constant) : "none";
    m["initial.u0"] = rc.u0_file ? rc.u0_file->string() : "none";
    m["initial.phi0"] = rc.phi0_file ? rc.phi0_file->string() : "none";
    m["targets.uq"] = rc.uq_file ? rc.uq_file->string() : "none";
    m["targets.phiq"] = rc.phiq_file ? rc.phiq_file->string() : "none";
    m["targets.uomega"] = rc.uomega_file ? rc.uomega_file->string() : "none";
    m["targets.phiomega"] = rc.phiomega_file ? rc.phiomega_file->string() : "none";
    m["optimizer.max_iters"] = std::to_string(s.opt.max_iters);
    m["optimizer.c1"] = d(s.opt.c1);
    m["optimizer.beta"] = d(s.opt.beta);
    m["optimizer.step0"] = d(s.opt.step0);
    m["optimizer.grad_tol"] = d(s.opt.grad_tol);
    m["optimizer.cost_tol"] = d(s.opt.cost_tol);
    m["optimizer.max_backtracks"] = std::to_string(s.opt.max_backtracks);
    m["verify.directions"] = std::to_string(rc.verify.directions);
    std::string eps;
    for (double e : rc.verify.eps) eps += (eps.empty() ? "" : ",") + d(e);
    m["verify.eps"] = eps;
    m["verify.fd_eps"] = d(rc.verify.fd_eps);
    m["verify.gradcheck_tol"] = d(rc.verify.gradcheck_tol);
    m["verify.duality_tol"] = d(rc.verify.duality_tol);
    m["verify.order_min"] = d(rc.verify.order_min);
    m["verify.order_max"] = d(rc.verify.order_max);
    m["output.every"] = std::to_string(rc.output_every);
    return m;
}

}  // namespace

std::string RunConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : settings(*this)) out += k + " = " + v + "\n";
    return out;
}

std::string RunConfig::digest() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig default_config(const std::string& preset) {
    RunConfig rc;
    rc.spec = preset_spec(preset);
    return rc;
}

RunConfig parse_config(const std::string& text, const fs::path& base) {
    const auto entries = parse_lines(text);
    std::vector<std::string> bad;

    std::string preset = "lid";
    if (auto it = entries.find("run.preset"); it != entries.end()) preset = it->second.value;
    else if (auto it2 = entries.find("preset"); it2 != entries.end()) preset = it2->second.value;
    RunConfig rc;
    try {
        rc.spec = preset_spec(preset);
    } catch (const ValidationError&) {
        throw ValidationError({"run.preset: unknown preset '" + preset + "'"});
    }
    ProblemSpec& s = rc.spec;
    int nx = s.cfg.grid.nx, ny = s.cfg.grid.ny;
    double lx = s.cfg.grid.lx, ly = s.cfg.grid.ly;

    auto real = [&](double& dst) {
        return [&dst](const std::string& v) {
            auto x = to_double(v);
            if (!x) return std::string("expected a real number");
            dst = *x;
            return std::string();
        };
    };
    auto integer = [&](int& dst) {
        return [&dst](const std::string& v) {
            auto x = to_int(v);
            if (!x) return std::string("expected an integer");
            dst = static_cast<int>(*x);
            return std::string();
        };
    };
    auto boolean = [&](bool& dst) {
        return [&dst](const std::string& v) {
            auto x = to_bool(v);
            if (!x) return std::string("expected true or false");
            dst = *x;
            return std::string();
        };
    };
    auto path = [&](std::optional<fs::path>& dst) {
        return [&dst, &base](const std::string& v) {
            if (v == "none" || v.empty()) {
                dst.reset();
                return std::string();
            }
            fs::path p(v);
            if (p.is_relative()) p = base / p;
            if (!fs::exists(p)) return "file not found: " + p.string();
            dst = p;
            return std::string();
        };
    };
    auto opt_real = [&](std::optional<double>& dst) {
        return [&dst](const std::string& v) {
            if (v == "none") {
                dst.reset();
                return std::string();
            }
            auto x = to_double(v);
            if (!x) return std::string("expected a real number or none");
            dst = *x;
            return std::string();
        };
    };

    std::map<std::string, std::function<std::string(const std::string&)>> h;
    h["run.preset"] = h["preset"] = [](const std::string&) { return std::string(); };
    h["run.seed"] = h["seed"] = [&](const std::string& v) {
        auto x = to_int(v);
        if (!x || *x < 0) return std::string("expected a nonnegative integer");
        rc.seed = static_cast<std::uint64_t>(*x);
        return std::string();
    };
    h["grid.nx"] = integer(nx);
    h["grid.ny"] = integer(ny);
    h["grid.lx"] = real(lx);
    h["grid.ly"] = real(ly);
    h["physics.nu"] = real(s.cfg.nu);
    h["physics.stabilization"] = real(s.pot.stabilization);
    h["physics.potential"] = boolean(s.pot.enabled);
    h["physics.convection"] = boolean(s.cfg.convection);
    h["time.T"] = real(s.cfg.T);
    h["time.dt"] = real(s.cfg.dt);
    h["solver.div_tol"] = real(s.cfg.div_tol);
    h["solver.lin_tol"] = real(s.cfg.lin_tol);
    h["solver.blowup"] = real(s.cfg.blowup);
    h["control.mode"] = [&](const std::string& v) {
        if (v == "tangential") s.mode = ControlMode::tangential_only;
        else if (v == "free") s.mode = ControlMode::free_with_zero_flux;
        else return std::string("expected tangential or free");
        return std::string();
    };
    h["control.L"] = [&](const std::string& v) {
        if (v == "inf" || v == "none") {
            s.L = std::numeric_limits<double>::infinity();
            return std::string();
        }
        auto x = to_double(v);
        if (!x) return std::string("expected a real number or inf");
        if (!(*x > 0.0)) return std::string("must be positive");
        s.L = *x;
        return std::string();
    };
    h["control.hmax"] = opt_real(s.hmax);
    h["control.amplitude"] = real(s.amplitude);
    h["control.file"] = path(rc.control_file);
    h["initial.phi0_constant"] = opt_real(s.phi0_constant);
    h["initial.u0"] = path(rc.u0_file);
    h["initial.phi0"] = path(rc.phi0_file);
    h["targets.uq"] = path(rc.uq_file);
    h["targets.phiq"] = path(rc.phiq_file);
    h["targets.uomega"] = path(rc.uomega_file);
    h["targets.phiomega"] = path(rc.phiomega_file);
    h["optimizer.max_iters"] = integer(s.opt.max_iters);
    h["optimizer.c1"] = real(s.opt.c1);
    h["optimizer.beta"] = real(s.opt.beta);
    h["optimizer.step0"] = real(s.opt.step0);
    h["optimizer.grad_tol"] = real(s.opt.grad_tol);
    h["optimizer.cost_tol"] = real(s.opt.cost_tol);
    h["optimizer.max_backtracks"] = integer(s.opt.max_backtracks);
    h["verify.directions"] = integer(rc.verify.directions);
    h["verify.eps"] = [&](const std::string& v) {
        std::vector<double> out;
        std::istringstream in(v);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            auto x = to_double(trim(tok));
            if (!x) return std::string("expected a comma-separated list of reals");
            out.push_back(*x);
        }
        rc.verify.eps = out;
        return std::string();
    };
    h["verify.fd_eps"] = real(rc.verify.fd_eps);
    h["verify.gradcheck_tol"] = real(rc.verify.gradcheck_tol);
    h["verify.duality_tol"] = real(rc.verify.duality_tol);
    h["verify.order_min"] = real(rc.verify.order_min);
    h["verify.order_max"] = real(rc.verify.order_max);
    h["output.every"] = integer(rc.output_every);

    for (const auto& [key, e] : entries) {
        auto it = h.find(key);
        if (it == h.end()) {
            bad.push_back(key + ": unknown key (line " + std::to_string(e.line) + ")");
            continue;
        }
        if (std::string err = it->second(e.value); !err.empty())
            bad.push_back(key + ": " + err + " (line " + std::to_string(e.line) + ")");
    }

    if (nx < 4 || ny < 4) bad.emplace_back("grid: nx and ny must be at least 4");
    if (!(lx > 0.0) || !(ly > 0.0)) bad.emplace_back("grid: lx and ly must be positive");
    if (nx >= 4 && ny >= 4 && lx > 0.0 && ly > 0.0) s.cfg.grid = Grid(nx, ny, lx, ly);
    for (auto& v : s.cfg.violations()) bad.push_back(v);
    for (auto& v : s.opt.violations()) bad.push_back(v);
    if (s.hmax && !(*s.hmax > 0.0)) bad.emplace_back("control.hmax must be positive");
    if (!(s.pot.stabilization >= 0.0)) bad.emplace_back("physics.stabilization must be >= 0");
    if (rc.verify.directions < 1) bad.emplace_back("verify.directions must be >= 1");
    if (rc.verify.eps.size() < 2) bad.emplace_back("verify.eps needs at least two values");
    for (std::size_t k = 1; k < rc.verify.eps.size(); ++k)
        if (!(rc.verify.eps[k] < rc.verify.eps[k - 1])) {
            bad.emplace_back("verify.eps must be strictly decreasing");
            break;
        }
    if (!(rc.verify.fd_eps > 0.0)) bad.emplace_back("verify.fd_eps must be positive");
    if (rc.output_every < 1) bad.emplace_back("output.every must be >= 1");
    if (!bad.empty()) throw ValidationError(std::move(bad));

    if (rc.control_file) {
        const Grid& g = s.cfg.grid;
        const BoundaryControl hc = read_control(*rc.control_file, g);
        const VelocityField u0 = rc.u0_file ? read_velocity_snapshot(*rc.u0_file) : VelocityField(g);
        check_compatibility(u0, hc);
    }
    return rc;
}

RunConfig load_config(const fs::path& path) {
    if (!fs::exists(path)) throw ValidationError({"config file not found: " + path.string()});
    return parse_config(read_text(path), path.parent_path());
}

void load_targets(RunConfig& rc, const fs::path& path) {
    const auto entries = parse_lines(read_text(path));
    std::vector<std::string> bad;
    const std::map<std::string, std::optional<fs::path>*> slots{{"targets.uq", &rc.uq_file},
                                                                 {"targets.phiq", &rc.phiq_file},
                                                                 {"targets.uomega", &rc.uomega_file},
                                                                 {"targets.phiomega", &rc.phiomega_file}};
    for (const auto& [key, e] : entries) {
        auto it = slots.find(key);
        if (it == slots.end()) {
            bad.push_back(key + ": not a targets key (line " + std::to_string(e.line) + ")");
            continue;
        }
        fs::path p(e.value);
        if (p.is_relative()) p = path.parent_path() / p;
        if (!fs::exists(p)) {
            bad.push_back(key + ": file not found: " + p.string());
            continue;
        }
        *it->second = p;
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

Problem make_problem(const RunConfig& rc) {
    Problem pb = build_problem(rc.spec, rc.seed);
    const Grid& g = pb.cfg.grid;
    auto same_grid = [&g](const Grid& o, const std::string& what) {
        if (!(o == g)) throw ShapeMismatch(what + " grid differs from the configured grid");
    };
    if (rc.u0_file) {
        pb.u0 = read_velocity_snapshot(*rc.u0_file);
        same_grid(pb.u0.grid(), "initial velocity");
    }
    if (rc.phi0_file) {
        pb.phi0 = read_scalar_snapshot(*rc.phi0_file);
        same_grid(pb.phi0.grid(), "initial phase");
    }
    if (rc.control_file) {
        BoundaryControl c = read_control(*rc.control_file, g);
        require_same_nodes(c, pb.h);
        pb.h = std::move(c);
    }
    if (rc.uq_file) pb.targets.uQ = {read_velocity_snapshot(*rc.uq_file)};
    if (rc.phiq_file) pb.targets.phiQ = {read_scalar_snapshot(*rc.phiq_file)};
    if (rc.uomega_file) pb.targets.uOmega = read_velocity_snapshot(*rc.uomega_file);
    if (rc.phiomega_file) pb.targets.phiOmega = read_scalar_snapshot(*rc.phiomega_file);
    pb.targets.validate(g, pb.h.nodes());
    check_compatibility(pb.u0, pb.h);
    return pb;
}

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw FormatError("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInput("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::string snapshot_header(const Grid& g, double t) {
    return std::to_string(g.nx) + " " + std::to_string(g.ny) + " " + format_double(g.lx) + " " +
           format_double(g.ly) + " " + format_double(t) + "\n";
}

struct RawSnapshot {
    Grid grid;
    double t = 0.0;
    std::vector<double> values;
};

RawSnapshot read_raw(const fs::path& path, bool velocity) {
    std::istringstream in(read_text(path));
    RawSnapshot r;
    std::string header;
    if (!std::getline(in, header)) throw FormatError(path.string() + ": missing header");
    std::istringstream hs(header);
    int nx = 0, ny = 0;
    double lx = 0, ly = 0;
    if (!(hs >> nx >> ny >> lx >> ly >> r.t) || nx < 4 || ny < 4 || !(lx > 0) || !(ly > 0))
        throw FormatError(path.string() + ": bad header, expected 'nx ny lx ly t'");
    r.grid = Grid(nx, ny, lx, ly);
    const std::size_t expected = velocity ? static_cast<std::size_t>(2 * nx * ny + nx + ny)
                                          : static_cast<std::size_t>(nx * ny);
    std::string tok;
    while (in >> tok) {
        auto v = to_double(tok);
        if (!v) throw FormatError(path.string() + ": bad value '" + tok + "'");
        r.values.push_back(*v);
    }
    if (r.values.size() != expected)
        throw FormatError(path.string() + ": expected " + std::to_string(expected) + " values, found " +
                          std::to_string(r.values.size()));
    return r;
}

}  // namespace

void write_snapshot(const ScalarField& f, double t, const fs::path& path) {
    std::string s = snapshot_header(f.grid(), t);
    for (double v : f.values()) s += format_double(v) + "\n";
    write_atomic(path, s);
}

void write_snapshot(const VelocityField& u, double t, const fs::path& path) {
    std::string s = snapshot_header(u.grid(), t);
    for (double v : u.ux_values()) s += format_double(v) + "\n";
    for (double v : u.uy_values()) s += format_double(v) + "\n";
    write_atomic(path, s);
}

ScalarField read_scalar_snapshot(const fs::path& path, double* t) {
    RawSnapshot r = read_raw(path, false);
    ScalarField f(r.grid);
    std::copy(r.values.begin(), r.values.end(), f.values().begin());
    if (t) *t = r.t;
    return f;
}

VelocityField read_velocity_snapshot(const fs::path& path, double* t) {
    RawSnapshot r = read_raw(path, true);
    VelocityField u(r.grid);
    const auto nux = u.ux_values().size();
    std::copy(r.values.begin(), r.values.begin() + static_cast<std::ptrdiff_t>(nux), u.ux_values().begin());
    std::copy(r.values.begin() + static_cast<std::ptrdiff_t>(nux), r.values.end(), u.uy_values().begin());
    if (t) *t = r.t;
    return u;
}

void write_control(const BoundaryControl& h, const fs::path& path) {
    std::string s = "t,face,tangential,normal\n";
    for (std::size_t n = 0; n < h.time_nodes.size(); ++n)
        for (int f = 0; f < h.tangential[n].size(); ++f)
            s += format_double(h.time_nodes[n]) + "," + std::to_string(f) + "," + format_double(h.tangential[n][f]) +
                 "," + format_double(h.normal[n][f]) + "\n";
    write_atomic(path, s);
}

BoundaryControl read_control(const fs::path& path, const Grid& g) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t,face,tangential,normal")
        throw FormatError(path.string() + ": expected header t,face,tangential,normal");
    const int faces = g.boundary_faces();
    std::vector<double> nodes;
    std::vector<BoundaryTrace> tan, nor;
    int row = 1, data = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        ++data;
        std::vector<std::string> c;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) c.push_back(trim(tok));
        if (c.size() != 4) throw FormatError(path.string() + ":" + std::to_string(row) + ": expected 4 columns");
        auto t = to_double(c[0]);
        auto f = to_int(c[1]);
        auto vt = to_double(c[2]);
        auto vn = to_double(c[3]);
        if (!t || !f || !vt || !vn) throw FormatError(path.string() + ":" + std::to_string(row) + ": bad number");
        if (*f == 0) {
            nodes.push_back(*t);
            tan.emplace_back(g);
            nor.emplace_back(g);
        }
        if (nodes.empty() || *f < 0 || *f >= faces || *t != nodes.back())
            throw FormatError(path.string() + ":" + std::to_string(row) + ": rows must list faces 0.." +
                              std::to_string(faces - 1) + " per time node");
        tan.back()[static_cast<int>(*f)] = *vt;
        nor.back()[static_cast<int>(*f)] = *vn;
    }
    if (nodes.empty()) throw FormatError(path.string() + ": no rows");
    const std::size_t expected = nodes.size() * static_cast<std::size_t>(faces);
    if (static_cast<std::size_t>(data) != expected)
        throw FormatError(path.string() + ": expected " + std::to_string(expected) + " rows");
    BoundaryControl h;
    h.time_nodes = std::move(nodes);
    h.tangential = std::move(tan);
    h.normal = std::move(nor);
    return h;
}

namespace {

std::string node_name(const std::string& stem, std::size_t n) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04zu.txt", stem.c_str(), n);
    return buf;
}

}  // namespace

void write_trajectory(const Trajectory& tr, const fs::path& dir, int every) {
    const fs::path snap = dir / "snapshots";
    fs::create_directories(snap);
    for (std::size_t n = 0; n < tr.states.size(); ++n) {
        if (n % static_cast<std::size_t>(every) != 0 && n + 1 != tr.states.size()) continue;
        const State& s = tr.states[n];
        write_snapshot(s.u, s.t, snap / node_name("u", n));
        write_snapshot(s.phi, s.t, snap / node_name("phi", n));
        write_snapshot(s.mu, s.t, snap / node_name("mu", n));
        write_snapshot(s.pi, s.t, snap / node_name("pi", n));
    }
    write_control(tr.control, dir / "control.csv");
}

Trajectory read_trajectory(const fs::path& dir, const Grid& g) {
    if (!fs::exists(dir / "control.csv")) throw MissingInput(dir.string() + " holds no control.csv");
    Trajectory tr;
    tr.control = read_control(dir / "control.csv", g);
    const fs::path snap = dir / "snapshots";
    for (std::size_t n = 0; n < tr.control.time_nodes.size(); ++n) {
        if (!fs::exists(snap / node_name("u", n)))
            throw TrajectoryIncomplete(dir.string() + " lacks the state of node " + std::to_string(n) +
                                       " (write every node to reload a trajectory)");
        State s;
        s.u = read_velocity_snapshot(snap / node_name("u", n), &s.t);
        s.phi = read_scalar_snapshot(snap / node_name("phi", n));
        s.mu = read_scalar_snapshot(snap / node_name("mu", n));
        s.pi = read_scalar_snapshot(snap / node_name("pi", n));
        if (!(s.phi.grid() == g)) throw ShapeMismatch("trajectory grid differs from the configured grid");
        tr.states.push_back(std::move(s));
    }
    tr.dt = tr.control.nodes() > 1 ? tr.control.time_nodes[1] - tr.control.time_nodes[0] : 0.0;
    return tr;
}

void write_diagnostics(const std::vector<Diagnostics>& d, const fs::path& path) {
    std::string s = "t,mass,kinetic,mixing,energy,div_res\n";
    for (const auto& x : d)
        s += format_double(x.t) + "," + format_double(x.mass) + "," + format_double(x.kinetic) + "," +
             format_double(x.mixing) + "," + format_double(x.kinetic + x.mixing) + "," + format_double(x.div_res) +
             "\n";
    write_atomic(path, s);
}

void write_history(const OptimizationResult& r, const fs::path& path) {
    std::string s = "iter,J_total,track_u,track_phi,final_u,final_phi,control,grad_norm,step\n";
    for (std::size_t k = 0; k < r.cost_history.size(); ++k) {
        const CostBreakdown& c = r.cost_history[k];
        const double gn = k < r.grad_norm_history.size() ? r.grad_norm_history[k] : std::nan("");
        s += std::to_string(k) + "," + format_double(c.total) + "," + format_double(c.track_u) + "," +
             format_double(c.track_phi) + "," + format_double(c.final_u) + "," + format_double(c.final_phi) + "," +
             format_double(c.control) + "," + format_double(gn) + "," + format_double(r.step_history[k]) + "\n";
    }
    write_atomic(path, s);
}

void write_multipliers(const BoundaryMultipliers& bm, const std::vector<double>& times, const fs::path& path) {
    std::string s = "t,face_id,p1_x,p1_y,zeta1_flux\n";
    for (std::size_t n = 0; n < bm.p1.size(); ++n)
        for (int f = 0; f < bm.p1[n].x.size(); ++f)
            s += format_double(times[n]) + "," + std::to_string(f) + "," + format_double(bm.p1[n].x[f]) + "," +
                 format_double(bm.p1[n].y[f]) + "," + format_double(bm.zeta1_flux[n][f]) + "\n";
    write_atomic(path, s);
}

void write_gradcheck(const GradCheckReport& r, const fs::path& path) {
    std::string s = "direction,eps,fd,adjoint,rel_error\n";
    for (std::size_t k = 0; k < r.rows.size(); ++k)
        s += std::to_string(k) + "," + format_double(r.eps) + "," + format_double(r.rows[k].fd) + "," +
             format_double(r.rows[k].adjoint) + "," + format_double(r.rows[k].rel_error) + "\n";
    write_atomic(path, s);
}

void write_taylor(const TaylorReport& r, const fs::path& path) {
    std::string s = "eps,remainder\n";
    for (std::size_t k = 0; k < r.eps_list.size(); ++k)
        s += format_double(r.eps_list[k]) + "," + format_double(r.remainder_norms[k]) + "\n";
    s += "# fitted_order " + format_double(r.fitted_order) + (r.degenerate ? " degenerate" : "") + "\n";
    write_atomic(path, s);
}

void write_manifest(const fs::path& dir, const RunConfig& rc, const std::string& subcommand, double wall_seconds,
                    const std::map<std::string, std::string>& metrics) {
    const SimConfig& c = rc.spec.cfg;
    std::string s;
    s += "subcommand = " + subcommand + "\n";
    s += "config_digest = " + rc.digest() + "\n";
    s += "code_version = " CHNS_VERSION "\n";
    s += "grid = " + std::to_string(c.grid.nx) + "x" + std::to_string(c.grid.ny) + " on " + format_double(c.grid.lx) +
         "x" + format_double(c.grid.ly) + "\n";
    s += "dt = " + format_double(c.dt) + "\n";
    s += "T = " + format_double(c.T) + "\n";
    s += "wall_time_s = " + format_double(wall_seconds) + "\n";
    for (const auto& [k, v] : metrics) s += k + " = " + v + "\n";
    s += "\n[config]\n" + rc.canonical();
    write_atomic(dir / "manifest.txt", s);
}

}  // namespace chns
