#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chns/adjoint_solver.hpp"
#include "chns/linearized_solver.hpp"
#include "chns/presets.hpp"

namespace chns {

namespace fs = std::filesystem;

struct VerifyConfig {
    int directions = 5;
    std::vector<double> eps = default_eps_ladder;
    double fd_eps = 1e-3;
    double gradcheck_tol = 5e-2;
    double duality_tol = 1e-2;
    double order_min = 1.8;
    double order_max = 2.2;
};

struct RunConfig {
    ProblemSpec spec;
    std::uint64_t seed = 0;
    std::optional<fs::path> control_file;
    std::optional<fs::path> u0_file;
    std::optional<fs::path> phi0_file;
    std::optional<fs::path> uq_file, phiq_file, uomega_file, phiomega_file;
    VerifyConfig verify;
    int output_every = 1;

    /// Canonical key = value listing of every setting (sorted), the input of
    /// the digest.
    std::string canonical() const;
    /// 64-bit FNV-1a of canonical(), as 16 hex digits.
    std::string digest() const;
};

/// Parses a `[section]` / `key = value` file. Throws ParseError for
/// malformed lines and ValidationError listing every bad field; checks that
/// referenced files exist and, when a control file is given, its
/// compatibility with the initial velocity.
RunConfig load_config(const fs::path& path);
/// Same from text (relative file paths resolve against `base`).
RunConfig parse_config(const std::string& text, const fs::path& base = ".");
/// Config of a preset with all defaults.
RunConfig default_config(const std::string& preset);

/// Reads `[targets]` keys (uq, phiq, uomega, phiomega) from a separate file
/// into rc; other sections are rejected.
void load_targets(RunConfig& rc, const fs::path& path);

/// Builds the problem, then replaces initial data, control and targets by
/// any files the config names.
Problem make_problem(const RunConfig& rc);

/// Writes via a temporary file and rename.
void write_atomic(const fs::path& path, const std::string& content);
std::string read_text(const fs::path& path);

/// Snapshot: header `nx ny lx ly t`, then the values one per line with 17
/// significant digits (velocity: ux then uy, both row-major).
void write_snapshot(const ScalarField& f, double t, const fs::path& path);
void write_snapshot(const VelocityField& u, double t, const fs::path& path);
ScalarField read_scalar_snapshot(const fs::path& path, double* t = nullptr);
VelocityField read_velocity_snapshot(const fs::path& path, double* t = nullptr);

/// CSV with header t,face,tangential,normal.
void write_control(const BoundaryControl& h, const fs::path& path);
BoundaryControl read_control(const fs::path& path, const Grid& g);

/// Full state series in dir/snapshots plus dir/control.csv.
void write_trajectory(const Trajectory& tr, const fs::path& dir, int every = 1);
Trajectory read_trajectory(const fs::path& dir, const Grid& g);

void write_diagnostics(const std::vector<Diagnostics>& d, const fs::path& path);
void write_history(const OptimizationResult& r, const fs::path& path);
void write_multipliers(const BoundaryMultipliers& bm, const std::vector<double>& times, const fs::path& path);
void write_gradcheck(const GradCheckReport& r, const fs::path& path);
void write_taylor(const TaylorReport& r, const fs::path& path);

/// Manifest: config digest, code version, grid, time step, wall time and the
/// metrics of the subcommand, as key = value lines.
void write_manifest(const fs::path& dir, const RunConfig& rc, const std::string& subcommand, double wall_seconds,
                    const std::map<std::string, std::string>& metrics);

std::string format_double(double v);

}  // namespace chns
