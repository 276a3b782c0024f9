#pragma once

#include <random>

#include "chns/presets.hpp"

namespace support {

/// Preset with the grid and step count replaced.
inline chns::ProblemSpec resized(const std::string& preset, int n, int steps) {
    chns::ProblemSpec s = chns::preset_spec(preset);
    s.cfg.grid = chns::Grid(n, n, s.cfg.grid.lx, s.cfg.grid.ly);
    s.cfg.dt = s.cfg.T / steps;
    return s;
}

inline chns::Problem lid(int n, int steps) { return chns::build_problem(resized("lid", n, steps), 0); }

/// Everything zero: data, control, targets.
inline chns::Problem zero_problem(int n, int steps, double T = 0.1) {
    chns::ProblemSpec s = chns::preset_spec("rest");
    s.cfg.grid = chns::Grid(n, n, 1.0, 1.0);
    s.cfg.T = T;
    s.cfg.dt = T / steps;
    return chns::build_problem(s, 0);
}

inline chns::ScalarField random_scalar(const chns::Grid& g, std::uint64_t seed, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-amp, amp);
    chns::ScalarField f(g);
    for (double& v : f.values()) v = U(rng);
    return f;
}

inline chns::VelocityField random_velocity(const chns::Grid& g, std::uint64_t seed, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-amp, amp);
    chns::VelocityField u(g);
    for (double& v : u.ux_values()) v = U(rng);
    for (double& v : u.uy_values()) v = U(rng);
    u.zero_boundary_faces();
    return u;
}

inline double rel_diff(const chns::VelocityField& a, const chns::VelocityField& b) {
    chns::VelocityField d = a;
    d -= b;
    return chns::norm(d) / std::max(chns::norm(b), 1e-300);
}

inline double rel_diff(const chns::ScalarField& a, const chns::ScalarField& b) {
    chns::ScalarField d = a;
    d -= b;
    return chns::norm(d) / std::max(chns::norm(b), 1e-300);
}

}  // namespace support
