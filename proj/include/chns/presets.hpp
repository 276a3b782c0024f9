#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chns/verification.hpp"

namespace chns {

/// Scalar parameters of a problem before any field is sampled. A preset
/// fills every field with its defaults; a config file may override them.
struct ProblemSpec {
    std::string preset = "lid";
    SimConfig cfg;
    Potential pot;
    ControlMode mode = ControlMode::tangential_only;
    double L = std::numeric_limits<double>::infinity();
    std::optional<double> hmax;
    OptimizerConfig opt;
    /// Scale of the preset's control (lid speed, h-dagger amplitude).
    double amplitude = 1.0;
    /// When set, phi0 is this constant instead of the preset's field.
    std::optional<double> phi0_constant;
};

const std::vector<std::string>& preset_names();

/// Defaults of a named preset; throws ValidationError for unknown names.
ProblemSpec preset_spec(const std::string& name);

/// Samples initial data, control and targets. The seed drives the spinodal
/// noise only.
Problem build_problem(const ProblemSpec& spec, std::uint64_t seed);

/// The known control that generates the inverse_crime targets.
BoundaryControl inverse_crime_source(const ProblemSpec& spec);

}  // namespace chns
