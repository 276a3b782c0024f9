#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chns/grid.hpp"

namespace chns {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

/// Standalone SVG line chart. Nonpositive values are dropped on a log axis.
std::string line_chart_svg(const std::string& title, const std::string& xlabel, const std::vector<Series>& series,
                           bool log_y);

/// Binary PPM heat map of a scalar field, blue (min) to red (max), one pixel
/// block per cell, y up.
std::string heatmap_ppm(const ScalarField& f, int block = 4);

/// Renders every chart the run directory supports: cost_history.svg from
/// history.csv (log scale), energy.svg from diagnostics.csv, gradcheck.svg
/// from gradcheck.csv, taylor.svg from taylor.csv and one PPM per phi
/// snapshot. Throws MissingInput when the directory holds none of them.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& run_dir);

}  // namespace chns
