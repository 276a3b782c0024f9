#include "chns/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "chns/error.hpp"
#include "chns/io.hpp"

namespace chns {

namespace fs = std::filesystem;

namespace {

constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Columns of a CSV with a header row; '#' lines are skipped.
std::map<std::string, std::vector<double>> read_csv(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::string line;
    std::vector<std::string> names;
    std::map<std::string, std::vector<double>> cols;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        if (names.empty()) {
            names = cells;
            continue;
        }
        for (std::size_t k = 0; k < names.size() && k < cells.size(); ++k) {
            try {
                cols[names[k]].push_back(std::stod(cells[k]));
            } catch (const std::exception&) {
                cols[names[k]].push_back(std::nan(""));
            }
        }
    }
    return cols;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& xlabel, const std::vector<Series>& series,
                           bool log_y) {
    const double W = 640, H = 420, l = 80, r = 150, t = 40, b = 50;
    auto ty = [log_y](double y) { return log_y ? std::log10(y) : y; };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.y[k]) || (log_y && s.y[k] <= 0)) continue;
            x0 = std::min(x0, s.x[k]), x1 = std::max(x1, s.x[k]);
            y0 = std::min(y0, ty(s.y[k])), y1 = std::max(y1, ty(s.y[k]));
        }
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1, y0 -= 1;
    auto px = [&](double x) { return l + (x - x0) / (x1 - x0) * (W - l - r); };
    auto py = [&](double y) { return H - b - (ty(y) - y0) / (y1 - y0) * (H - t - b); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";
    o << "<rect x=\"" << l << "\" y=\"" << t << "\" width=\"" << W - l - r << "\" height=\"" << H - t - b
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fy = y0 + (y1 - y0) * k / 4.0;
        const double yy = H - b - (H - t - b) * k / 4.0;
        const double fx = x0 + (x1 - x0) * k / 4.0;
        const double xx = l + (W - l - r) * k / 4.0;
        o << "<text x=\"" << l - 6 << "\" y=\"" << yy + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
          << (log_y ? "1e" + num(fy) : num(fy)) << "</text>\n";
        o << "<text x=\"" << xx << "\" y=\"" << H - b + 16
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(fx) << "</text>\n";
    }
    o << "<text x=\"" << l + (W - l - r) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel << "</text>\n";
    if (log_y)
        o << "<text x=\"16\" y=\"" << t + (H - t - b) / 2
          << "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " << t + (H - t - b) / 2
          << ")\">log scale</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* col = palette[s % 6];
        o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < series[s].x.size(); ++k) {
            const double y = series[s].y[k];
            if (!std::isfinite(y) || (log_y && y <= 0)) continue;
            o << px(series[s].x[k]) << "," << py(y) << " ";
        }
        o << "\"/>\n";
        o << "<text x=\"" << W - r + 10 << "\" y=\"" << t + 16 * (s + 1) << "\" fill=\"" << col
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string heatmap_ppm(const ScalarField& f, int block) {
    const Grid& g = f.grid();
    double lo = INFINITY, hi = -INFINITY;
    for (double v : f.values()) lo = std::min(lo, v), hi = std::max(hi, v);
    const double span = hi > lo ? hi - lo : 1.0;
    const int w = g.nx * block, h = g.ny * block;
    std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    for (int py = 0; py < h; ++py) {
        const int j = g.ny - 1 - py / block;
        for (int px = 0; px < w; ++px) {
            const double s = (f(px / block, j) - lo) / span;
            out += static_cast<char>(static_cast<unsigned char>(std::lround(255 * s)));
            out += static_cast<char>(static_cast<unsigned char>(std::lround(255 * (1 - std::abs(2 * s - 1)))));
            out += static_cast<char>(static_cast<unsigned char>(std::lround(255 * (1 - s))));
        }
    }
    return out;
}

std::vector<fs::path> emit_plots(const fs::path& dir) {
    std::vector<fs::path> made;
    if (fs::exists(dir / "history.csv")) {
        auto c = read_csv(dir / "history.csv");
        std::vector<Series> s{{"J", c["iter"], c["J_total"]}, {"grad residual", c["iter"], c["grad_norm"]}};
        write_atomic(dir / "cost_history.svg", line_chart_svg("cost history", "iteration", s, true));
        made.push_back(dir / "cost_history.svg");
    }
    if (fs::exists(dir / "diagnostics.csv")) {
        auto c = read_csv(dir / "diagnostics.csv");
        std::vector<Series> s{{"kinetic + mixing", c["t"], c["energy"]}};
        write_atomic(dir / "energy.svg", line_chart_svg("energy", "t", s, false));
        made.push_back(dir / "energy.svg");
    }
    if (fs::exists(dir / "gradcheck.csv")) {
        auto c = read_csv(dir / "gradcheck.csv");
        std::vector<Series> s{{"fd", c["direction"], c["fd"]}, {"adjoint", c["direction"], c["adjoint"]}};
        write_atomic(dir / "gradcheck.svg", line_chart_svg("gradient check", "direction", s, false));
        made.push_back(dir / "gradcheck.svg");
    }
    if (fs::exists(dir / "taylor.csv")) {
        auto c = read_csv(dir / "taylor.csv");
        std::vector<double> le, lr;
        for (std::size_t k = 0; k < c["eps"].size(); ++k) {
            le.push_back(std::log10(c["eps"][k]));
            lr.push_back(c["remainder"][k]);
        }
        write_atomic(dir / "taylor.svg", line_chart_svg("Taylor remainder", "log10 eps", {{"remainder", le, lr}}, true));
        made.push_back(dir / "taylor.svg");
    }
    const fs::path snap = dir / "snapshots";
    if (fs::is_directory(snap)) {
        std::vector<fs::path> phis;
        for (const auto& e : fs::directory_iterator(snap)) {
            const std::string n = e.path().filename().string();
            if (n.rfind("phi_", 0) == 0 && e.path().extension() == ".txt") phis.push_back(e.path());
        }
        std::sort(phis.begin(), phis.end());
        const fs::path frames = dir / "frames";
        for (const auto& p : phis) {
            const fs::path out = frames / (p.stem().string() + ".ppm");
            write_atomic(out, heatmap_ppm(read_scalar_snapshot(p)));
            made.push_back(out);
        }
    }
    if (made.empty()) throw MissingInput(dir.string() + " holds no history, diagnostics, report or snapshot files");
    return made;
}

}  // namespace chns
