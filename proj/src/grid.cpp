#include "chns/grid.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "chns/error.hpp"

namespace chns {

Grid::Grid(int nx_, int ny_, double lx_, double ly_) : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    std::vector<std::string> bad;
    if (nx < 4) bad.push_back("grid.nx must be >= 4");
    if (ny < 4) bad.push_back("grid.ny must be >= 4");
    if (!(lx > 0.0) || !std::isfinite(lx)) bad.push_back("grid.lx must be positive");
    if (!(ly > 0.0) || !std::isfinite(ly)) bad.push_back("grid.ly must be positive");
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

int Grid::face_id(Edge e, int k) const noexcept {
    switch (e) {
        case Edge::bottom: return k;
        case Edge::right: return nx + k;
        case Edge::top: return nx + ny + (nx - 1 - k);
        case Edge::left: return 2 * nx + ny + (ny - 1 - k);
    }
    return -1;
}

Face Grid::face(int id) const noexcept {
    assert(id >= 0 && id < boundary_faces());
    if (id < nx) return {Edge::bottom, id, 0.0, -1.0, 1.0, 0.0, hx(), xc(id), 0.0};
    id -= nx;
    if (id < ny) return {Edge::right, id, 1.0, 0.0, 0.0, 1.0, hy(), lx, yc(id)};
    id -= ny;
    if (id < nx) {
        const int i = nx - 1 - id;
        return {Edge::top, i, 0.0, 1.0, -1.0, 0.0, hx(), xc(i), ly};
    }
    id -= nx;
    const int j = ny - 1 - id;
    return {Edge::left, j, -1.0, 0.0, 0.0, -1.0, hy(), 0.0, yc(j)};
}

// --- field arithmetic ----------------------------------------------------

namespace {

void require_same(const Grid& a, const Grid& b) {
    if (!(a == b)) throw ShapeMismatch("fields live on different grids");
}

void axpy_span(std::span<double> y, double a, std::span<const double> x) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

}  // namespace

ScalarField& ScalarField::operator+=(const ScalarField& o) { return axpy(1.0, o); }
ScalarField& ScalarField::operator-=(const ScalarField& o) { return axpy(-1.0, o); }
ScalarField& ScalarField::operator*=(double a) {
    for (auto& x : v_) x *= a;
    return *this;
}
ScalarField& ScalarField::axpy(double a, const ScalarField& o) {
    require_same(grid_, o.grid_);
    axpy_span(v_, a, o.v_);
    return *this;
}

VelocityField& VelocityField::operator+=(const VelocityField& o) { return axpy(1.0, o); }
VelocityField& VelocityField::operator-=(const VelocityField& o) { return axpy(-1.0, o); }
VelocityField& VelocityField::operator*=(double a) {
    for (auto& x : ux_) x *= a;
    for (auto& x : uy_) x *= a;
    return *this;
}
VelocityField& VelocityField::axpy(double a, const VelocityField& o) {
    require_same(grid_, o.grid_);
    axpy_span(ux_, a, o.ux_);
    axpy_span(uy_, a, o.uy_);
    return *this;
}

void VelocityField::zero_boundary_faces() noexcept {
    const int nx = grid_.nx, ny = grid_.ny;
    for (int j = 0; j < ny; ++j) {
        ux(0, j) = 0.0;
        ux(nx, j) = 0.0;
    }
    for (int i = 0; i < nx; ++i) {
        uy(i, 0) = 0.0;
        uy(i, ny) = 0.0;
    }
}

// --- inner products ------------------------------------------------------

double dot(const ScalarField& a, const ScalarField& b) {
    require_same(a.grid(), b.grid());
    double s = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) s += av[k] * bv[k];
    return s * a.grid().cell_area();
}

double dot(const VelocityField& a, const VelocityField& b) {
    require_same(a.grid(), b.grid());
    const Grid& g = a.grid();
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const double w = (i == 0 || i == g.nx) ? 0.5 : 1.0;
            s += w * a.ux(i, j) * b.ux(i, j);
        }
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double w = (j == 0 || j == g.ny) ? 0.5 : 1.0;
            s += w * a.uy(i, j) * b.uy(i, j);
        }
    return s * g.cell_area();
}

double dot(const BoundaryTrace& a, const BoundaryTrace& b) {
    require_same(a.grid, b.grid);
    double s = 0.0;
    for (int f = 0; f < a.size(); ++f) s += a.grid.face(f).length * a[f] * b[f];
    return s;
}

double norm(const ScalarField& a) { return std::sqrt(dot(a, a)); }
double norm(const VelocityField& a) { return std::sqrt(dot(a, a)); }

double max_abs(const ScalarField& a) {
    double m = 0.0;
    for (double x : a.values()) m = std::max(m, std::abs(x));
    return m;
}

double max_abs(const VelocityField& a) {
    double m = 0.0;
    for (double x : a.ux_values()) m = std::max(m, std::abs(x));
    for (double x : a.uy_values()) m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(const ScalarField& a) {
    return std::all_of(a.values().begin(), a.values().end(), [](double x) { return std::isfinite(x); });
}

bool all_finite(const VelocityField& a) {
    auto fin = [](double x) { return std::isfinite(x); };
    return std::all_of(a.ux_values().begin(), a.ux_values().end(), fin) &&
           std::all_of(a.uy_values().begin(), a.uy_values().end(), fin);
}

double mean(const ScalarField& a) {
    double s = 0.0;
    for (double x : a.values()) s += x;
    return s / a.grid().cells();
}

// --- stencils ------------------------------------------------------------

ScalarField laplacian_neumann(const ScalarField& f) {
    const Grid& g = f.grid();
    const double ax = 1.0 / (g.hx() * g.hx());
    const double ay = 1.0 / (g.hy() * g.hy());
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double c = f(i, j);
            const double w = i > 0 ? f(i - 1, j) : c;
            const double e = i < g.nx - 1 ? f(i + 1, j) : c;
            const double s = j > 0 ? f(i, j - 1) : c;
            const double n = j < g.ny - 1 ? f(i, j + 1) : c;
            out(i, j) = ax * (w - 2.0 * c + e) + ay * (s - 2.0 * c + n);
        }
    return out;
}

ScalarField divergence(const VelocityField& u) {
    const Grid& g = u.grid();
    ScalarField out(g);
    const double rx = 1.0 / g.hx(), ry = 1.0 / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = (u.ux(i + 1, j) - u.ux(i, j)) * rx + (u.uy(i, j + 1) - u.uy(i, j)) * ry;
    return out;
}

VelocityField gradient_to_faces(const ScalarField& f) {
    const Grid& g = f.grid();
    VelocityField out(g);
    const double rx = 1.0 / g.hx(), ry = 1.0 / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) out.ux(i, j) = (f(i, j) - f(i - 1, j)) * rx;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out.uy(i, j) = (f(i, j) - f(i, j - 1)) * ry;
    return out;
}

namespace {

// Inward derivative at a wall from cell values at h/2, 3h/2, 5h/2.
inline double one_sided_cells(double f1, double f2, double f3, double h) {
    return (-2.0 * f1 + 3.0 * f2 - f3) / h;
}

// Inward derivative from a wall value and values at h/2, 3h/2.
inline double one_sided_wall_half(double w, double a0, double a1, double h) {
    return (-8.0 * w + 9.0 * a0 - a1) / (3.0 * h);
}

// Inward derivative from values at 0, h, 2h.
inline double one_sided_nodes(double f0, double f1, double f2, double h) {
    return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}

}  // namespace

BoundaryTrace normal_derivative_trace(const ScalarField& f) {
    const Grid& g = f.grid();
    BoundaryTrace out(g);
    for (int id = 0; id < g.boundary_faces(); ++id) {
        const Face fc = g.face(id);
        const int k = fc.k;
        double inward = 0.0;
        switch (fc.edge) {
            case Edge::bottom: inward = one_sided_cells(f(k, 0), f(k, 1), f(k, 2), g.hy()); break;
            case Edge::top:
                inward = one_sided_cells(f(k, g.ny - 1), f(k, g.ny - 2), f(k, g.ny - 3), g.hy());
                break;
            case Edge::left: inward = one_sided_cells(f(0, k), f(1, k), f(2, k), g.hx()); break;
            case Edge::right:
                inward = one_sided_cells(f(g.nx - 1, k), f(g.nx - 2, k), f(g.nx - 3, k), g.hx());
                break;
        }
        out[id] = -inward;
    }
    return out;
}

VectorTrace normal_derivative_trace(const VelocityField& u, const BoundaryTrace& tw) {
    const Grid& g = u.grid();
    if (!(tw.grid == g)) throw ShapeMismatch("wall trace grid differs from velocity grid");
    VectorTrace out{BoundaryTrace(g), BoundaryTrace(g)};
    const int nx = g.nx, ny = g.ny;
    const double hx = g.hx(), hy = g.hy();
    for (int id = 0; id < g.boundary_faces(); ++id) {
        const Face fc = g.face(id);
        const int k = fc.k;
        double dx = 0.0, dy = 0.0;  // inward derivatives of the x and y components
        switch (fc.edge) {
            case Edge::bottom: {
                const double a0 = 0.5 * (u.ux(k, 0) + u.ux(k + 1, 0));
                const double a1 = 0.5 * (u.ux(k, 1) + u.ux(k + 1, 1));
                dx = one_sided_wall_half(tw[id] * fc.tx, a0, a1, hy);
                dy = one_sided_nodes(u.uy(k, 0), u.uy(k, 1), u.uy(k, 2), hy);
                break;
            }
            case Edge::top: {
                const double a0 = 0.5 * (u.ux(k, ny - 1) + u.ux(k + 1, ny - 1));
                const double a1 = 0.5 * (u.ux(k, ny - 2) + u.ux(k + 1, ny - 2));
                dx = one_sided_wall_half(tw[id] * fc.tx, a0, a1, hy);
                dy = one_sided_nodes(u.uy(k, ny), u.uy(k, ny - 1), u.uy(k, ny - 2), hy);
                break;
            }
            case Edge::left: {
                const double a0 = 0.5 * (u.uy(0, k) + u.uy(0, k + 1));
                const double a1 = 0.5 * (u.uy(1, k) + u.uy(1, k + 1));
                dy = one_sided_wall_half(tw[id] * fc.ty, a0, a1, hx);
                dx = one_sided_nodes(u.ux(0, k), u.ux(1, k), u.ux(2, k), hx);
                break;
            }
            case Edge::right: {
                const double a0 = 0.5 * (u.uy(nx - 1, k) + u.uy(nx - 1, k + 1));
                const double a1 = 0.5 * (u.uy(nx - 2, k) + u.uy(nx - 2, k + 1));
                dy = one_sided_wall_half(tw[id] * fc.ty, a0, a1, hx);
                dx = one_sided_nodes(u.ux(nx, k), u.ux(nx - 1, k), u.ux(nx - 2, k), hx);
                break;
            }
        }
        out.x[id] = -dx;
        out.y[id] = -dy;
    }
    return out;
}

VectorTrace normal_derivative_trace(const VelocityField& u) {
    return normal_derivative_trace(u, BoundaryTrace(u.grid()));
}

VectorTrace wall_derivative_trace(const VelocityField& u) {
    const Grid& g = u.grid();
    VectorTrace out{BoundaryTrace(g), BoundaryTrace(g)};
    const int nx = g.nx, ny = g.ny;
    const double hx = g.hx(), hy = g.hy();
    for (int id = 0; id < g.boundary_faces(); ++id) {
        const int k = g.face(id).k;
        double x = 0.0, y = 0.0;  // nearest interior values
        double dx = 0.0, dy = 0.0;  // their wall distances
        switch (g.face(id).edge) {
            case Edge::bottom:
                x = 0.5 * (u.ux(k, 0) + u.ux(k + 1, 0)), dx = 0.5 * hy;
                y = u.uy(k, 1), dy = hy;
                break;
            case Edge::top:
                x = 0.5 * (u.ux(k, ny - 1) + u.ux(k + 1, ny - 1)), dx = 0.5 * hy;
                y = u.uy(k, ny - 1), dy = hy;
                break;
            case Edge::left:
                y = 0.5 * (u.uy(0, k) + u.uy(0, k + 1)), dy = 0.5 * hx;
                x = u.ux(1, k), dx = hx;
                break;
            case Edge::right:
                y = 0.5 * (u.uy(nx - 1, k) + u.uy(nx - 1, k + 1)), dy = 0.5 * hx;
                x = u.ux(nx - 1, k), dx = hx;
                break;
        }
        out.x[id] = -x / dx;
        out.y[id] = -y / dy;
    }
    return out;
}

BoundaryTrace adjacent_cell_trace(const ScalarField& f) {
    const Grid& g = f.grid();
    BoundaryTrace out(g);
    for (int id = 0; id < g.boundary_faces(); ++id) {
        const Face fc = g.face(id);
        switch (fc.edge) {
            case Edge::bottom: out[id] = f(fc.k, 0); break;
            case Edge::top: out[id] = f(fc.k, g.ny - 1); break;
            case Edge::left: out[id] = f(0, fc.k); break;
            case Edge::right: out[id] = f(g.nx - 1, fc.k); break;
        }
    }
    return out;
}

}  // namespace chns
