#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chns {

/// Edges of the rectangle, in counterclockwise traversal order.
enum class Edge { bottom, right, top, left };

/// Geometry of one boundary face. Normals point outward; tangents run
/// counterclockwise, so (tx, ty) = (-ny, nx).
struct Face {
    Edge edge;
    int k;  // cell index along the edge: i on bottom/top, j on left/right
    double nx, ny;
    double tx, ty;
    double length;
    double cx, cy;
};

/// Uniform MAC discretization of [0, lx] x [0, ly].
///
/// Scalars live at cell centers ((i + 1/2) hx, (j + 1/2) hy). The x velocity
/// lives on vertical faces (i hx, (j + 1/2) hy), i = 0..nx; the y velocity on
/// horizontal faces ((i + 1/2) hx, j hy), j = 0..ny. Boundary faces are
/// numbered counterclockwise starting at the bottom-left corner: bottom edge
/// left to right, right edge upward, top edge right to left, left edge downward.
struct Grid {
    int nx = 4;
    int ny = 4;
    double lx = 1.0;
    double ly = 1.0;

    Grid() = default;
    Grid(int nx, int ny, double lx, double ly);

    double hx() const noexcept { return lx / nx; }
    double hy() const noexcept { return ly / ny; }
    double cell_area() const noexcept { return hx() * hy(); }
    double area() const noexcept { return lx * ly; }
    int cells() const noexcept { return nx * ny; }
    int boundary_faces() const noexcept { return 2 * (nx + ny); }
    double xc(int i) const noexcept { return (i + 0.5) * hx(); }
    double yc(int j) const noexcept { return (j + 0.5) * hy(); }

    int face_id(Edge e, int k) const noexcept;
    Face face(int id) const noexcept;

    bool operator==(const Grid& o) const noexcept {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
};

/// Cell-centered field, stored row-major (j outer, i inner).
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g, double value = 0.0)
        : grid_(g), v_(static_cast<std::size_t>(g.cells()), value) {}

    template <class F>
    static ScalarField sample(const Grid& g, F&& f) {
        ScalarField s(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) s(i, j) = f(g.xc(i), g.yc(j));
        return s;
    }

    const Grid& grid() const noexcept { return grid_; }
    double& operator()(int i, int j) noexcept { return v_[static_cast<std::size_t>(j * grid_.nx + i)]; }
    double operator()(int i, int j) const noexcept { return v_[static_cast<std::size_t>(j * grid_.nx + i)]; }
    std::span<double> values() noexcept { return v_; }
    std::span<const double> values() const noexcept { return v_; }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double a);
    /// this += a * o
    ScalarField& axpy(double a, const ScalarField& o);

private:
    Grid grid_;
    std::vector<double> v_;
};

/// Face-staggered velocity. ux is (nx+1) x ny, uy is nx x (ny+1), both row-major.
class VelocityField {
public:
    VelocityField() = default;
    explicit VelocityField(const Grid& g)
        : grid_(g),
          ux_(static_cast<std::size_t>((g.nx + 1) * g.ny), 0.0),
          uy_(static_cast<std::size_t>(g.nx * (g.ny + 1)), 0.0) {}

    /// Samples a vector function at the face positions.
    template <class FX, class FY>
    static VelocityField sample(const Grid& g, FX&& fx, FY&& fy) {
        VelocityField u(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) u.ux(i, j) = fx(i * g.hx(), g.yc(j));
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) u.uy(i, j) = fy(g.xc(i), j * g.hy());
        return u;
    }

    const Grid& grid() const noexcept { return grid_; }
    double& ux(int i, int j) noexcept { return ux_[static_cast<std::size_t>(j * (grid_.nx + 1) + i)]; }
    double ux(int i, int j) const noexcept { return ux_[static_cast<std::size_t>(j * (grid_.nx + 1) + i)]; }
    double& uy(int i, int j) noexcept { return uy_[static_cast<std::size_t>(j * grid_.nx + i)]; }
    double uy(int i, int j) const noexcept { return uy_[static_cast<std::size_t>(j * grid_.nx + i)]; }

    std::span<double> ux_values() noexcept { return ux_; }
    std::span<const double> ux_values() const noexcept { return ux_; }
    std::span<double> uy_values() noexcept { return uy_; }
    std::span<const double> uy_values() const noexcept { return uy_; }

    VelocityField& operator+=(const VelocityField& o);
    VelocityField& operator-=(const VelocityField& o);
    VelocityField& operator*=(double a);
    VelocityField& axpy(double a, const VelocityField& o);

    /// Sets every boundary face (normal component on the walls) to zero.
    void zero_boundary_faces() noexcept;

private:
    Grid grid_;
    std::vector<double> ux_;
    std::vector<double> uy_;
};

/// One value per boundary face, in the counterclockwise face order.
struct BoundaryTrace {
    Grid grid;
    std::vector<double> values;

    BoundaryTrace() = default;
    explicit BoundaryTrace(const Grid& g, double v = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.boundary_faces()), v) {}

    double& operator[](int f) noexcept { return values[static_cast<std::size_t>(f)]; }
    double operator[](int f) const noexcept { return values[static_cast<std::size_t>(f)]; }
    int size() const noexcept { return static_cast<int>(values.size()); }
};

/// Cartesian components of a vector-valued boundary trace.
struct VectorTrace {
    BoundaryTrace x;
    BoundaryTrace y;
};

// --- inner products and norms -------------------------------------------

/// Midpoint quadrature over cells.
double dot(const ScalarField& a, const ScalarField& b);
/// Face quadrature: interior faces weigh hx*hy, boundary faces half of that.
double dot(const VelocityField& a, const VelocityField& b);
/// Face-length weighted boundary sum.
double dot(const BoundaryTrace& a, const BoundaryTrace& b);
double norm(const ScalarField& a);
double norm(const VelocityField& a);
double max_abs(const ScalarField& a);
double max_abs(const VelocityField& a);
bool all_finite(const ScalarField& a);
bool all_finite(const VelocityField& a);
double mean(const ScalarField& a);

// --- stencil operators ---------------------------------------------------

/// 5-point Laplacian with mirror (zero-flux) ghost cells.
ScalarField laplacian_neumann(const ScalarField& f);

/// Cell-centered MAC divergence using every face, boundary faces included.
ScalarField divergence(const VelocityField& u);

/// Face-normal differences on interior faces; boundary faces are set to zero,
/// which makes this the negative transpose of `divergence` on fields that
/// vanish on the boundary.
VelocityField gradient_to_faces(const ScalarField& f);

/// Outward normal derivative at every boundary face center from a one-sided
/// second-order difference through the first three cell centers.
BoundaryTrace normal_derivative_trace(const ScalarField& f);

/// Outward normal derivative of each velocity component at boundary face
/// centers. The tangential components use the supplied wall values (the
/// velocity at each face center, projected on the face tangent); the normal
/// components use the stored boundary faces. Both are second-order one-sided.
VectorTrace normal_derivative_trace(const VelocityField& u, const BoundaryTrace& tangential_wall);

/// Same with homogeneous tangential wall values.
VectorTrace normal_derivative_trace(const VelocityField& u);

/// Outward normal derivative of a velocity that vanishes on the wall, taken
/// between the wall and the nearest interior unknown of each component: the
/// normal component at distance h, the tangential one (averaged to the face
/// center) at distance h/2. This is the difference the viscous stencil sees.
VectorTrace wall_derivative_trace(const VelocityField& u);

/// Value of the cell adjacent to each boundary face (constant extrapolation).
BoundaryTrace adjacent_cell_trace(const ScalarField& f);

}  // namespace chns
