#include "chns/control.hpp"

#include <algorithm>
#include <cmath>

#include "chns/error.hpp"

namespace chns {

BoundaryControl BoundaryControl::zeros(const Grid& g, std::vector<double> nodes) {
    BoundaryControl h;
    const std::size_t m = nodes.size();
    h.time_nodes = std::move(nodes);
    h.tangential.assign(m, BoundaryTrace(g));
    h.normal.assign(m, BoundaryTrace(g));
    return h;
}

BoundaryControl BoundaryControl::zeros(const Grid& g, double dt, int steps) {
    std::vector<double> nodes(static_cast<std::size_t>(steps + 1));
    for (int n = 0; n <= steps; ++n) nodes[static_cast<std::size_t>(n)] = n * dt;
    return zeros(g, std::move(nodes));
}

double BoundaryControl::net_flux(int n) const {
    const BoundaryTrace& nt = normal[static_cast<std::size_t>(n)];
    double s = 0.0;
    for (int f = 0; f < nt.size(); ++f) s += nt.grid.face(f).length * nt[f];
    return s;
}

BoundaryControl& BoundaryControl::axpy(double a, const BoundaryControl& o) {
    require_same_nodes(*this, o);
    for (std::size_t n = 0; n < time_nodes.size(); ++n) {
        for (std::size_t f = 0; f < tangential[n].values.size(); ++f) {
            tangential[n].values[f] += a * o.tangential[n].values[f];
            normal[n].values[f] += a * o.normal[n].values[f];
        }
    }
    return *this;
}

BoundaryControl& BoundaryControl::operator*=(double a) {
    for (auto& t : tangential)
        for (auto& x : t.values) x *= a;
    for (auto& t : normal)
        for (auto& x : t.values) x *= a;
    return *this;
}

std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
    const std::size_t m = nodes.size();
    std::vector<double> w(m, 0.0);
    for (std::size_t n = 0; n + 1 < m; ++n) {
        const double d = nodes[n + 1] - nodes[n];
        w[n] += 0.5 * d;
        w[n + 1] += 0.5 * d;
    }
    return w;
}

void require_same_nodes(const BoundaryControl& a, const BoundaryControl& b) {
    if (a.time_nodes.size() != b.time_nodes.size())
        throw TimeNodeMismatch("controls have different node counts");
    for (std::size_t n = 0; n < a.time_nodes.size(); ++n)
        if (std::abs(a.time_nodes[n] - b.time_nodes[n]) > 1e-12 * (1.0 + std::abs(a.time_nodes[n])))
            throw TimeNodeMismatch("controls have different time nodes");
    if (!a.time_nodes.empty() && !(a.grid() == b.grid()))
        throw ShapeMismatch("controls live on different grids");
}

double dot(const BoundaryControl& a, const BoundaryControl& b) {
    require_same_nodes(a, b);
    const auto w = trapezoid_weights(a.time_nodes);
    double s = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n)
        s += w[n] * (dot(a.tangential[n], b.tangential[n]) + dot(a.normal[n], b.normal[n]));
    return s;
}

double norm(const BoundaryControl& a) { return std::sqrt(dot(a, a)); }

double max_abs(const BoundaryControl& a) {
    double m = 0.0;
    for (const auto& t : a.tangential)
        for (double x : t.values) m = std::max(m, std::abs(x));
    for (const auto& t : a.normal)
        for (double x : t.values) m = std::max(m, std::abs(x));
    return m;
}

WallData wall_data(const BoundaryTrace& t) {
    const Grid& g = t.grid;
    WallData w;
    w.bottom.assign(static_cast<std::size_t>(g.nx + 1), 0.0);
    w.top.assign(static_cast<std::size_t>(g.nx + 1), 0.0);
    w.left.assign(static_cast<std::size_t>(g.ny + 1), 0.0);
    w.right.assign(static_cast<std::size_t>(g.ny + 1), 0.0);
    // bottom tangent is +x, top -x, right +y, left -y
    for (int i = 1; i < g.nx; ++i) {
        w.bottom[static_cast<std::size_t>(i)] =
            0.5 * (t[g.face_id(Edge::bottom, i - 1)] + t[g.face_id(Edge::bottom, i)]);
        w.top[static_cast<std::size_t>(i)] =
            -0.5 * (t[g.face_id(Edge::top, i - 1)] + t[g.face_id(Edge::top, i)]);
    }
    for (int j = 1; j < g.ny; ++j) {
        w.right[static_cast<std::size_t>(j)] =
            0.5 * (t[g.face_id(Edge::right, j - 1)] + t[g.face_id(Edge::right, j)]);
        w.left[static_cast<std::size_t>(j)] =
            -0.5 * (t[g.face_id(Edge::left, j - 1)] + t[g.face_id(Edge::left, j)]);
    }
    return w;
}

WallData zero_wall(const Grid& g) { return wall_data(BoundaryTrace(g)); }

void set_normal_faces(VelocityField& u, const BoundaryTrace& nt) {
    const Grid& g = u.grid();
    for (int i = 0; i < g.nx; ++i) {
        u.uy(i, 0) = -nt[g.face_id(Edge::bottom, i)];
        u.uy(i, g.ny) = nt[g.face_id(Edge::top, i)];
    }
    for (int j = 0; j < g.ny; ++j) {
        u.ux(0, j) = -nt[g.face_id(Edge::left, j)];
        u.ux(g.nx, j) = nt[g.face_id(Edge::right, j)];
    }
}

BoundaryTrace normal_faces(const VelocityField& u) {
    const Grid& g = u.grid();
    BoundaryTrace nt(g);
    for (int i = 0; i < g.nx; ++i) {
        nt[g.face_id(Edge::bottom, i)] = -u.uy(i, 0);
        nt[g.face_id(Edge::top, i)] = u.uy(i, g.ny);
    }
    for (int j = 0; j < g.ny; ++j) {
        nt[g.face_id(Edge::left, j)] = -u.ux(0, j);
        nt[g.face_id(Edge::right, j)] = u.ux(g.nx, j);
    }
    return nt;
}

}  // namespace chns
