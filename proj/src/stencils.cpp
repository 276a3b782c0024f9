#include "chns/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "chns/error.hpp"

namespace chns {

Operators::Operators(const Grid& g)
    : grid(g),
      ux(make_axis_basis(g.nx, g.hx(), Closure::dirichlet_node),
         make_axis_basis(g.ny, g.hy(), Closure::dirichlet_ghost)),
      uy(make_axis_basis(g.nx, g.hx(), Closure::dirichlet_ghost),
         make_axis_basis(g.ny, g.hy(), Closure::dirichlet_node)),
      cell(make_axis_basis(g.nx, g.hx(), Closure::neumann), make_axis_basis(g.ny, g.hy(), Closure::neumann)) {}

VelocityField velocity_laplacian(const VelocityField& u, const WallData& wall) {
    const Grid& g = u.grid();
    const int nx = g.nx, ny = g.ny;
    const double ax = 1.0 / (g.hx() * g.hx());
    const double ay = 1.0 / (g.hy() * g.hy());
    VelocityField out(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double c = u.ux(i, j);
            const double s = j > 0 ? u.ux(i, j - 1) : 2.0 * wall.bottom[static_cast<std::size_t>(i)] - c;
            const double n = j < ny - 1 ? u.ux(i, j + 1) : 2.0 * wall.top[static_cast<std::size_t>(i)] - c;
            out.ux(i, j) = ax * (u.ux(i - 1, j) - 2.0 * c + u.ux(i + 1, j)) + ay * (s - 2.0 * c + n);
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double c = u.uy(i, j);
            const double w = i > 0 ? u.uy(i - 1, j) : 2.0 * wall.left[static_cast<std::size_t>(j)] - c;
            const double e = i < nx - 1 ? u.uy(i + 1, j) : 2.0 * wall.right[static_cast<std::size_t>(j)] - c;
            out.uy(i, j) = ax * (w - 2.0 * c + e) + ay * (u.uy(i, j - 1) - 2.0 * c + u.uy(i, j + 1));
        }
    return out;
}

VelocityField convect(const VelocityField& a, const VelocityField& b, const WallData& wb) {
    const Grid& g = a.grid();
    const int nx = g.nx, ny = g.ny;
    const double rx = 1.0 / g.hx(), ry = 1.0 / g.hy();
    VelocityField out(g);
    // x momentum on interior x faces
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double ae = 0.5 * (a.ux(i, j) + a.ux(i + 1, j));
            const double be = 0.5 * (b.ux(i, j) + b.ux(i + 1, j));
            const double aw = 0.5 * (a.ux(i - 1, j) + a.ux(i, j));
            const double bw = 0.5 * (b.ux(i - 1, j) + b.ux(i, j));
            const double an = 0.5 * (a.uy(i - 1, j + 1) + a.uy(i, j + 1));
            const double bn = j < ny - 1 ? 0.5 * (b.ux(i, j) + b.ux(i, j + 1)) : wb.top[static_cast<std::size_t>(i)];
            const double as = 0.5 * (a.uy(i - 1, j) + a.uy(i, j));
            const double bs = j > 0 ? 0.5 * (b.ux(i, j - 1) + b.ux(i, j)) : wb.bottom[static_cast<std::size_t>(i)];
            out.ux(i, j) = (ae * be - aw * bw) * rx + (an * bn - as * bs) * ry;
        }
    // y momentum on interior y faces
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double an = 0.5 * (a.uy(i, j) + a.uy(i, j + 1));
            const double bn = 0.5 * (b.uy(i, j) + b.uy(i, j + 1));
            const double as = 0.5 * (a.uy(i, j - 1) + a.uy(i, j));
            const double bs = 0.5 * (b.uy(i, j - 1) + b.uy(i, j));
            const double ae = 0.5 * (a.ux(i + 1, j - 1) + a.ux(i + 1, j));
            const double be =
                i < nx - 1 ? 0.5 * (b.uy(i, j) + b.uy(i + 1, j)) : wb.right[static_cast<std::size_t>(j)];
            const double aw = 0.5 * (a.ux(i, j - 1) + a.ux(i, j));
            const double bw = i > 0 ? 0.5 * (b.uy(i - 1, j) + b.uy(i, j)) : wb.left[static_cast<std::size_t>(j)];
            out.uy(i, j) = (ae * be - aw * bw) * rx + (an * bn - as * bs) * ry;
        }
    return out;
}

VelocityField transpose_gradient_contract(const VelocityField& p, const VelocityField& u) {
    const Grid& g = u.grid();
    const int nx = g.nx, ny = g.ny;
    const double hx = g.hx(), hy = g.hy();
    auto cy = [&](int i, int j) { return 0.5 * (u.uy(i, j) + u.uy(i, j + 1)); };
    auto cx = [&](int i, int j) { return 0.5 * (u.ux(i, j) + u.ux(i + 1, j)); };
    VelocityField out(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double dxux = (u.ux(i + 1, j) - u.ux(i - 1, j)) / (2.0 * hx);
            const double dxuy = (cy(i, j) - cy(i - 1, j)) / hx;
            const double py = 0.25 * (p.uy(i - 1, j) + p.uy(i, j) + p.uy(i - 1, j + 1) + p.uy(i, j + 1));
            out.ux(i, j) = p.ux(i, j) * dxux + py * dxuy;
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double dyuy = (u.uy(i, j + 1) - u.uy(i, j - 1)) / (2.0 * hy);
            const double dyux = (cx(i, j) - cx(i, j - 1)) / hy;
            const double px = 0.25 * (p.ux(i, j - 1) + p.ux(i + 1, j - 1) + p.ux(i, j) + p.ux(i + 1, j));
            out.uy(i, j) = px * dyux + p.uy(i, j) * dyuy;
        }
    return out;
}

ScalarField advect(const VelocityField& u, const ScalarField& f) {
    const Grid& g = u.grid();
    const int nx = g.nx, ny = g.ny;
    const double rx = 1.0 / g.hx(), ry = 1.0 / g.hy();
    auto fx = [&](int i, int j) {
        const double v = i == 0 ? f(0, j) : i == nx ? f(nx - 1, j) : 0.5 * (f(i - 1, j) + f(i, j));
        return u.ux(i, j) * v;
    };
    auto fy = [&](int i, int j) {
        const double v = j == 0 ? f(i, 0) : j == ny ? f(i, ny - 1) : 0.5 * (f(i, j - 1) + f(i, j));
        return u.uy(i, j) * v;
    };
    ScalarField out(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) out(i, j) = (fx(i + 1, j) - fx(i, j)) * rx + (fy(i, j + 1) - fy(i, j)) * ry;
    return out;
}

VelocityField capillary(const ScalarField& mu, const ScalarField& phi) {
    const Grid& g = mu.grid();
    const double rx = 1.0 / g.hx(), ry = 1.0 / g.hy();
    VelocityField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            out.ux(i, j) = 0.5 * (mu(i - 1, j) + mu(i, j)) * (phi(i, j) - phi(i - 1, j)) * rx;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.uy(i, j) = 0.5 * (mu(i, j - 1) + mu(i, j)) * (phi(i, j) - phi(i, j - 1)) * ry;
    return out;
}

ScalarField dot_gradient(const VelocityField& p, const ScalarField& gfield) {
    const Grid& g = p.grid();
    const VelocityField gr = gradient_to_faces(gfield);
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = 0.5 * (p.ux(i, j) * gr.ux(i, j) + p.ux(i + 1, j) * gr.ux(i + 1, j)) +
                        0.5 * (p.uy(i, j) * gr.uy(i, j) + p.uy(i, j + 1) * gr.uy(i, j + 1));
    return out;
}

ScalarField coupling_divergence(const VelocityField& p, const ScalarField& phi) {
    const Grid& g = p.grid();
    const int nx = g.nx, ny = g.ny;
    const double hx = g.hx(), hy = g.hy();
    // cell-centered factors; p vanishes on the walls, phi has mirror ghosts
    ScalarField px(g), py(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            px(i, j) = 0.5 * (p.ux(i, j) + p.ux(i + 1, j));
            py(i, j) = 0.5 * (p.uy(i, j) + p.uy(i, j + 1));
        }
    auto ph = [&](int i, int j) {
        i = std::clamp(i, 0, nx - 1);
        j = std::clamp(j, 0, ny - 1);
        return phi(i, j);
    };
    // dirichlet-ghost neighbours for cell-centered p components
    auto pxg = [&](int i, int j) {
        if (j < 0) return -px(i, 0);
        if (j >= ny) return -px(i, ny - 1);
        return px(i, j);
    };
    auto pyg = [&](int i, int j) {
        if (i < 0) return -py(0, j);
        if (i >= nx) return -py(nx - 1, j);
        return py(i, j);
    };
    ScalarField vx(g), vy(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double dxpx = (p.ux(i + 1, j) - p.ux(i, j)) / hx;
            const double dypy = (p.uy(i, j + 1) - p.uy(i, j)) / hy;
            const double dypx = (pxg(i, j + 1) - pxg(i, j - 1)) / (2.0 * hy);
            const double dxpy = (pyg(i + 1, j) - pyg(i - 1, j)) / (2.0 * hx);
            const double fx = (ph(i + 1, j) - ph(i - 1, j)) / (2.0 * hx);
            const double fy = (ph(i, j + 1) - ph(i, j - 1)) / (2.0 * hy);
            const double fxx = (ph(i + 1, j) - 2.0 * ph(i, j) + ph(i - 1, j)) / (hx * hx);
            const double fyy = (ph(i, j + 1) - 2.0 * ph(i, j) + ph(i, j - 1)) / (hy * hy);
            const double fxy =
                (ph(i + 1, j + 1) - ph(i - 1, j + 1) - ph(i + 1, j - 1) + ph(i - 1, j - 1)) / (4.0 * hx * hy);
            vx(i, j) = dxpx * fx + dxpy * fy + fxx * px(i, j) + fxy * py(i, j);
            vy(i, j) = dypx * fx + dypy * fy + fxy * px(i, j) + fyy * py(i, j);
        }
    VelocityField flux(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) flux.ux(i, j) = 0.5 * (vx(i - 1, j) + vx(i, j));
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) flux.uy(i, j) = 0.5 * (vy(i, j - 1) + vy(i, j));
    return divergence(flux);
}

namespace {

std::vector<double> gather_ux(const VelocityField& u) {
    const Grid& g = u.grid();
    std::vector<double> v(static_cast<std::size_t>((g.nx - 1) * g.ny));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) v[static_cast<std::size_t>(j * (g.nx - 1) + i - 1)] = u.ux(i, j);
    return v;
}

std::vector<double> gather_uy(const VelocityField& u) {
    const Grid& g = u.grid();
    std::vector<double> v(static_cast<std::size_t>(g.nx * (g.ny - 1)));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) v[static_cast<std::size_t>((j - 1) * g.nx + i)] = u.uy(i, j);
    return v;
}

void scatter_ux(VelocityField& u, const std::vector<double>& v) {
    const Grid& g = u.grid();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) u.ux(i, j) = v[static_cast<std::size_t>(j * (g.nx - 1) + i - 1)];
}

void scatter_uy(VelocityField& u, const std::vector<double>& v) {
    const Grid& g = u.grid();
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) u.uy(i, j) = v[static_cast<std::size_t>((j - 1) * g.nx + i)];
}

double max_interior(const VelocityField& u) {
    const Grid& g = u.grid();
    double m = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) m = std::max(m, std::abs(u.ux(i, j)));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) m = std::max(m, std::abs(u.uy(i, j)));
    return m;
}

void check_residual(double res, double scale, double lin_tol, const char* what) {
    if (!std::isfinite(res) || res > lin_tol * std::max(scale, 1e-300))
        throw LinearSolveFailure(std::string(what) + ": residual " + std::to_string(res) + " exceeds tolerance");
}

}  // namespace

VelocityField viscous_solve(const Operators& ops, const VelocityField& rhs, const BoundaryTrace& normal,
                            const WallData& wall, double c, double lin_tol) {
    const Grid& g = ops.grid;
    VelocityField v(g);
    set_normal_faces(v, normal);
    VelocityField r = rhs;
    r.axpy(c, velocity_laplacian(v, wall));
    auto sym = [c](double lam) { return 1.0 - c * lam; };
    std::vector<double> bx = gather_ux(r), by = gather_uy(r);
    ops.ux.solve(bx, bx, sym);
    ops.uy.solve(by, by, sym);
    scatter_ux(v, bx);
    scatter_uy(v, by);

    VelocityField res = v;
    res.axpy(-c, velocity_laplacian(v, wall));
    res -= rhs;
    res.zero_boundary_faces();
    const double scale = max_interior(rhs) + std::max(ops.ux.max_symbol(sym), ops.uy.max_symbol(sym)) * max_abs(v);
    check_residual(max_abs(res), scale, lin_tol, "viscous solve");
    return v;
}

ScalarField cahn_hilliard_solve(const Operators& ops, const ScalarField& rhs, double dt, double s,
                                double lin_tol) {
    auto sym = [dt, s](double lam) { return 1.0 + dt * (lam * lam - s * lam); };
    ScalarField f(rhs.grid());
    ops.cell.solve(rhs.values(), f.values(), sym);

    const ScalarField lf = laplacian_neumann(f);
    ScalarField res = f;
    res.axpy(dt, laplacian_neumann(lf));
    res.axpy(-dt * s, lf);
    res -= rhs;
    check_residual(max_abs(res), max_abs(rhs) + ops.cell.max_symbol(sym) * max_abs(f), lin_tol,
                   "Cahn-Hilliard solve");
    return f;
}

ScalarField poisson_neumann(const Operators& ops, const ScalarField& f, double lin_tol) {
    ScalarField rhs = f;
    const double m = mean(f);
    for (double& x : rhs.values()) x -= m;
    ScalarField psi(f.grid());
    auto sym = [](double lam) { return lam; };
    // the zero mode has lambda = 0 exactly; every other mode is bounded away
    ops.cell.solve(rhs.values(), psi.values(), sym, 1e-300);

    ScalarField res = laplacian_neumann(psi);
    res -= rhs;
    check_residual(max_abs(res), max_abs(rhs) + ops.cell.max_symbol(sym) * max_abs(psi), lin_tol,
                   "pressure Poisson solve");
    return psi;
}

Projection project_divergence_free(const Operators& ops, const VelocityField& ustar, double lin_tol,
                                   double flux_tol) {
    const Grid& g = ops.grid;
    const ScalarField d = divergence(ustar);
    const double flux = mean(d) * g.area();
    if (std::abs(flux) > flux_tol)
        throw CompatibilityViolation("net boundary flux " + std::to_string(flux) + " is not zero");
    Projection pr{ustar, poisson_neumann(ops, d, lin_tol)};
    pr.u.axpy(-1.0, gradient_to_faces(pr.psi));
    return pr;
}

}  // namespace chns
