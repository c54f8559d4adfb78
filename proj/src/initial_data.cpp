#include "nsac/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nsac/errors.hpp"
#include "nsac/operators.hpp"

namespace nsac {
namespace {

constexpr double pi = std::numbers::pi;

double sq(double x) { return x * x; }

int refinement_ratio(const Grid& fine, const Grid& coarse, int axis) {
    if (fine.dim != coarse.dim || fine.length[axis] != coarse.length[axis] || coarse.n[axis] <= 0 ||
        fine.n[axis] % coarse.n[axis] != 0) {
        throw ValidationError("restriction: coarse grid must divide the fine grid over the same box");
    }
    return fine.n[axis] / coarse.n[axis];
}

}  // namespace

State equilibrium_state(const Grid& g, double c_value) { return make_rest_state(g, c_value); }

State bubble_state(const Grid& g, double eps, double radius) {
    if (!(eps > 0.0) || !(radius > 0.0)) throw ValidationError("bubble: eps and radius must be positive");
    State s = make_rest_state(g, 0.0);
    double side = g.length[0];
    for (int a = 1; a < g.dim; ++a) side = std::min(side, g.length[a]);
    const double r0 = radius * side;
    const double width = std::sqrt(2.0) * eps;
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) {
                double r2 = sq(g.center(0, i) - 0.5 * g.length[0]) + sq(g.center(1, j) - 0.5 * g.length[1]);
                if (g.dim == 3) r2 += sq(g.center(2, k) - 0.5 * g.length[2]);
                s.c.at(i, j, k) = std::tanh((std::sqrt(r2) - r0) / width);
            }
    return s;
}

State spinodal_state(const Grid& g, std::uint64_t seed, double amplitude) {
    if (!(amplitude >= 0.0)) throw ValidationError("spinodal: amplitude must be nonnegative");
    State s = make_rest_state(g, 0.0);
    std::mt19937_64 rng(seed);
    for (double& v : s.c.values()) {
        const double u01 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v = amplitude * (2.0 * u01 - 1.0);
    }
    return s;
}

FaceVectorField velocity_from_stream(const Grid& g, const std::function<double(double, double, double)>& psi) {
    FaceVectorField u(g, VectorBC::dirichlet_zero);
    const auto zc = [&](int k) { return g.dim == 3 ? g.center(2, k) : 0.0; };
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i <= g.n[0]; ++i) {
                const double x = g.node(0, i);
                u.at(0, i, j, k) = (psi(x, g.node(1, j + 1), zc(k)) - psi(x, g.node(1, j), zc(k))) / g.h[1];
            }
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) {
                const double y = g.node(1, j);
                u.at(1, i, j, k) = -(psi(g.node(0, i + 1), y, zc(k)) - psi(g.node(0, i), y, zc(k))) / g.h[0];
            }
    // Walls carry psi = 0 up to roundoff in sin(pi); pin them exactly.
    u.zero_boundary_normal();
    return u;
}

State vortex_state(const Grid& g, double amplitude, double c_value) {
    State s = make_rest_state(g, c_value);
    const double lx = g.length[0], ly = g.length[1], lz = g.length[2];
    const bool three = g.dim == 3;
    s.u = velocity_from_stream(g, [&](double x, double y, double z) {
        const double zf = three ? sq(std::sin(pi * z / lz)) : 1.0;
        return amplitude / pi * sq(std::sin(pi * x / lx)) * sq(std::sin(pi * y / ly)) * zf;
    });
    return s;
}

FaceVectorField perturbation_direction(const Grid& g) {
    const double lx = g.length[0], ly = g.length[1], lz = g.length[2];
    const bool three = g.dim == 3;
    FaceVectorField v = velocity_from_stream(g, [&](double x, double y, double z) {
        const double zf = three ? sq(std::sin(pi * z / lz)) : 1.0;
        return sq(std::sin(2.0 * pi * x / lx)) * sq(std::sin(pi * y / ly)) * zf;
    });
    const double energy = 0.5 * integrate(cell_magnitude_squared(v));
    v *= 1.0 / std::sqrt(energy);
    return v;
}

ScalarField restrict_scalar(const ScalarField& fine, const Grid& coarse) {
    const Grid& f = fine.grid();
    Index3 r{1, 1, 1};
    for (int a = 0; a < f.dim; ++a) r[a] = refinement_ratio(f, coarse, a);
    ScalarField out(coarse, 0.0, fine.bc());
    const double w = 1.0 / (static_cast<double>(r[0]) * r[1] * r[2]);
    for (int k = 0; k < f.n[2]; ++k)
        for (int j = 0; j < f.n[1]; ++j)
            for (int i = 0; i < f.n[0]; ++i) out.at(i / r[0], j / r[1], k / r[2]) += w * fine.at(i, j, k);
    return out;
}

FaceVectorField restrict_faces(const FaceVectorField& fine, const Grid& coarse) {
    const Grid& f = fine.grid();
    Index3 r{1, 1, 1};
    for (int a = 0; a < f.dim; ++a) r[a] = refinement_ratio(f, coarse, a);
    FaceVectorField out(coarse, fine.bc());
    for (int a = 0; a < f.dim; ++a) {
        // Only fine faces that coincide with coarse faces contribute.
        double w = 1.0;
        for (int b = 0; b < f.dim; ++b)
            if (b != a) w /= r[b];
        const Index3 e = f.face_extents(a);
        for (int k = 0; k < e[2]; ++k)
            for (int j = 0; j < e[1]; ++j)
                for (int i = 0; i < e[0]; ++i) {
                    const Index3 idx{i, j, k};
                    if (idx[a] % r[a] != 0) continue;
                    Index3 c{i / r[0], j / r[1], k / r[2]};
                    out.at(a, c[0], c[1], c[2]) += w * fine.at(a, i, j, k);
                }
    }
    return out;
}

State restrict_state(const State& fine, const Grid& coarse) {
    State s;
    s.t = fine.t;
    s.u = restrict_faces(fine.u, coarse);
    s.c = restrict_scalar(fine.c, coarse);
    s.p = restrict_scalar(fine.p, coarse);
    return s;
}

// ---------------------------------------------------------------------------

double ManufacturedSolution::g(double t) { return 1.0 + 0.5 * std::sin(pi * t); }
double ManufacturedSolution::dg(double t) { return 0.5 * pi * std::cos(pi * t); }

void ManufacturedSolution::require_unit_square(const Grid& grid) {
    if (grid.dim != 2 || grid.length[0] != 1.0 || grid.length[1] != 1.0) {
        throw ValidationError("manufactured solution is defined on the 2D unit square only");
    }
}

namespace {

struct Pointwise {
    double u1, u2, c, p;
    double u1x, u1y, u2x, u2y;
    double lap_u1, lap_u2;
    double cx, cy, lap_c;
    double du1, du2, dc;  // time derivatives
};

Pointwise evaluate(const ManufacturedSolution& m, double x, double y, double t) {
    const double g = ManufacturedSolution::g(t), dg = ManufacturedSolution::dg(t);
    const double sx = std::sin(pi * x), cx = std::cos(pi * x);
    const double sy = std::sin(pi * y), cy = std::cos(pi * y);
    const double s2x = std::sin(2 * pi * x), c2x = std::cos(2 * pi * x);
    const double s2y = std::sin(2 * pi * y), c2y = std::cos(2 * pi * y);
    Pointwise v{};
    const double fu1 = sx * sx * s2y;
    const double fu2 = -s2x * sy * sy;
    v.u1 = m.A * g * fu1;
    v.u2 = m.A * g * fu2;
    v.du1 = m.A * dg * fu1;
    v.du2 = m.A * dg * fu2;
    v.u1x = m.A * g * pi * s2x * s2y;
    v.u1y = m.A * g * 2 * pi * sx * sx * c2y;
    v.u2x = -m.A * g * 2 * pi * c2x * sy * sy;
    v.u2y = -m.A * g * pi * s2x * s2y;
    v.lap_u1 = m.A * g * pi * pi * s2y * (2 * c2x - 4 * sx * sx);
    v.lap_u2 = -m.A * g * pi * pi * s2x * (2 * c2y - 4 * sy * sy);
    v.c = m.B * g * cx * cy;
    v.dc = m.B * dg * cx * cy;
    v.cx = -m.B * g * pi * sx * cy;
    v.cy = -m.B * g * pi * cx * sy;
    v.lap_c = -2 * pi * pi * v.c;
    v.p = m.P * g * cx * cy;
    return v;
}

// Momentum residual u_t + u.grad u + grad p - (nu/2) Lap u + eps Lap c grad c.
std::array<double, 2> momentum_source(const ManufacturedSolution& m, double x, double y, double t) {
    const Pointwise v = evaluate(m, x, y, t);
    const double g = ManufacturedSolution::g(t);
    const double px = -m.P * g * pi * std::sin(pi * x) * std::cos(pi * y);
    const double py = -m.P * g * pi * std::cos(pi * x) * std::sin(pi * y);
    const double nu2 = 0.5 * m.params.nu, eps = m.params.eps;
    return {v.du1 + v.u1 * v.u1x + v.u2 * v.u1y + px - nu2 * v.lap_u1 + eps * v.lap_c * v.cx,
            v.du2 + v.u1 * v.u2x + v.u2 * v.u2y + py - nu2 * v.lap_u2 + eps * v.lap_c * v.cy};
}

}  // namespace

FaceVectorField ManufacturedSolution::velocity(const Grid& grid, double t) const {
    require_unit_square(grid);
    FaceVectorField u(grid, VectorBC::dirichlet_zero);
    for (int j = 0; j < grid.n[1]; ++j)
        for (int i = 0; i <= grid.n[0]; ++i) u.at(0, i, j) = evaluate(*this, grid.node(0, i), grid.center(1, j), t).u1;
    for (int j = 0; j <= grid.n[1]; ++j)
        for (int i = 0; i < grid.n[0]; ++i) u.at(1, i, j) = evaluate(*this, grid.center(0, i), grid.node(1, j), t).u2;
    u.zero_boundary_normal();
    return u;
}

ScalarField ManufacturedSolution::concentration(const Grid& grid, double t) const {
    require_unit_square(grid);
    ScalarField c(grid, 0.0, ScalarBC::neumann_zero);
    for (int j = 0; j < grid.n[1]; ++j)
        for (int i = 0; i < grid.n[0]; ++i) c.at(i, j) = evaluate(*this, grid.center(0, i), grid.center(1, j), t).c;
    return c;
}

ScalarField ManufacturedSolution::pressure(const Grid& grid, double t) const {
    require_unit_square(grid);
    ScalarField p(grid, 0.0, ScalarBC::none);
    for (int j = 0; j < grid.n[1]; ++j)
        for (int i = 0; i < grid.n[0]; ++i) p.at(i, j) = evaluate(*this, grid.center(0, i), grid.center(1, j), t).p;
    return p;
}

State ManufacturedSolution::initial_state(const Grid& grid) const {
    require_unit_square(grid);
    State s = make_rest_state(grid, 0.0);
    const double amp = A * g(0.0) / pi;
    s.u = velocity_from_stream(grid, [amp](double x, double y, double) {
        return amp * sq(std::sin(pi * x)) * sq(std::sin(pi * y));
    });
    s.c = concentration(grid, 0.0);
    s.p = pressure(grid, 0.0);
    return s;
}

Forcing ManufacturedSolution::forcing(const Grid& grid) const {
    require_unit_square(grid);
    const ManufacturedSolution m = *this;
    Forcing f;
    f.momentum = [m, grid](double t, FaceVectorField& out) {
        for (int j = 0; j < grid.n[1]; ++j)
            for (int i = 1; i < grid.n[0]; ++i) out.at(0, i, j) = momentum_source(m, grid.node(0, i), grid.center(1, j), t)[0];
        for (int j = 1; j < grid.n[1]; ++j)
            for (int i = 0; i < grid.n[0]; ++i) out.at(1, i, j) = momentum_source(m, grid.center(0, i), grid.node(1, j), t)[1];
    };
    f.concentration = [m, grid](double t, ScalarField& out) {
        const double eps = m.params.eps;
        for (int j = 0; j < grid.n[1]; ++j)
            for (int i = 0; i < grid.n[0]; ++i) {
                const Pointwise v = evaluate(m, grid.center(0, i), grid.center(1, j), t);
                out.at(i, j) = v.dc + v.u1 * v.cx + v.u2 * v.cy - eps * v.lap_c + m.well.dF(v.c) / eps;
            }
    };
    return f;
}

}  // namespace nsac
