#include "nsac/operators.hpp"

#include <cmath>

#include "nsac/errors.hpp"

namespace nsac {
namespace {

Index3 strides(const Index3& e) { return {1, e[0], e[0] * e[1]}; }

std::size_t lin(const Index3& idx, const Index3& s) {
    return static_cast<std::size_t>(idx[0]) * s[0] + static_cast<std::size_t>(idx[1]) * s[1] +
           static_cast<std::size_t>(idx[2]) * s[2];
}

template <class F>
void for_each(const Index3& e, F&& f) {
    Index3 idx{};
    for (idx[2] = 0; idx[2] < e[2]; ++idx[2])
        for (idx[1] = 0; idx[1] < e[1]; ++idx[1])
            for (idx[0] = 0; idx[0] < e[0]; ++idx[0]) f(idx);
}

bool on_boundary(const Grid& g, int axis, const Index3& face) { return face[axis] == 0 || face[axis] == g.n[axis]; }

}  // namespace

FaceVectorField gradient(const ScalarField& c) {
    const Grid& g = c.grid();
    FaceVectorField out(g, VectorBC::dirichlet_zero);
    const Index3 cs = strides(g.n);
    for (int a = 0; a < g.dim; ++a) {
        auto& o = out.component(a);
        const Index3 e = g.face_extents(a);
        const Index3 fs = strides(e);
        const double inv_h = 1.0 / g.h[a];
        for_each(e, [&](const Index3& f) {
            if (on_boundary(g, a, f)) return;
            const std::size_t right = lin(f, cs);
            o[lin(f, fs)] = (c[right] - c[right - cs[a]]) * inv_h;
        });
    }
    return out;
}

ScalarField divergence(const FaceVectorField& v) {
    const Grid& g = v.grid();
    ScalarField out(g, 0.0, ScalarBC::none);
    for (int a = 0; a < g.dim; ++a) {
        const auto& x = v.component(a);
        const Index3 fs = strides(g.face_extents(a));
        const double inv_h = 1.0 / g.h[a];
        std::size_t ci = 0;
        for_each(g.n, [&](const Index3& c) {
            const std::size_t lo = lin(c, fs);
            out[ci++] += (x[lo + fs[a]] - x[lo]) * inv_h;
        });
    }
    return out;
}

ScalarField laplacian(const ScalarField& c) {
    // Same floating-point expression as divergence(gradient(c)): per axis the
    // face fluxes ((c_R - c_L) * inv_h) are differenced and scaled by inv_h,
    // with the boundary flux exactly zero.
    const Grid& g = c.grid();
    ScalarField out(g, 0.0, ScalarBC::none);
    const Index3 cs = strides(g.n);
    for (int a = 0; a < g.dim; ++a) {
        const double inv_h = 1.0 / g.h[a];
        std::size_t ci = 0;
        for_each(g.n, [&](const Index3& idx) {
            const double hi = idx[a] + 1 < g.n[a] ? (c[ci + cs[a]] - c[ci]) * inv_h : 0.0;
            const double lo = idx[a] > 0 ? (c[ci] - c[ci - cs[a]]) * inv_h : 0.0;
            out[ci] += (hi - lo) * inv_h;
            ++ci;
        });
    }
    return out;
}

double integrate(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * f.grid().cell_volume();
}

double face_inner(const FaceVectorField& a, const FaceVectorField& b) {
    require_same_grid(a.grid(), b.grid(), "face_inner");
    const Grid& g = a.grid();
    double total = 0.0;
    for (int ax = 0; ax < g.dim; ++ax) {
        const auto& x = a.component(ax);
        const auto& y = b.component(ax);
        const Index3 e = g.face_extents(ax);
        double s = 0.0;
        std::size_t fi = 0;
        for_each(e, [&](const Index3& f) {
            const double w = on_boundary(g, ax, f) ? 0.5 : 1.0;
            s += w * x[fi] * y[fi];
            ++fi;
        });
        total += s;
    }
    return total * g.cell_volume();
}

ScalarField cell_component(const FaceVectorField& v, int axis) {
    const Grid& g = v.grid();
    ScalarField out(g, 0.0, ScalarBC::none);
    const auto& x = v.component(axis);
    const Index3 fs = strides(g.face_extents(axis));
    std::size_t ci = 0;
    for_each(g.n, [&](const Index3& c) {
        const std::size_t lo = lin(c, fs);
        out[ci++] = 0.5 * (x[lo] + x[lo + fs[axis]]);
    });
    return out;
}

ScalarField cell_magnitude_squared(const FaceVectorField& v) {
    const Grid& g = v.grid();
    ScalarField out(g, 0.0, ScalarBC::none);
    for (int a = 0; a < g.dim; ++a) {
        const auto& x = v.component(a);
        const Index3 fs = strides(g.face_extents(a));
        std::size_t ci = 0;
        for_each(g.n, [&](const Index3& c) {
            const std::size_t lo = lin(c, fs);
            const double l = x[lo];
            const double r = x[lo + fs[a]];
            out[ci++] += 0.5 * (l * l + r * r);
        });
    }
    return out;
}

FaceVectorField face_average(const ScalarField& c) {
    const Grid& g = c.grid();
    FaceVectorField out(g, VectorBC::dirichlet_zero);
    const Index3 cs = strides(g.n);
    for (int a = 0; a < g.dim; ++a) {
        auto& o = out.component(a);
        const Index3 e = g.face_extents(a);
        std::size_t fi = 0;
        for_each(e, [&](const Index3& f) {
            if (!on_boundary(g, a, f)) {
                const std::size_t right = lin(f, cs);
                o[fi] = 0.5 * (c[right - cs[a]] + c[right]);
            }
            ++fi;
        });
    }
    return out;
}

ScalarField advect_scalar(const FaceVectorField& u, const ScalarField& c) {
    require_same_grid(u.grid(), c.grid(), "advect_scalar");
    const Grid& g = c.grid();
    const FaceVectorField gc = gradient(c);
    ScalarField out(g, 0.0, ScalarBC::none);
    for (int a = 0; a < g.dim; ++a) {
        const auto& x = u.component(a);
        const auto& d = gc.component(a);
        const Index3 fs = strides(g.face_extents(a));
        std::size_t ci = 0;
        for_each(g.n, [&](const Index3& idx) {
            const std::size_t lo = lin(idx, fs);
            const std::size_t hi = lo + fs[a];
            out[ci++] += 0.5 * (x[lo] * d[lo] + x[hi] * d[hi]);
        });
    }
    return out;
}

FaceVectorField vector_laplacian(const FaceVectorField& v) {
    const Grid& g = v.grid();
    FaceVectorField out(g, VectorBC::dirichlet_zero);
    for (int a = 0; a < g.dim; ++a) {
        const auto& x = v.component(a);
        auto& o = out.component(a);
        const Index3 e = g.face_extents(a);
        const Index3 fs = strides(e);
        std::size_t fi = 0;
        for_each(e, [&](const Index3& f) {
            if (on_boundary(g, a, f)) {
                ++fi;
                return;
            }
            const double center = x[fi];
            double acc = 0.0;
            for (int b = 0; b < g.dim; ++b) {
                const double inv_h2 = 1.0 / (g.h[b] * g.h[b]);
                double plus, minus;
                if (b == a) {
                    plus = x[fi + fs[b]];
                    minus = x[fi - fs[b]];
                } else {
                    plus = f[b] + 1 < g.n[b] ? x[fi + fs[b]] : -center;
                    minus = f[b] > 0 ? x[fi - fs[b]] : -center;
                }
                acc += (plus - 2.0 * center + minus) * inv_h2;
            }
            o[fi] = acc;
            ++fi;
        });
    }
    return out;
}

FaceVectorField skew_advection(const FaceVectorField& w, const FaceVectorField& v) {
    require_same_grid(w.grid(), v.grid(), "skew_advection");
    const Grid& g = v.grid();
    FaceVectorField out(g, VectorBC::dirichlet_zero);
    for (int a = 0; a < g.dim; ++a) {
        const auto& x = v.component(a);
        const auto& wa = w.component(a);
        auto& o = out.component(a);
        const Index3 e = g.face_extents(a);
        const Index3 fs = strides(e);
        std::size_t fi = 0;
        for_each(e, [&](const Index3& f) {
            if (on_boundary(g, a, f)) {
                ++fi;
                return;
            }
            const double center = x[fi];
            double flux_div = 0.0;
            double vel_div = 0.0;
            for (int b = 0; b < g.dim; ++b) {
                const double inv_h = 1.0 / g.h[b];
                double plus, minus, w_plus, w_minus;
                if (b == a) {
                    plus = x[fi + fs[b]];
                    minus = x[fi - fs[b]];
                    w_plus = 0.5 * (wa[fi] + wa[fi + fs[b]]);
                    w_minus = 0.5 * (wa[fi - fs[b]] + wa[fi]);
                } else {
                    plus = f[b] + 1 < g.n[b] ? x[fi + fs[b]] : -center;
                    minus = f[b] > 0 ? x[fi - fs[b]] : -center;
                    // w_b on the two edges of this control volume normal to b:
                    // average of the b-faces in the cells on either side along a.
                    const auto& wb = w.component(b);
                    const Index3 bs = strides(g.face_extents(b));
                    Index3 left = f;
                    left[a] -= 1;
                    const std::size_t l0 = lin(left, bs);
                    const std::size_t r0 = l0 + bs[a];
                    w_minus = 0.5 * (wb[l0] + wb[r0]);
                    w_plus = 0.5 * (wb[l0 + bs[b]] + wb[r0 + bs[b]]);
                }
                flux_div += (w_plus * 0.5 * (center + plus) - w_minus * 0.5 * (minus + center)) * inv_h;
                vel_div += (w_plus - w_minus) * inv_h;
            }
            o[fi] = flux_div - 0.5 * center * vel_div;
            ++fi;
        });
    }
    return out;
}

Index3 edge_extents(const Grid& g, int a, int b) {
    Index3 e = g.n;
    e[a] += 1;
    e[b] += 1;
    return e;
}

double edge_weight(const Grid& g, int a, int b, const Index3& e) {
    double w = 1.0;
    if (e[a] == 0 || e[a] == g.n[a]) w *= 0.5;
    if (e[b] == 0 || e[b] == g.n[b]) w *= 0.5;
    return w;
}

double edge_average(const Grid& g, const std::vector<double>& x, int normal, int along, const Index3& e,
                    double ghost_sign) {
    const Index3 fs = strides(g.face_extents(normal));
    Index3 hi = e;  // cell e[along] along `along`
    const int m = g.n[along];
    const bool has_lo = e[along] > 0;
    const bool has_hi = e[along] < m;
    if (has_lo && has_hi) {
        const std::size_t h = lin(hi, fs);
        return 0.5 * (x[h - fs[along]] + x[h]);
    }
    if (has_hi) return 0.5 * (1.0 + ghost_sign) * x[lin(hi, fs)];
    hi[along] = m - 1;
    return 0.5 * (1.0 + ghost_sign) * x[lin(hi, fs)];
}

double edge_difference(const Grid& g, const std::vector<double>& x, int normal, int along, const Index3& e,
                       double ghost_sign) {
    const Index3 fs = strides(g.face_extents(normal));
    Index3 hi = e;
    const int m = g.n[along];
    const double inv_h = 1.0 / g.h[along];
    const bool has_lo = e[along] > 0;
    const bool has_hi = e[along] < m;
    if (has_lo && has_hi) {
        const std::size_t h = lin(hi, fs);
        return (x[h] - x[h - fs[along]]) * inv_h;
    }
    if (has_hi) {
        const double inner = x[lin(hi, fs)];
        return (inner - ghost_sign * inner) * inv_h;
    }
    hi[along] = m - 1;
    const double inner = x[lin(hi, fs)];
    return (ghost_sign * inner - inner) * inv_h;
}

std::vector<double> edge_shear_squared(const FaceVectorField& v, int a, int b) {
    const Grid& g = v.grid();
    const Index3 e = edge_extents(g, a, b);
    std::vector<double> out(static_cast<std::size_t>(e[0]) * e[1] * e[2]);
    std::size_t i = 0;
    for_each(e, [&](const Index3& idx) {
        const double s = edge_difference(g, v.component(a), a, b, idx, -1.0) +
                         edge_difference(g, v.component(b), b, a, idx, -1.0);
        out[i++] = s * s;
    });
    return out;
}

double dirichlet_energy(const FaceVectorField& v) {
    const Grid& g = v.grid();
    double total = 0.0;
    // normal derivatives at cell centers
    for (int a = 0; a < g.dim; ++a) {
        const auto& x = v.component(a);
        const Index3 fs = strides(g.face_extents(a));
        const double inv_h = 1.0 / g.h[a];
        for_each(g.n, [&](const Index3& c) {
            const std::size_t lo = lin(c, fs);
            const double d = (x[lo + fs[a]] - x[lo]) * inv_h;
            total += d * d;
        });
    }
    // tangential derivatives at edges
    for (int a = 0; a < g.dim; ++a)
        for (int b = 0; b < g.dim; ++b) {
            if (a == b) continue;
            for_each(edge_extents(g, a, b), [&](const Index3& e) {
                const double d = edge_difference(g, v.component(a), a, b, e, -1.0);
                total += edge_weight(g, a, b, e) * d * d;
            });
        }
    return total * g.cell_volume();
}

}  // namespace nsac
