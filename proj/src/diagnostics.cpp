#include "nsac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsac/errors.hpp"
#include "nsac/operators.hpp"

namespace nsac {
namespace {

Index3 strides(const Index3& e) { return {1, e[0], e[0] * e[1]}; }

template <class F>
void for_each(const Index3& e, F&& f) {
    Index3 idx{};
    for (idx[2] = 0; idx[2] < e[2]; ++idx[2])
        for (idx[1] = 0; idx[1] < e[1]; ++idx[1])
            for (idx[0] = 0; idx[0] < e[0]; ++idx[0]) f(idx);
}

double sum_of_squares(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values()) s += v * v;
    return s * f.grid().cell_volume();
}

// int sum_{i,j} X_i Y_j d_i Z_j. X and Y are face-located vectors whose
// tangential ghosts carry the given signs; Z is a no-slip velocity.
double triple_contraction(const FaceVectorField& X, double sx, const FaceVectorField& Y, double sy,
                          const FaceVectorField& Z) {
    const Grid& g = Z.grid();
    double total = 0.0;
    for (int i = 0; i < g.dim; ++i) {
        const ScalarField xi = cell_component(X, i);
        const ScalarField yi = cell_component(Y, i);
        const auto& z = Z.component(i);
        const Index3 fs = strides(g.face_extents(i));
        const double inv_h = 1.0 / g.h[i];
        std::size_t ci = 0;
        for_each(g.n, [&](const Index3& c) {
            const std::size_t lo = c[0] * fs[0] + c[1] * fs[1] + c[2] * fs[2];
            total += xi[ci] * yi[ci] * (z[lo + fs[i]] - z[lo]) * inv_h;
            ++ci;
        });
    }
    for (int i = 0; i < g.dim; ++i)
        for (int j = 0; j < g.dim; ++j) {
            if (i == j) continue;
            for_each(edge_extents(g, i, j), [&](const Index3& e) {
                const double xv = edge_average(g, X.component(i), i, j, e, sx);
                const double yv = edge_average(g, Y.component(j), j, i, e, sy);
                const double dz = edge_difference(g, Z.component(j), j, i, e, -1.0);
                total += edge_weight(g, i, j, e) * xv * yv * dz;
            });
        }
    return total * g.cell_volume();
}

void require_same_samples(const Sample& a, const Sample& b) {
    require_same_grid(a.c.grid(), b.c.grid(), "relative entropy");
    if (std::abs(a.t - b.t) > 1e-12 * std::max(1.0, std::abs(a.t))) {
        throw ValidationError("relative entropy: trajectories are sampled at different times");
    }
}

}  // namespace

// ---------------------------------------------------------------------------

EnergyReport total_energy(const State& state, const DoubleWell& well, const FluidParams& params) {
    EnergyReport r;
    r.t = state.t;
    r.kinetic = 0.5 * integrate(cell_magnitude_squared(state.u));
    const FaceVectorField gc = gradient(state.c);
    r.interfacial = 0.5 * params.eps * face_inner(gc, gc);
    double f = 0.0;
    for (double c : state.c.values()) f += well.F(c);
    r.potential = f * state.c.grid().cell_volume() / params.eps;
    return r;
}

double viscous_dissipation(const FaceVectorField& u, double nu) {
    const Grid& g = u.grid();
    double normal = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        const auto& x = u.component(a);
        const Index3 fs = strides(g.face_extents(a));
        const double inv_h = 1.0 / g.h[a];
        for_each(g.n, [&](const Index3& c) {
            const std::size_t lo = c[0] * fs[0] + c[1] * fs[1] + c[2] * fs[2];
            const double d = (x[lo + fs[a]] - x[lo]) * inv_h;
            normal += d * d;
        });
    }
    double shear = 0.0;
    for (int a = 0; a < g.dim; ++a)
        for (int b = a + 1; b < g.dim; ++b) {
            const Index3 e = edge_extents(g, a, b);
            const std::vector<double> s2 = edge_shear_squared(u, a, b);
            std::size_t i = 0;
            for_each(e, [&](const Index3& idx) { shear += edge_weight(g, a, b, idx) * s2[i++]; });
        }
    // (nu/2)(G + G^T):G = (nu/2)[2 sum_a (d_a u_a)^2 + sum_{a<b} (d_b u_a + d_a u_b)^2]
    return 0.5 * nu * (2.0 * normal + shear) * g.cell_volume();
}

DissipationRates dissipation_rates(const State& state, const StepReport& report, const FluidParams& params) {
    DissipationRates d;
    d.viscous = viscous_dissipation(state.u, params.nu);
    d.ac = sum_of_squares(report.material_derivative);
    return d;
}

void EnergyTracker::start(const State& s) {
    trace_.clear();
    trace_.push_back(total_energy(s, well_, params_));
}

const EnergyReport& EnergyTracker::record(const State& s, const StepReport& r) {
    if (trace_.empty()) throw ValidationError("EnergyTracker: start() must be called first");
    EnergyReport e = total_energy(s, well_, params_);
    const DissipationRates d = dissipation_rates(s, r, params_);
    e.viscous_diss = d.viscous;
    e.ac_diss = d.ac;
    e.cumulative_diss = trace_.back().cumulative_diss + r.dt * (d.viscous + d.ac);
    const double e0 = trace_.front().total();
    const double excess = e.total() + e.cumulative_diss - e0;
    e.audit_violation = e0 > 0.0 ? excess / e0 : excess;
    trace_.push_back(e);
    return trace_.back();
}

double energy_audit(std::span<const EnergyReport> trace) {
    if (trace.size() < 2) return 0.0;
    const double e0 = trace.front().total();
    double worst = 0.0;
    for (const EnergyReport& r : trace) {
        const double excess = r.total() + r.cumulative_diss - e0;
        worst = std::max(worst, e0 > 0.0 ? excess / e0 : excess);
    }
    return worst;
}

// ---------------------------------------------------------------------------

MaxPrincipleBounds max_principle_bounds(const ScalarField& c0, const DoubleWell& well) {
    const double lo = c0.min();
    const double hi = c0.max();
    if (lo < well.f1 || hi > well.f2) {
        throw ValidationError("initial concentration leaves the admissible interval [f1, f2]");
    }
    return {std::min(lo, well.y1), std::max(hi, well.y2)};
}

void MaxPrincipleMonitor::observe(const ScalarField& c) {
    for (double v : c.values()) {
        const double below = bounds_.m - v;
        const double above = v - bounds_.M;
        const double out = std::max(below, above);
        if (out > tol_) ++result_.violations;
        result_.worst_excursion = std::max(result_.worst_excursion, out);
    }
}

MaxPrincipleCheck check_max_principle(std::span<const ScalarField> trajectory, const MaxPrincipleBounds& bounds,
                                      double tol) {
    MaxPrincipleMonitor m(bounds, tol);
    for (const ScalarField& c : trajectory) m.observe(c);
    return m.result();
}

// ---------------------------------------------------------------------------

double relative_entropy(const State& weak, const State& strong, const FluidParams& params) {
    require_same_grid(weak.u.grid(), strong.u.grid(), "relative_entropy");
    require_same_grid(weak.c.grid(), strong.c.grid(), "relative_entropy");
    const FaceVectorField w = weak.u - strong.u;
    const FaceVectorField gd = gradient(weak.c - strong.c);
    return 0.5 * integrate(cell_magnitude_squared(w)) + 0.5 * params.eps * face_inner(gd, gd);
}

Sample initial_sample(const State& s, const DoubleWell& well, const FluidParams& params) {
    Sample out{s.t, s.u, s.c, laplacian(s.c)};
    for (std::size_t i = 0; i < s.c.size(); ++i) {
        out.material_derivative[i] = params.eps * out.material_derivative[i] - well.dF(s.c[i]) / params.eps;
    }
    return out;
}

Sample step_sample(const State& s, const StepReport& r) { return Sample{s.t, s.u, s.c, r.material_derivative}; }

REIIntegrands rei_integrands(const Sample& weak, const Sample& strong, const DoubleWell& well,
                             const FluidParams& params) {
    require_same_samples(weak, strong);
    const double eps = params.eps;
    const Grid& g = weak.c.grid();
    const double vol = g.cell_volume();

    const FaceVectorField w = weak.u - strong.u;
    const ScalarField d = weak.c - strong.c;
    const FaceVectorField gd = gradient(d);
    const FaceVectorField gC = gradient(strong.c);
    const ScalarField lap_d = laplacian(d);

    REIIntegrands r;
    r.entropy = 0.5 * integrate(cell_magnitude_squared(w)) + 0.5 * eps * face_inner(gd, gd);
    r.visc = viscous_dissipation(w, params.nu);

    double ac = 0.0, rf = 0.0, e1 = 0.0, e4 = 0.0;
    const ScalarField U_dot_gd = advect_scalar(strong.u, d);
    const ScalarField w_dot_gC = advect_scalar(w, strong.c);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double dm = weak.material_derivative[i] - strong.material_derivative[i];
        ac += dm * dm;
        rf += (well.dF(weak.c[i]) - well.dF(strong.c[i])) * dm;
        e1 += lap_d[i] * U_dot_gd[i];
        e4 += lap_d[i] * w_dot_gC[i];
    }
    r.ac = ac * vol;
    r.r_f = -rf * vol / eps;
    r.r_eps1 = eps * e1 * vol;
    r.r_eps4 = eps * e4 * vol;
    r.r_conv = triple_contraction(w, -1.0, strong.u, -1.0, w);
    r.r_eps2 = eps * triple_contraction(gC, 1.0, gd, 1.0, w);
    r.r_eps3 = eps * triple_contraction(gd, 1.0, gC, 1.0, w);
    return r;
}

double gronwall_weight(const FaceVectorField& U, const ScalarField& C) {
    const Grid& g = C.grid();
    const FaceVectorField gC = gradient(C);
    ScalarField u2(g, 0.0, ScalarBC::none), c2(g, 0.0, ScalarBC::none);
    for (int a = 0; a < g.dim; ++a) {
        const ScalarField ua = cell_component(U, a);
        const ScalarField ca = cell_component(gC, a);
        for (std::size_t i = 0; i < u2.size(); ++i) {
            u2[i] += ua[i] * ua[i];
            c2[i] += ca[i] * ca[i];
        }
    }
    return 1.0 + u2.max() + c2.max();
}

void RelativeEntropyAccumulator::add(const Sample& weak, const Sample& strong) {
    const REIIntegrands cur = rei_integrands(weak, strong, well_, params_);
    REIReport rep;
    rep.t = weak.t;
    if (!rei_.empty()) {
        if (!(weak.t > prev_t_)) throw ValidationError("relative entropy: sample times must increase");
        const double h = 0.5 * (weak.t - prev_t_);
        const REIReport& last = rei_.back();
        rep.lhs_visc = last.lhs_visc + h * (prev_.visc + cur.visc);
        rep.lhs_ac = last.lhs_ac + h * (prev_.ac + cur.ac);
        rep.r_conv = last.r_conv + h * (prev_.r_conv + cur.r_conv);
        rep.r_eps1 = last.r_eps1 + h * (prev_.r_eps1 + cur.r_eps1);
        rep.r_eps2 = last.r_eps2 + h * (prev_.r_eps2 + cur.r_eps2);
        rep.r_eps3 = last.r_eps3 + h * (prev_.r_eps3 + cur.r_eps3);
        rep.r_eps4 = last.r_eps4 + h * (prev_.r_eps4 + cur.r_eps4);
        rep.r_f = last.r_f + h * (prev_.r_f + cur.r_f);
        rep.lhs_entropy_gap = cur.entropy - trace_.E.front();
    }
    rep.slack = rep.rhs() - rep.lhs();
    rei_.push_back(rep);

    trace_.times.push_back(weak.t);
    trace_.E.push_back(cur.entropy);
    trace_.D.push_back(rep.lhs_visc + rep.lhs_ac);
    trace_.omega.push_back(gronwall_weight(strong.u, strong.c));
    prev_ = cur;
    prev_t_ = weak.t;
}

std::vector<REIReport> rei_terms(const Trajectory& weak, const Trajectory& strong, const DoubleWell& well,
                                 const FluidParams& params) {
    if (weak.size() != strong.size()) throw ValidationError("rei_terms: trajectories have different lengths");
    RelativeEntropyAccumulator acc(well, params);
    for (std::size_t i = 0; i < weak.size(); ++i) acc.add(weak[i], strong[i]);
    return acc.rei();
}

RelEntropyTrace relative_entropy_trace(const Trajectory& weak, const Trajectory& strong, const DoubleWell& well,
                                       const FluidParams& params) {
    if (weak.size() != strong.size()) {
        throw ValidationError("relative_entropy_trace: trajectories have different lengths");
    }
    RelativeEntropyAccumulator acc(well, params);
    for (std::size_t i = 0; i < weak.size(); ++i) acc.add(weak[i], strong[i]);
    return acc.trace();
}

// ---------------------------------------------------------------------------

GronwallFit gronwall_fit(const RelEntropyTrace& trace) {
    const std::size_t n = trace.times.size();
    if (n == 0) throw ValidationError("gronwall_fit: empty trace");
    if (trace.E.size() != n || trace.D.size() != n || trace.omega.size() != n) {
        throw ValidationError("gronwall_fit: trace columns differ in length");
    }
    for (double w : trace.omega)
        if (!(w >= 1.0)) throw ValidationError("gronwall_fit: omega must be >= 1");

    GronwallFit fit;
    fit.lambda = kGronwallLambda;
    const double e0 = trace.E.front();
    std::vector<double> int_omega(n, 0.0), int_omega_e(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double h = 0.5 * (trace.times[i] - trace.times[i - 1]);
        int_omega[i] = int_omega[i - 1] + h * (trace.omega[i - 1] + trace.omega[i]);
        int_omega_e[i] =
            int_omega_e[i - 1] + h * (trace.omega[i - 1] * trace.E[i - 1] + trace.omega[i] * trace.E[i]);
    }
    double k = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double excess = trace.E[i] - e0 + (1.0 - fit.lambda) * trace.D[i];
        if (excess <= 0.0) continue;
        if (int_omega_e[i] > 0.0) {
            k = std::max(k, excess / int_omega_e[i]);
        } else {
            k = std::numeric_limits<double>::infinity();
        }
    }
    fit.k = k;
    fit.bound_curve.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // exp(inf * 0) is NaN; the first sample is pinned to E(0).
        fit.bound_curve[i] = i == 0 ? e0 : e0 * std::exp(k * int_omega[i]);
        const double b = fit.bound_curve[i];
        if (trace.E[i] - b > 1e-9 * b) fit.violated = true;
    }
    return fit;
}

void PoincareAccumulator::add(const Sample& first, const Sample& second) {
    require_same_samples(first, second);
    if (!started_) {
        report_.hypothesis_holds = first.c.values() == second.c.values();
    } else if (!(first.t > prev_t_)) {
        throw ValidationError("poincare_check: sample times must increase");
    }
    const ScalarField d = first.c - second.c;
    const FaceVectorField gd = gradient(d);
    const FaceVectorField w = first.u - second.u;
    const double rate = face_inner(gd, gd) + integrate(cell_magnitude_squared(w));
    if (started_) integral_ += 0.5 * (first.t - prev_t_) * (prev_rate_ + rate);
    started_ = true;
    prev_rate_ = rate;
    prev_t_ = first.t;
    const double ratio = sum_of_squares(d) / (integral_ + kPoincareGuard);
    report_.ratio_curve.push_back(ratio);
    report_.K_est = std::max(report_.K_est, ratio);
}

PoincareReport poincare_check(const Trajectory& first, const Trajectory& second) {
    if (first.size() != second.size()) throw ValidationError("poincare_check: trajectories have different lengths");
    PoincareAccumulator acc;
    for (std::size_t i = 0; i < first.size(); ++i) acc.add(first[i], second[i]);
    return acc.report();
}

}  // namespace nsac
