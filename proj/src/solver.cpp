#include "nsac/solver.hpp"

#include <cmath>
#include <sstream>

#include "nsac/errors.hpp"
#include "nsac/linear_solver.hpp"
#include "nsac/operators.hpp"
#include "nsac/spectral.hpp"

namespace nsac {
namespace {

int max_iterations_for(const Grid& g) { return 10 * static_cast<int>(g.cell_count()); }

// Flattened view of a face field: components concatenated in axis order.
std::vector<double> flatten(const FaceVectorField& v) {
    std::vector<double> out;
    for (int a = 0; a < v.grid().dim; ++a) out.insert(out.end(), v.component(a).begin(), v.component(a).end());
    return out;
}

void unflatten(std::span<const double> x, FaceVectorField& v) {
    std::size_t off = 0;
    for (int a = 0; a < v.grid().dim; ++a) {
        auto& c = v.component(a);
        std::copy(x.begin() + off, x.begin() + off + c.size(), c.begin());
        off += c.size();
    }
}

[[noreturn]] void solver_failure(const char* which, const SolveStats& st, double dt) {
    std::ostringstream os;
    os << which << " solve did not converge (" << st.iterations << " iterations, relative residual "
       << st.relative_residual << ", dt = " << dt << ")";
    throw NumericalError(os.str());
}

void require_positive_dt(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be positive");
}

void check_cfl(const FaceVectorField& u, double dt) {
    const double cfl = advective_cfl(u, dt);
    if (!(cfl <= kMaxAdvectiveCfl)) {
        std::ostringstream os;
        os << "advective CFL " << cfl << " exceeds " << kMaxAdvectiveCfl << " (dt = " << dt << "); step rejected";
        throw NumericalError(os.str());
    }
}

}  // namespace

void FluidParams::validate() const {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw ValidationError("fluid.nu must be positive");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("fluid.eps must be positive");
}

State make_rest_state(const Grid& g, double c_value) {
    State s;
    s.u = FaceVectorField(g, VectorBC::dirichlet_zero);
    s.c = ScalarField(g, c_value, ScalarBC::neumann_zero);
    s.p = ScalarField(g, 0.0, ScalarBC::none);
    return s;
}

FaceVectorField capillary_force(const ScalarField& c, double eps) {
    const FaceVectorField lap = face_average(laplacian(c));
    FaceVectorField f = gradient(c);
    for (int a = 0; a < c.grid().dim; ++a) {
        auto& x = f.component(a);
        const auto& l = lap.component(a);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = -eps * l[i] * x[i];
    }
    return f;
}

double advective_cfl(const FaceVectorField& u, double dt) {
    const Grid& g = u.grid();
    double s = 0.0;
    for (int a = 0; a < g.dim; ++a) s += u.max_abs(a) / g.h[a];
    return dt * s;
}

double divergence_tolerance(const FaceVectorField& u) { return 1e-8 * (1.0 + u.max_abs() / u.grid().min_h()); }

AllenCahnResult allen_cahn_step(const State& state, const DoubleWell& well, const FluidParams& params, double dt,
                                const ScalarField* source) {
    require_positive_dt(dt);
    const ScalarField& c = state.c;
    const Grid& g = c.grid();
    const double eps = params.eps;
    const double sigma = well.lipschitz_constant() / (2.0 * eps);
    const double diag = 1.0 / dt + sigma;

    const ScalarField transport = advect_scalar(state.u, c);
    ScalarField rhs(g, 0.0, ScalarBC::none);
    for (std::size_t i = 0; i < c.size(); ++i) rhs[i] = diag * c[i] - transport[i] - well.dF(c[i]) / eps;
    if (source) rhs += *source;

    ScalarField work(g);
    const LinearOperator helmholtz = [&](std::span<const double> x, std::span<double> y) {
        std::copy(x.begin(), x.end(), work.values().begin());
        const ScalarField lap = laplacian(work);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = diag * x[i] - eps * lap[i];
    };

    AllenCahnResult out;
    out.c = c;
    out.c.set_bc(ScalarBC::neumann_zero);
    SolveOptions opt;
    opt.rel_tol = kSolverRelTol;
    opt.max_iterations = max_iterations_for(g);
    const NeumannSpectralSolver& spectral = spectral_solver_for(g);
    opt.preconditioner = [&](std::span<const double> r, std::span<double> z) { spectral.solve(diag, eps, r, z); };
    const SolveStats st = conjugate_gradient(helmholtz, rhs.values(), out.c.values(), opt);
    if (!st.converged) solver_failure("Allen-Cahn Helmholtz", st, dt);
    out.iterations = st.iterations;

    out.material_derivative = ScalarField(g, 0.0, ScalarBC::none);
    for (std::size_t i = 0; i < c.size(); ++i)
        out.material_derivative[i] = (out.c[i] - c[i]) / dt + transport[i];
    return out;
}

MomentumResult momentum_step(const State& state, const ScalarField& c_new, const FluidParams& params, double dt,
                             const FaceVectorField* source) {
    require_positive_dt(dt);
    const Grid& g = state.u.grid();
    require_same_grid(g, c_new.grid(), "momentum_step");
    check_cfl(state.u, dt);

    MomentumResult out;
    out.cfl = advective_cfl(state.u, dt);
    const double inv_dt = 1.0 / dt;
    const double half_nu = 0.5 * params.nu;

    // (I/dt + N(u^n) - (nu/2) Lap) u* = u^n/dt + f
    FaceVectorField rhs = capillary_force(c_new, params.eps);
    if (source) rhs += *source;
    for (int a = 0; a < g.dim; ++a) {
        auto& r = rhs.component(a);
        const auto& un = state.u.component(a);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += inv_dt * un[i];
    }
    rhs.zero_boundary_normal();

    FaceVectorField work(g);
    const FaceVectorField& transport_velocity = state.u;
    const LinearOperator velocity_op = [&](std::span<const double> x, std::span<double> y) {
        unflatten(x, work);
        const FaceVectorField lap = vector_laplacian(work);
        const FaceVectorField adv = skew_advection(transport_velocity, work);
        std::size_t off = 0;
        for (int a = 0; a < g.dim; ++a) {
            const auto& l = lap.component(a);
            const auto& n = adv.component(a);
            for (std::size_t i = 0; i < l.size(); ++i) y[off + i] = inv_dt * x[off + i] + n[i] - half_nu * l[i];
            off += l.size();
        }
    };
    std::vector<double> b = flatten(rhs);
    std::vector<double> x = flatten(state.u);
    SolveOptions opt;
    opt.rel_tol = kSolverRelTol;
    opt.max_iterations = max_iterations_for(g);
    const SolveStats vst = bicgstab(velocity_op, b, x, opt);
    if (!vst.converged) solver_failure("momentum", vst, dt);
    out.momentum_iterations = vst.iterations;
    FaceVectorField u_star(g);
    unflatten(x, u_star);
    u_star.zero_boundary_normal();

    // Projection: -Lap p = -div(u*)/dt with zero-mean compatibility.
    ScalarField div = divergence(u_star);
    double mean = 0.0;
    for (double v : div.values()) mean += v;
    mean /= static_cast<double>(div.size());
    std::vector<double> pb(div.size());
    for (std::size_t i = 0; i < pb.size(); ++i) pb[i] = -(div[i] - mean) * inv_dt;

    ScalarField pwork(g);
    const LinearOperator poisson = [&](std::span<const double> xs, std::span<double> ys) {
        std::copy(xs.begin(), xs.end(), pwork.values().begin());
        const ScalarField lap = laplacian(pwork);
        for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = -lap[i];
    };
    ScalarField p = state.p;
    p.set_bc(ScalarBC::none);
    SolveOptions popt = opt;
    popt.project_mean = true;
    const NeumannSpectralSolver& spectral = spectral_solver_for(g);
    popt.preconditioner = [&](std::span<const double> r, std::span<double> z) { spectral.solve(0.0, 1.0, r, z); };
    const SolveStats pst = conjugate_gradient(poisson, pb, p.values(), popt);
    if (!pst.converged) solver_failure("pressure Poisson", pst, dt);
    out.poisson_iterations = pst.iterations;

    double pmean = 0.0;
    for (double v : p.values()) pmean += v;
    pmean /= static_cast<double>(p.size());
    for (double& v : p.values()) v -= pmean;

    const FaceVectorField gp = gradient(p);
    for (int a = 0; a < g.dim; ++a) {
        auto& u = u_star.component(a);
        const auto& d = gp.component(a);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] -= dt * d[i];
    }

    out.state.t = state.t + dt;
    out.state.u = std::move(u_star);
    out.state.u.set_bc(VectorBC::dirichlet_zero);
    out.state.c = c_new;
    out.state.c.set_bc(ScalarBC::neumann_zero);
    out.state.p = std::move(p);
    return out;
}

std::pair<State, StepReport> step(const State& state, const DoubleWell& well, const FluidParams& params, double dt,
                                  const Forcing* forcing) {
    require_positive_dt(dt);
    check_cfl(state.u, dt);
    const Grid& g = state.c.grid();
    const double t_next = state.t + dt;

    ScalarField c_source;
    FaceVectorField u_source;
    const bool with_c_source = forcing && forcing->concentration;
    const bool with_u_source = forcing && forcing->momentum;
    if (with_c_source) {
        c_source = ScalarField(g, 0.0, ScalarBC::none);
        forcing->concentration(t_next, c_source);
    }
    if (with_u_source) {
        u_source = FaceVectorField(g, VectorBC::dirichlet_zero);
        forcing->momentum(t_next, u_source);
    }

    AllenCahnResult ac = allen_cahn_step(state, well, params, dt, with_c_source ? &c_source : nullptr);
    MomentumResult mom = momentum_step(state, ac.c, params, dt, with_u_source ? &u_source : nullptr);
    mom.state.t = t_next;

    StepReport report;
    report.dt = dt;
    report.material_derivative = std::move(ac.material_derivative);
    report.helmholtz_iterations = ac.iterations;
    report.poisson_iterations = mom.poisson_iterations;
    report.momentum_iterations = mom.momentum_iterations;
    report.cfl = mom.cfl;
    return {std::move(mom.state), std::move(report)};
}

}  // namespace nsac
