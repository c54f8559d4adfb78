#include "support.hpp"

#include "nsac/diagnostics.hpp"
#include "nsac/errors.hpp"
#include "nsac/initial_data.hpp"
#include "nsac/linear_solver.hpp"
#include "nsac/operators.hpp"
#include "nsac/solver.hpp"
#include "nsac/spectral.hpp"

using namespace nsac;
using nsac::test::max_diff;
using nsac::test::random_scalar;

namespace {

const FluidParams kParams{};
const DoubleWell kWell = quartic_well();

double kinetic(const State& s) { return total_energy(s, kWell, kParams).kinetic; }

double mean(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s / static_cast<double>(f.size());
}

State smooth_state(const Grid& g) {
    State s = make_rest_state(g, 0.0);
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i)
            s.c.at(i, j) = 0.6 * std::cos(M_PI * g.center(0, i)) * std::cos(2 * M_PI * g.center(1, j));
    return s;
}

// x -> L - x, applied to every field.
State reflect_x(const State& s) {
    const Grid& g = s.c.grid();
    const int n = g.n[0];
    State r = s;
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j < g.n[1]; ++j) {
            for (int i = 0; i < n; ++i) {
                r.c.at(i, j, k) = s.c.at(n - 1 - i, j, k);
                r.p.at(i, j, k) = s.p.at(n - 1 - i, j, k);
            }
            for (int i = 0; i <= n; ++i) r.u.at(0, i, j, k) = -s.u.at(0, n - i, j, k);
        }
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < n; ++i) r.u.at(1, i, j, k) = s.u.at(1, n - 1 - i, j, k);
    return r;
}

State advance(State s, int steps, double dt) {
    for (int k = 0; k < steps; ++k) s = step(s, kWell, kParams, dt).first;
    return s;
}

}  // namespace

TEST_CASE("FluidParams validation") {
    CHECK_NOTHROW(kParams.validate());
    CHECK_THROWS_AS((FluidParams{-1.0, 0.05}.validate()), ValidationError);
    CHECK_THROWS_AS((FluidParams{0.01, 0.0}.validate()), ValidationError);
    CHECK_THROWS_AS((FluidParams{0.01, NAN}.validate()), ValidationError);
}

TEST_CASE("conjugate gradients and BiCGSTAB on small systems") {
    // SPD tridiagonal
    const int n = 50;
    LinearOperator spd = [n](std::span<const double> x, std::span<double> y) {
        for (int i = 0; i < n; ++i) y[i] = 3 * x[i] - (i ? x[i - 1] : 0) - (i + 1 < n ? x[i + 1] : 0);
    };
    LinearOperator nonsym = [n](std::span<const double> x, std::span<double> y) {
        for (int i = 0; i < n; ++i) y[i] = 4 * x[i] - 2 * (i ? x[i - 1] : 0) + 0.5 * (i + 1 < n ? x[i + 1] : 0);
    };
    std::vector<double> truth(n), b(n), x(n, 0.0), check(n);
    for (int i = 0; i < n; ++i) truth[i] = std::sin(0.3 * i);
    SolveOptions opt;
    for (auto [A, solver] : {std::pair{spd, &conjugate_gradient}, std::pair{nonsym, &bicgstab}}) {
        A(truth, b);
        std::fill(x.begin(), x.end(), 0.0);
        const SolveStats st = solver(A, b, x, opt);
        CHECK(st.converged);
        CHECK(st.relative_residual <= 1e-10);
        for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(truth[i]).epsilon(1e-8));
    }

    std::vector<double> zero(n, 0.0);
    std::fill(x.begin(), x.end(), 1.0);
    CHECK(conjugate_gradient(spd, zero, x, opt).converged);
    CHECK(std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; }));

    opt.max_iterations = 1;
    spd(truth, b);
    std::fill(x.begin(), x.end(), 0.0);
    CHECK_FALSE(conjugate_gradient(spd, b, x, opt).converged);
}

TEST_CASE("spectral solver inverts the shifted laplacian") {
    std::mt19937_64 rng(21);
    for (int dim : {2, 3}) {
        const int n[] = {12, 8, 6};
        const double len[] = {1.0, 2.0, 0.5};
        Grid g = make_grid(dim, std::span<const int>(n, dim), std::span<const double>(len, dim));
        const NeumannSpectralSolver& S = spectral_solver_for(g);
        CHECK(&S == &spectral_solver_for(g));

        ScalarField b = random_scalar(g, rng);
        ScalarField x(g);
        S.solve(3.0, 0.7, b.values(), x.values());
        ScalarField Ax = 3.0 * x - 0.7 * laplacian(x);
        CHECK(max_diff(Ax, b) <= 1e-10);

        // pure Poisson on mean-free data
        const double m = mean(b);
        for (auto& v : b.values()) v -= m;
        S.solve(0.0, 1.0, b.values(), x.values());
        CHECK(std::abs(mean(x)) <= 1e-12);
        ScalarField lx = -1.0 * laplacian(x);
        CHECK(max_diff(lx, b) <= 1e-9);
    }
}

TEST_CASE("capillary force examples") {
    const double eps = 0.05;
    Grid g = make_uniform_grid(2, 32);
    CHECK(capillary_force(ScalarField(g, 0.3), eps).max_abs() == 0.0);

    ScalarField lin(g), quad(g);
    for (int j = 0; j < 32; ++j)
        for (int i = 0; i < 32; ++i) {
            const double x = g.center(0, i);
            lin.at(i, j) = 2 * x - 1;
            quad.at(i, j) = x * x;
        }
    const FaceVectorField fl = capillary_force(lin, eps);
    const FaceVectorField fq = capillary_force(quad, eps);
    for (int j = 0; j < 32; ++j)
        for (int i = 2; i <= 30; ++i) {
            CHECK(std::abs(fl.at(0, i, j)) <= 1e-9);
            CHECK(fq.at(0, i, j) == doctest::Approx(-4 * eps * g.node(0, i)).epsilon(1e-9));
        }
    CHECK(fq.max_abs(1) == 0.0);
}

TEST_CASE("Allen-Cahn fixed point and scalar update") {
    Grid g = make_uniform_grid(2, 16);
    const double dt = 1e-3;
    const State rest = make_rest_state(g, kWell.y1);
    const AllenCahnResult r = allen_cahn_step(rest, kWell, kParams, dt);
    CHECK(r.c == rest.c);
    CHECK(r.material_derivative.max_abs() == 0.0);

    const State half = make_rest_state(g, 0.5);
    const double sigma = kWell.lipschitz_constant() / (2 * kParams.eps);
    const double expected =
        (0.5 / dt - kWell.eval_Fprime(0.5) / kParams.eps + sigma * 0.5) / (1.0 / dt + sigma);
    const AllenCahnResult h = allen_cahn_step(half, kWell, kParams, dt);
    for (std::size_t i = 0; i < h.c.size(); ++i) CHECK(h.c[i] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("Allen-Cahn step satisfies its own equation") {
    Grid g = make_uniform_grid(2, 32);
    State s = vortex_state(g, 1.0, 0.0);
    s.c = smooth_state(g).c;
    const double dt = 1e-3;
    const AllenCahnResult r = allen_cahn_step(s, kWell, kParams, dt);
    const double sigma = kWell.lipschitz_constant() / (2 * kParams.eps);
    const ScalarField lap = laplacian(r.c);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < r.c.size(); ++i) {
        const double res = kParams.eps * lap[i] - kWell.eval_Fprime(s.c[i]) / kParams.eps -
                           sigma * (r.c[i] - s.c[i]) - r.material_derivative[i];
        worst = std::max(worst, std::abs(res));
        scale = std::max(scale, std::abs(r.material_derivative[i]));
    }
    CHECK(worst <= 1e-7 * (1 + scale));
    const ScalarField md = (1.0 / dt) * (r.c - s.c) + advect_scalar(s.u, s.c);
    CHECK(max_diff(md, r.material_derivative) <= 1e-9 * (1 + scale));
}

TEST_CASE("Allen-Cahn step is first order in time") {
    Grid g = make_uniform_grid(2, 32);
    const State s0 = smooth_state(g);
    const double T = 0.01, dt = 1e-3;
    const auto run = [&](double h) {
        State s = s0;
        const int steps = static_cast<int>(std::lround(T / h));
        for (int k = 0; k < steps; ++k) s.c = allen_cahn_step(s, kWell, kParams, h).c;
        return s.c;
    };
    const ScalarField ref = run(dt / 16);
    const double e1 = max_diff(run(dt), ref);
    const double e2 = max_diff(run(dt / 2), ref);
    const double order = std::log2(e1 / e2);
    CHECK(order > 0.8);
    CHECK(order < 1.3);
}

TEST_CASE("rest states stay at rest") {
    Grid g = make_uniform_grid(2, 16);
    const State rest = make_rest_state(g, kWell.y2);
    const auto [next, rep] = step(rest, kWell, kParams, 2.5e-4);
    CHECK(next.t == 2.5e-4);
    CHECK(next.c == rest.c);
    CHECK(next.u.max_abs() == 0.0);
    CHECK(next.p.max_abs() == 0.0);
    CHECK(rep.cfl == 0.0);

    const MomentumResult m = momentum_step(make_rest_state(g, 0.2), ScalarField(g, 0.2), kParams, 1e-3);
    CHECK(m.state.u.max_abs() == 0.0);
    CHECK(m.state.p.max_abs() == 0.0);
}

TEST_CASE("projection keeps the velocity solenoidal and the pressure mean-free") {
    std::mt19937_64 rng(22);
    Grid g = make_uniform_grid(2, 32);
    State s = bubble_state(g, kParams.eps, 0.2);
    s.u = nsac::test::random_faces(g, rng, 0.5);
    for (int k = 0; k < 3; ++k) {
        auto [next, rep] = step(s, kWell, kParams, 1e-3);
        CHECK(divergence(next.u).max_abs() <= divergence_tolerance(next.u));
        CHECK(std::abs(mean(next.p)) <= 1e-12 * (1 + next.p.max_abs()));
        CHECK(next.u.max_boundary_normal() == 0.0);
        CHECK(rep.poisson_iterations >= 0);
        CHECK(std::isfinite(rep.cfl));
        s = std::move(next);
    }
}

TEST_CASE("viscosity drains a vortex") {
    Grid g = make_uniform_grid(2, 32);
    State s = vortex_state(g, 1.0, kWell.y2);
    double ke = kinetic(s);
    for (int k = 0; k < 10; ++k) {
        s = step(s, kWell, kParams, 1e-3).first;
        const double next = kinetic(s);
        CHECK(next < ke);
        ke = next;
    }
}

TEST_CASE("steps are deterministic") {
    Grid g = make_uniform_grid(2, 24);
    State s = spinodal_state(g, 42);
    s.u = vortex_state(g, 0.5, 0.0).u;
    const auto [a, ra] = step(s, kWell, kParams, 1e-3);
    const auto [b, rb] = step(s, kWell, kParams, 1e-3);
    CHECK(a.u == b.u);
    CHECK(a.c == b.c);
    CHECK(a.p == b.p);
    CHECK(ra.material_derivative == rb.material_derivative);
}

TEST_CASE("mirror-image data give mirror-image trajectories") {
    Grid g = make_uniform_grid(2, 32);
    State s = spinodal_state(g, 7, 0.5);
    s.u = vortex_state(g, 0.8, 0.0).u;
    const State a = advance(s, 10, 1e-3);
    const State b = advance(reflect_x(s), 10, 1e-3);
    const State ra = reflect_x(a);
    CHECK(max_diff(ra.c, b.c) <= 1e-10);
    CHECK(max_diff(ra.u, b.u) <= 1e-10);
}

TEST_CASE("a step does not create energy") {
    Grid g = make_uniform_grid(2, 64);
    State s = bubble_state(g, kParams.eps);
    const double e0 = total_energy(s, kWell, kParams).total();
    const State next = step(s, kWell, kParams, 2.5e-4).first;
    CHECK(total_energy(next, kWell, kParams).total() <= e0 + 1e-8 * e0);

    State mixed = spinodal_state(g, 3, 0.3);
    mixed.u = vortex_state(g, 0.5, 0.0).u;
    const double m0 = total_energy(mixed, kWell, kParams).total();
    double prev = m0;
    for (int k = 0; k < 5; ++k) {
        mixed = step(mixed, kWell, kParams, 2.5e-4).first;
        const double e = total_energy(mixed, kWell, kParams).total();
        CHECK(e <= prev + 1e-8 * m0);
        prev = e;
    }
}

TEST_CASE("CFL guard rejects oversized steps") {
    Grid g = make_uniform_grid(2, 32);
    State s = vortex_state(g, 10.0, 0.0);
    CHECK(advective_cfl(s.u, 0.1) > kMaxAdvectiveCfl);
    CHECK_THROWS_AS(step(s, kWell, kParams, 0.1), NumericalError);
    CHECK_NOTHROW(step(s, kWell, kParams, 1e-4));
}
