#pragma once

#include <functional>
#include <utility>

#include "nsac/grid.hpp"
#include "nsac/potential.hpp"

namespace nsac {

struct FluidParams {
    double nu = 0.01;   ///< viscosity; the stress is (nu/2)(grad u + grad u^T)
    double eps = 0.05;  ///< interface width parameter

    /// Throws ValidationError unless both are positive and finite.
    void validate() const;

    friend bool operator==(const FluidParams&, const FluidParams&) = default;
};

/// Discrete (u, c, p) at time t. p is the modified pressure: it absorbs the
/// gradient part eps*grad(|grad c|^2/2) of the capillary stress.
struct State {
    double t = 0.0;
    FaceVectorField u;
    ScalarField c;
    ScalarField p;
};

/// Zero velocity and pressure, concentration filled with `c_value`.
State make_rest_state(const Grid& g, double c_value);

struct StepReport {
    double dt = 0.0;
    /// (c_new - c)/dt + u.grad(c) over the step.
    ScalarField material_derivative;
    int poisson_iterations = 0;
    int helmholtz_iterations = 0;
    int momentum_iterations = 0;
    /// dt * sum_a max|u_a| / h_a at the start of the step.
    double cfl = 0.0;
};

/// Optional body sources, sampled at the end-of-step time t_{n+1}.
struct Forcing {
    std::function<void(double t, FaceVectorField& out)> momentum;
    std::function<void(double t, ScalarField& out)> concentration;
};

inline constexpr double kSolverRelTol = 1e-10;
inline constexpr double kMaxAdvectiveCfl = 0.9;

/// -eps * (Laplacian c averaged to faces) * (grad c on faces). The remaining
/// gradient part of -eps div(grad c (x) grad c) is left to the pressure.
FaceVectorField capillary_force(const ScalarField& c, double eps);

/// Realized advective CFL number dt * sum_a max|u_a|/h_a.
double advective_cfl(const FaceVectorField& u, double dt);

/// max |div u| allowed after projection: 1e-8 (1 + max|u| / min h).
double divergence_tolerance(const FaceVectorField& u);

struct AllenCahnResult {
    ScalarField c;
    ScalarField material_derivative;
    int iterations = 0;
};

/// Stabilized linear semi-implicit step
///   (c_new - c)/dt + u.grad c = eps Lap c_new - F'(c)/eps - sigma (c_new - c)
/// with sigma = L / (2 eps), solved by conjugate gradients.
/// Throws NumericalError if the Helmholtz solve does not converge.
AllenCahnResult allen_cahn_step(const State& state, const DoubleWell& well, const FluidParams& params, double dt,
                                const ScalarField* source = nullptr);

struct MomentumResult {
    State state;
    int poisson_iterations = 0;
    int momentum_iterations = 0;
    double cfl = 0.0;
};

/// Velocity/pressure update with c_new frozen: implicit viscous and
/// linearized skew-symmetric transport, capillary forcing, then projection
/// onto discretely solenoidal fields. Throws NumericalError when the CFL
/// guard trips or a linear solve stalls.
MomentumResult momentum_step(const State& state, const ScalarField& c_new, const FluidParams& params, double dt,
                             const FaceVectorField* source = nullptr);

/// Allen-Cahn with u^n, then momentum with c^{n+1}. Pure function of its inputs.
std::pair<State, StepReport> step(const State& state, const DoubleWell& well, const FluidParams& params, double dt,
                                  const Forcing* forcing = nullptr);

}  // namespace nsac
