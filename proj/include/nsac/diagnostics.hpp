#pragma once

#include <span>
#include <vector>

#include "nsac/grid.hpp"
#include "nsac/potential.hpp"
#include "nsac/solver.hpp"

namespace nsac {

// ---------------------------------------------------------------------------
// Energy law

struct EnergyReport {
    double t = 0.0;
    double kinetic = 0.0;      ///< (1/2) int |u|^2
    double interfacial = 0.0;  ///< (eps/2) int |grad c|^2
    double potential = 0.0;    ///< (1/eps) int F(c)
    double viscous_diss = 0.0; ///< int S(grad u):grad u
    double ac_diss = 0.0;      ///< int |c_t + u.grad c|^2
    double cumulative_diss = 0.0;
    double audit_violation = 0.0;  ///< running (E + cumulative - E0)/E0

    double total() const { return kinetic + interfacial + potential; }
};

/// Energies only; the dissipation fields are left at zero.
EnergyReport total_energy(const State& state, const DoubleWell& well, const FluidParams& params);

struct DissipationRates {
    double viscous = 0.0;
    double ac = 0.0;
};

/// int (nu/2)(grad u + grad u^T):grad u, normal strains at cells and shear
/// strains at edges (half weight on wall edges).
double viscous_dissipation(const FaceVectorField& u, double nu);

DissipationRates dissipation_rates(const State& state, const StepReport& report, const FluidParams& params);

/// Builds the EnergyReport trace of one run. The dissipation of a step is
/// charged at its end-of-step rate (dt * rate(t_{n+1})), the quadrature the
/// implicit step itself satisfies.
class EnergyTracker {
public:
    EnergyTracker(const DoubleWell& well, const FluidParams& params) : well_(well), params_(params) {}

    void start(const State& s);
    const EnergyReport& record(const State& s, const StepReport& r);

    const std::vector<EnergyReport>& trace() const { return trace_; }

private:
    DoubleWell well_;
    FluidParams params_;
    std::vector<EnergyReport> trace_;
};

/// max_t [E(t) + cumulative(t) - E(0)] / E(0), with the absolute excess used
/// when E(0) == 0. Empty or single-entry traces give 0.
double energy_audit(std::span<const EnergyReport> trace);

inline constexpr double kEnergyAuditTolerance = 1e-6;

// ---------------------------------------------------------------------------
// Maximum principle

struct MaxPrincipleBounds {
    double m = 0.0;
    double M = 0.0;
};

/// [m, M] = co{min c0, max c0, y1, y2}. Throws ValidationError if c0 leaves
/// [f1, f2].
MaxPrincipleBounds max_principle_bounds(const ScalarField& c0, const DoubleWell& well);

struct MaxPrincipleCheck {
    long long violations = 0;
    double worst_excursion = 0.0;  ///< largest distance outside [m, M]
};

MaxPrincipleCheck check_max_principle(std::span<const ScalarField> trajectory, const MaxPrincipleBounds& bounds,
                                      double tol);

/// Streaming form of check_max_principle.
class MaxPrincipleMonitor {
public:
    MaxPrincipleMonitor(MaxPrincipleBounds bounds, double tol) : bounds_(bounds), tol_(tol) {}
    void observe(const ScalarField& c);
    const MaxPrincipleCheck& result() const { return result_; }

private:
    MaxPrincipleBounds bounds_;
    double tol_;
    MaxPrincipleCheck result_;
};

// ---------------------------------------------------------------------------
// Relative entropy between two trajectories

/// int (1/2)|u - U|^2 + (eps/2)|grad(c - C)|^2. Throws ValidationError on a
/// grid mismatch.
double relative_entropy(const State& weak, const State& strong, const FluidParams& params);

/// One time sample of a trajectory: the fields the relative-entropy
/// machinery consumes, plus the material derivative c_t + u.grad c.
struct Sample {
    double t = 0.0;
    FaceVectorField u;
    ScalarField c;
    ScalarField material_derivative;
};
using Trajectory = std::vector<Sample>;

/// Sample at t = 0, where no step has produced a material derivative yet:
/// it is taken from the equation itself, eps Lap c - F'(c)/eps.
Sample initial_sample(const State& s, const DoubleWell& well, const FluidParams& params);
/// Sample after a step, carrying the step's material derivative.
Sample step_sample(const State& s, const StepReport& r);

struct REIReport {
    double t = 0.0;
    double lhs_entropy_gap = 0.0;  ///< E(t) - E(0)
    double lhs_visc = 0.0;         ///< int_0^t int S(grad w):grad w, w = u - U
    double lhs_ac = 0.0;           ///< int_0^t int |mu - MU|^2
    double r_conv = 0.0;
    double r_eps1 = 0.0;
    double r_eps2 = 0.0;
    double r_eps3 = 0.0;
    double r_eps4 = 0.0;
    double r_f = 0.0;
    double slack = 0.0;  ///< RHS - LHS

    double lhs() const { return lhs_entropy_gap + lhs_visc + lhs_ac; }
    double rhs() const { return r_conv + r_eps1 + r_eps2 + r_eps3 + r_eps4 + r_f; }
};

/// Instantaneous integrands of the relative-entropy inequality at one time.
struct REIIntegrands {
    double entropy = 0.0;
    double visc = 0.0;
    double ac = 0.0;
    double r_conv = 0.0;
    double r_eps1 = 0.0;
    double r_eps2 = 0.0;
    double r_eps3 = 0.0;
    double r_eps4 = 0.0;
    double r_f = 0.0;
};

REIIntegrands rei_integrands(const Sample& weak, const Sample& strong, const DoubleWell& well,
                             const FluidParams& params);

/// Time-integrated inequality (trapezoid on the sample times), one report per
/// sample. Throws ValidationError if the trajectories differ in length, time
/// stamps or grid.
std::vector<REIReport> rei_terms(const Trajectory& weak, const Trajectory& strong, const DoubleWell& well,
                                 const FluidParams& params);

struct RelEntropyTrace {
    std::vector<double> times;
    std::vector<double> E;
    std::vector<double> D;      ///< cumulative lhs_visc + lhs_ac
    std::vector<double> omega;  ///< 1 + max|U|^2 + max|grad C|^2
};

/// Gronwall weight of the strong trajectory at one time.
double gronwall_weight(const FaceVectorField& U, const ScalarField& C);

RelEntropyTrace relative_entropy_trace(const Trajectory& weak, const Trajectory& strong, const DoubleWell& well,
                                       const FluidParams& params);

/// Incremental version of rei_terms/relative_entropy_trace for paired runs
/// that are never stored whole.
class RelativeEntropyAccumulator {
public:
    RelativeEntropyAccumulator(const DoubleWell& well, const FluidParams& params) : well_(well), params_(params) {}
    void add(const Sample& weak, const Sample& strong);
    const std::vector<REIReport>& rei() const { return rei_; }
    const RelEntropyTrace& trace() const { return trace_; }

private:
    DoubleWell well_;
    FluidParams params_;
    REIIntegrands prev_{};
    double prev_t_ = 0.0;
    std::vector<REIReport> rei_;
    RelEntropyTrace trace_;
};

// ---------------------------------------------------------------------------
// Gronwall fit and Poincare-type constant

struct GronwallFit {
    double k = 0.0;
    double lambda = 0.5;
    std::vector<double> bound_curve;
    bool violated = false;
};

inline constexpr double kGronwallLambda = 0.5;

/// Least k >= 0 with E(t) - E(0) + D(t) <= lambda D(t) + k int_0^t omega E at
/// every sample (trapezoid), lambda = 0.5. Throws ValidationError on an empty
/// trace or omega < 1.
GronwallFit gronwall_fit(const RelEntropyTrace& trace);

struct PoincareReport {
    double K_est = 0.0;
    std::vector<double> ratio_curve;
    /// Both runs start from the same concentration (the lemma's hypothesis).
    bool hypothesis_holds = true;
};

inline constexpr double kPoincareGuard = 1e-14;

PoincareReport poincare_check(const Trajectory& first, const Trajectory& second);

/// Streaming form of poincare_check.
class PoincareAccumulator {
public:
    void add(const Sample& first, const Sample& second);
    const PoincareReport& report() const { return report_; }

private:
    PoincareReport report_;
    bool started_ = false;
    double integral_ = 0.0;
    double prev_rate_ = 0.0;
    double prev_t_ = 0.0;
};

}  // namespace nsac
