#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nsac/diagnostics.hpp"
#include "nsac/grid.hpp"
#include "nsac/initial_data.hpp"
#include "nsac/potential.hpp"
#include "nsac/solver.hpp"

namespace nsac {

/// Every knob of a study. Field names follow the config keys
/// (section.key), see config.hpp for the file format and defaults.
struct ExperimentConfig {
    // grid
    int dim = 2;
    std::vector<int> levels{64};  ///< grid.n, strictly increasing
    double length = 1.0;          ///< grid.length, same on every axis
    // fluid
    FluidParams fluid{};
    // potential
    std::string potential_kind = "quartic";
    double f1 = -2.0;
    double f2 = 2.0;
    // time
    double dt = 2.5e-4;  ///< step at the reference resolution
    int ref_n = 64;      ///< dt at level n is dt * ref_n / n
    double t_end = 0.5;
    // init
    std::string init_kind = "equilibrium";  ///< equilibrium | bubble | spinodal | vortex | manufactured
    std::uint64_t seed = 42;
    double radius = 0.25;           ///< bubble radius (fraction of the box side)
    double noise = 0.05;            ///< spinodal amplitude
    double vortex_amplitude = 1.0;  ///< vortex stream-function amplitude
    // perturbation
    std::vector<double> deltas{1e-3, 1e-2};
    // manufactured solution study
    double mms_amplitude_u = 1.0;
    double mms_amplitude_c = 0.5;
    double mms_amplitude_p = 0.1;
    double mms_t_end = 0.1;
    double mms_dt = 1e-3;  ///< step at the coarsest level; scaled by (n0/n)^2
    int mms_temporal_n = 128;
    double mms_temporal_dt = 2.5e-4;  ///< largest of dt, dt/2, dt/4
    // output
    std::string output_dir = "out";
    int output_every = 0;  ///< VTK cadence in steps; 0 disables snapshots

    /// Throws ValidationError naming the offending key.
    void validate() const;

    DoubleWell well() const;
    Grid grid(int n) const;
    double dt_for(int n) const;
    int steps_for(int n, double horizon) const;
    /// Initial state of init_kind on the given grid.
    State initial_state(const Grid& g) const;
    ManufacturedSolution manufactured() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Called after every step with the step index (1-based), state and report.
using StepObserver = std::function<void(int, const State&, const StepReport&)>;

struct SimulationResult {
    State final_state;
    std::vector<EnergyReport> energy;
    MaxPrincipleBounds bounds;
    MaxPrincipleCheck max_principle;
    double audit_violation = 0.0;
    bool audit_passed = true;
};

inline constexpr double kMaxPrincipleTolerance = 1e-6;

/// Unforced run at level n to the horizon with the energy trace and the
/// maximum-principle monitor attached. Throws ValidationError for the
/// manufactured kind.
SimulationResult run_simulation(const ExperimentConfig& cfg, int n, const StepObserver& observer = {});

/// run_simulation at the finest configured level. The audit outcome is in
/// the result; callers decide whether a failure is fatal.
SimulationResult run_energy_audit(const ExperimentConfig& cfg);

struct LevelResult {
    int n = 0;
    double dt = 0.0;
    RelEntropyTrace trace;
    std::vector<REIReport> rei;
    GronwallFit fit;
    double max_E = 0.0;
    /// max_t max(0, -slack).
    double worst_slack_deficit = 0.0;
    /// max_t [-slack / (1 + |LHS|)], the normalized form used by the tolerance.
    double worst_relative_deficit = 0.0;
};

struct WSUReport {
    int strong_n = 0;
    std::vector<LevelResult> levels;  ///< coarse levels, then the finest against itself
    std::vector<double> ratios;       ///< max_E[i] / max_E[i+1] over the coarse levels
};

/// Finest level as the strong proxy, each coarser level started from the
/// restricted initial data and compared at its own step times against the
/// restricted proxy. Requires at least 3 levels.
WSUReport run_wsu(const ExperimentConfig& cfg, double horizon);

/// Same machinery with at least 2 levels (used by rei-check).
WSUReport run_refinement(const ExperimentConfig& cfg, double horizon, std::size_t min_levels);

struct PairResult {
    RelEntropyTrace trace;
    std::vector<REIReport> rei;
    GronwallFit fit;
    PoincareReport poincare;
};

/// Two runs on one grid from the given initial states, compared sample by
/// sample (material derivatives from the steps).
PairResult run_pair(const ExperimentConfig& cfg, const State& weak0, const State& strong0, double horizon);

/// Strong run from the configured data, weak run with u0 + delta v for the
/// fixed unit-energy solenoidal v, on the finest level.
PairResult run_perturbation(const ExperimentConfig& cfg, double delta, double horizon);

struct ConvergenceRow {
    int n = 0;
    double dt = 0.0;
    double error_u = 0.0;
    double error_c = 0.0;
    double error = 0.0;  ///< sqrt(error_u^2 + error_c^2)
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> spatial;   ///< error vs the exact solution, dt ~ h^2
    std::vector<double> spatial_orders;    ///< log2 ratios between consecutive rows
    std::vector<ConvergenceRow> temporal;  ///< same grid, dt halved; error = distance to next row
    std::vector<double> temporal_orders;
    double spatial_order() const { return spatial_orders.empty() ? 0.0 : spatial_orders.back(); }
    double temporal_order() const { return temporal_orders.empty() ? 0.0 : temporal_orders.back(); }
};

/// Forced runs against the manufactured solution. Spatial rows use the
/// configured levels with dt = mms_dt (n0/n)^2 so the first-order time error
/// scales like h^2; temporal rows use mms_temporal_n with dt, dt/2, dt/4 and
/// measure successive solution differences, which cancel the spatial error.
ConvergenceTable run_manufactured(const ExperimentConfig& cfg);

/// Discrete L2 errors (velocity over faces, concentration over cells).
double velocity_l2(const FaceVectorField& a, const FaceVectorField& b);
double concentration_l2(const ScalarField& a, const ScalarField& b);

}  // namespace nsac
