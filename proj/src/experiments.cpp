#include "nsac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsac/errors.hpp"
#include "nsac/operators.hpp"

namespace nsac {
namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
    throw ValidationError(key + ": " + why);
}

bool known_init(const std::string& k) {
    return k == "bubble" || k == "spinodal" || k == "vortex" || k == "equilibrium" || k == "manufactured";
}

Sample restricted_sample(const State& fine, const ScalarField& fine_mu, const Grid& coarse, double t) {
    Sample s;
    s.t = t;
    s.u = restrict_faces(fine.u, coarse);
    s.c = restrict_scalar(fine.c, coarse);
    s.material_derivative = restrict_scalar(fine_mu, coarse);
    s.material_derivative.set_bc(ScalarBC::none);
    return s;
}

void finish_level(LevelResult& lr, const RelativeEntropyAccumulator& acc) {
    lr.trace = acc.trace();
    lr.rei = acc.rei();
    lr.fit = gronwall_fit(lr.trace);
    lr.max_E = *std::max_element(lr.trace.E.begin(), lr.trace.E.end());
    for (const REIReport& r : lr.rei) {
        lr.worst_slack_deficit = std::max(lr.worst_slack_deficit, -r.slack);
        lr.worst_relative_deficit = std::max(lr.worst_relative_deficit, -r.slack / (1.0 + std::abs(r.lhs())));
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (dim != 2 && dim != 3) bad_key("grid.dim", "must be 2 or 3");
    if (levels.empty()) bad_key("grid.n", "at least one resolution is required");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 4) bad_key("grid.n", "every resolution must be >= 4");
        if (i > 0 && levels[i] <= levels[i - 1]) bad_key("grid.n", "resolutions must be strictly increasing");
    }
    if (!(length > 0.0) || !std::isfinite(length)) bad_key("grid.length", "must be positive");
    if (!(fluid.nu > 0.0) || !std::isfinite(fluid.nu)) bad_key("fluid.nu", "must be positive");
    if (!(fluid.eps > 0.0) || !std::isfinite(fluid.eps)) bad_key("fluid.eps", "must be positive");
    if (potential_kind != "quartic") bad_key("potential.kind", "unknown potential '" + potential_kind + "'");
    if (!(f1 < -1.0) || !(f2 > 1.0)) bad_key("potential.f1", "need f1 < -1 < 1 < f2 for the quartic well");
    if (!(dt > 0.0) || !std::isfinite(dt)) bad_key("time.dt", "must be positive");
    if (ref_n <= 0) bad_key("time.ref_n", "must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) bad_key("time.t_end", "must be positive");
    if (!known_init(init_kind)) bad_key("init.kind", "unknown kind '" + init_kind + "'");
    if (!(radius > 0.0 && radius < 0.5)) bad_key("init.radius", "must lie in (0, 0.5)");
    if (!(noise >= 0.0) || noise > f2 || -noise < f1) bad_key("init.noise", "must lie in [0, min(-f1, f2)]");
    if (!std::isfinite(vortex_amplitude)) bad_key("init.vortex_amplitude", "must be finite");
    for (double d : deltas)
        if (!(d >= 0.0) || !std::isfinite(d)) bad_key("perturbation.delta", "must be nonnegative");
    if (!std::isfinite(mms_amplitude_u)) bad_key("mms.amplitude_u", "must be finite");
    if (!std::isfinite(mms_amplitude_c)) bad_key("mms.amplitude_c", "must be finite");
    if (!std::isfinite(mms_amplitude_p)) bad_key("mms.amplitude_p", "must be finite");
    if (!(mms_t_end > 0.0)) bad_key("mms.t_end", "must be positive");
    if (!(mms_dt > 0.0)) bad_key("mms.dt", "must be positive");
    if (mms_temporal_n < 4) bad_key("mms.temporal_n", "must be >= 4");
    if (!(mms_temporal_dt > 0.0)) bad_key("mms.temporal_dt", "must be positive");
    if (output_dir.empty()) bad_key("output.dir", "must not be empty");
    if (output_every < 0) bad_key("output.every", "must be >= 0");
}

DoubleWell ExperimentConfig::well() const { return make_well(potential_kind, f1, f2); }

Grid ExperimentConfig::grid(int n) const { return make_uniform_grid(dim, n, length); }

double ExperimentConfig::dt_for(int n) const { return dt * ref_n / n; }

int ExperimentConfig::steps_for(int n, double horizon) const {
    const double steps = std::round(horizon / dt_for(n));
    if (!(steps >= 1.0) || steps > 1e9) throw ValidationError("time.t_end: horizon shorter than one step");
    return static_cast<int>(steps);
}

ManufacturedSolution ExperimentConfig::manufactured() const {
    ManufacturedSolution m;
    m.A = mms_amplitude_u;
    m.B = mms_amplitude_c;
    m.P = mms_amplitude_p;
    m.params = fluid;
    m.well = well();
    return m;
}

State ExperimentConfig::initial_state(const Grid& g) const {
    if (init_kind == "bubble") return bubble_state(g, fluid.eps, radius);
    if (init_kind == "spinodal") return spinodal_state(g, seed, noise);
    if (init_kind == "vortex") return vortex_state(g, vortex_amplitude, well().y2);
    if (init_kind == "equilibrium") return equilibrium_state(g, well().y2);
    if (init_kind == "manufactured") return manufactured().initial_state(g);
    throw ValidationError("init.kind: unknown kind '" + init_kind + "'");
}

// ---------------------------------------------------------------------------

SimulationResult run_simulation(const ExperimentConfig& cfg, int n, const StepObserver& observer) {
    cfg.validate();
    if (cfg.init_kind == "manufactured") {
        throw ValidationError("init.kind: manufactured data needs forcing; use the mms study");
    }
    const DoubleWell well = cfg.well();
    const Grid g = cfg.grid(n);
    const double dt = cfg.dt_for(n);
    const int steps = cfg.steps_for(n, cfg.t_end);

    State s = cfg.initial_state(g);
    SimulationResult out;
    out.bounds = max_principle_bounds(s.c, well);
    MaxPrincipleMonitor monitor(out.bounds, kMaxPrincipleTolerance);
    monitor.observe(s.c);
    EnergyTracker tracker(well, cfg.fluid);
    tracker.start(s);
    for (int k = 1; k <= steps; ++k) {
        auto [next, report] = step(s, well, cfg.fluid, dt);
        s = std::move(next);
        s.t = k * dt;
        tracker.record(s, report);
        monitor.observe(s.c);
        if (observer) observer(k, s, report);
    }
    out.final_state = std::move(s);
    out.energy = tracker.trace();
    out.max_principle = monitor.result();
    out.audit_violation = energy_audit(out.energy);
    out.audit_passed = out.audit_violation <= kEnergyAuditTolerance;
    return out;
}

SimulationResult run_energy_audit(const ExperimentConfig& cfg) { return run_simulation(cfg, cfg.levels.back()); }

// ---------------------------------------------------------------------------

WSUReport run_refinement(const ExperimentConfig& cfg, double horizon, std::size_t min_levels) {
    cfg.validate();
    if (cfg.levels.size() < min_levels) {
        std::ostringstream os;
        os << "grid.n: this study needs at least " << min_levels << " resolutions, got " << cfg.levels.size();
        throw ValidationError(os.str());
    }
    if (cfg.init_kind == "manufactured") throw ValidationError("init.kind: manufactured data is not supported here");
    const DoubleWell well = cfg.well();
    const int nf = cfg.levels.back();
    const Grid gf = cfg.grid(nf);
    const double dtf = cfg.dt_for(nf);
    const int steps_f = cfg.steps_for(nf, horizon);

    struct Coarse {
        int n = 0;
        int ratio = 1;
        double dt = 0.0;
        Grid grid;
        State weak;
        ScalarField mu_sum;
        RelativeEntropyAccumulator acc;
    };
    State fine = cfg.initial_state(gf);
    const Sample fine0 = initial_sample(fine, well, cfg.fluid);

    std::vector<Coarse> coarse;
    for (std::size_t i = 0; i + 1 < cfg.levels.size(); ++i) {
        const int n = cfg.levels[i];
        if (nf % n != 0) throw ValidationError("grid.n: every resolution must divide the finest one");
        const int ratio = nf / n;
        if (steps_f % ratio != 0) throw ValidationError("time.t_end: horizon must be a whole number of coarse steps");
        Coarse c{n, ratio, cfg.dt_for(n), cfg.grid(n), {}, {}, RelativeEntropyAccumulator(well, cfg.fluid)};
        c.weak = restrict_state(fine, c.grid);
        c.mu_sum = ScalarField(gf, 0.0, ScalarBC::none);
        c.acc.add(initial_sample(c.weak, well, cfg.fluid),
                  restricted_sample(fine, fine0.material_derivative, c.grid, 0.0));
        coarse.push_back(std::move(c));
    }
    RelativeEntropyAccumulator self(well, cfg.fluid);
    self.add(fine0, fine0);

    for (int k = 1; k <= steps_f; ++k) {
        auto [next, report] = step(fine, well, cfg.fluid, dtf);
        fine = std::move(next);
        fine.t = k * dtf;
        const Sample fs = step_sample(fine, report);
        self.add(fs, fs);
        for (Coarse& c : coarse) {
            c.mu_sum += report.material_derivative;
            if (k % c.ratio != 0) continue;
            const int kc = k / c.ratio;
            auto [wnext, wreport] = step(c.weak, well, cfg.fluid, c.dt);
            c.weak = std::move(wnext);
            c.weak.t = kc * c.dt;
            c.mu_sum *= 1.0 / c.ratio;
            c.acc.add(step_sample(c.weak, wreport), restricted_sample(fine, c.mu_sum, c.grid, c.weak.t));
            c.mu_sum *= 0.0;
        }
    }

    WSUReport rep;
    rep.strong_n = nf;
    for (Coarse& c : coarse) {
        LevelResult lr;
        lr.n = c.n;
        lr.dt = c.dt;
        finish_level(lr, c.acc);
        rep.levels.push_back(std::move(lr));
    }
    LevelResult top;
    top.n = nf;
    top.dt = dtf;
    finish_level(top, self);
    rep.levels.push_back(std::move(top));
    for (std::size_t i = 0; i + 2 < rep.levels.size(); ++i) {
        const double denom = rep.levels[i + 1].max_E;
        rep.ratios.push_back(denom > 0.0 ? rep.levels[i].max_E / denom : std::numeric_limits<double>::infinity());
    }
    return rep;
}

WSUReport run_wsu(const ExperimentConfig& cfg, double horizon) { return run_refinement(cfg, horizon, 3); }

PairResult run_pair(const ExperimentConfig& cfg, const State& weak0, const State& strong0, double horizon) {
    cfg.validate();
    require_same_grid(weak0.c.grid(), strong0.c.grid(), "run_pair");
    const DoubleWell well = cfg.well();
    const int n = weak0.c.grid().n[0];
    const double dt = cfg.dt_for(n);
    const int steps = cfg.steps_for(n, horizon);

    State weak = weak0, strong = strong0;
    weak.t = strong.t = 0.0;
    RelativeEntropyAccumulator acc(well, cfg.fluid);
    PoincareAccumulator poincare;
    {
        const Sample w = initial_sample(weak, well, cfg.fluid);
        const Sample s = initial_sample(strong, well, cfg.fluid);
        acc.add(w, s);
        poincare.add(w, s);
    }
    for (int k = 1; k <= steps; ++k) {
        auto [wn, wr] = step(weak, well, cfg.fluid, dt);
        auto [sn, sr] = step(strong, well, cfg.fluid, dt);
        weak = std::move(wn);
        strong = std::move(sn);
        weak.t = strong.t = k * dt;
        const Sample w = step_sample(weak, wr);
        const Sample s = step_sample(strong, sr);
        acc.add(w, s);
        poincare.add(w, s);
    }
    PairResult out;
    out.trace = acc.trace();
    out.rei = acc.rei();
    out.fit = gronwall_fit(out.trace);
    out.poincare = poincare.report();
    return out;
}

PairResult run_perturbation(const ExperimentConfig& cfg, double delta, double horizon) {
    cfg.validate();
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ValidationError("perturbation.delta: must be nonnegative");
    if (cfg.init_kind == "manufactured") throw ValidationError("init.kind: manufactured data is not supported here");
    const Grid g = cfg.grid(cfg.levels.back());
    const State strong0 = cfg.initial_state(g);
    State weak0 = strong0;
    weak0.u += delta * perturbation_direction(g);
    return run_pair(cfg, weak0, strong0, horizon);
}

// ---------------------------------------------------------------------------

double velocity_l2(const FaceVectorField& a, const FaceVectorField& b) {
    const FaceVectorField d = a - b;
    return std::sqrt(face_inner(d, d));
}

double concentration_l2(const ScalarField& a, const ScalarField& b) {
    const ScalarField d = a - b;
    double s = 0.0;
    for (double v : d.values()) s += v * v;
    return std::sqrt(s * d.grid().cell_volume());
}

namespace {

State run_forced(const ManufacturedSolution& m, const Grid& g, double dt, int steps) {
    const Forcing forcing = m.forcing(g);
    State s = m.initial_state(g);
    for (int k = 1; k <= steps; ++k) {
        auto [next, report] = step(s, m.well, m.params, dt, &forcing);
        s = std::move(next);
        s.t = k * dt;
    }
    return s;
}

int whole_steps(double horizon, double dt, const char* key) {
    const double steps = horizon / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps || std::round(steps) < 1.0) {
        throw ValidationError(std::string(key) + ": mms.t_end must be a whole number of steps");
    }
    return static_cast<int>(std::round(steps));
}

void append_orders(const std::vector<ConvergenceRow>& rows, std::size_t count, std::vector<double>& orders,
                   double ratio) {
    for (std::size_t i = 0; i + 1 < count; ++i) {
        if (rows[i].error > 0.0 && rows[i + 1].error > 0.0) {
            orders.push_back(std::log(rows[i].error / rows[i + 1].error) / std::log(ratio));
        }
    }
}

}  // namespace

ConvergenceTable run_manufactured(const ExperimentConfig& cfg) {
    cfg.validate();
    const ManufacturedSolution m = cfg.manufactured();
    ConvergenceTable table;

    const int n0 = cfg.levels.front();
    for (int n : cfg.levels) {
        const Grid g = cfg.grid(n);
        ManufacturedSolution::require_unit_square(g);
        const double scale = static_cast<double>(n0) / n;
        const double dt = cfg.mms_dt * scale * scale;
        const int steps = whole_steps(cfg.mms_t_end, dt, "mms.dt");
        const State s = run_forced(m, g, dt, steps);
        ConvergenceRow row;
        row.n = n;
        row.dt = dt;
        row.error_u = velocity_l2(s.u, m.velocity(g, s.t));
        row.error_c = concentration_l2(s.c, m.concentration(g, s.t));
        row.error = std::hypot(row.error_u, row.error_c);
        table.spatial.push_back(row);
    }
    for (std::size_t i = 1; i < cfg.levels.size(); ++i) {
        const double r = static_cast<double>(cfg.levels[i]) / cfg.levels[i - 1];
        if (table.spatial[i - 1].error > 0.0 && table.spatial[i].error > 0.0) {
            table.spatial_orders.push_back(std::log(table.spatial[i - 1].error / table.spatial[i].error) /
                                           std::log(r));
        }
    }

    const Grid gt = cfg.grid(cfg.mms_temporal_n);
    ManufacturedSolution::require_unit_square(gt);
    std::vector<State> runs;
    std::vector<double> dts;
    for (int i = 0; i < 3; ++i) {
        const double dt = cfg.mms_temporal_dt / (1 << i);
        dts.push_back(dt);
        runs.push_back(run_forced(m, gt, dt, whole_steps(cfg.mms_t_end, dt, "mms.temporal_dt")));
    }
    for (int i = 0; i + 1 < 3; ++i) {
        ConvergenceRow row;
        row.n = cfg.mms_temporal_n;
        row.dt = dts[i];
        row.error_u = velocity_l2(runs[i].u, runs[i + 1].u);
        row.error_c = concentration_l2(runs[i].c, runs[i + 1].c);
        row.error = std::hypot(row.error_u, row.error_c);
        table.temporal.push_back(row);
    }
    append_orders(table.temporal, table.temporal.size(), table.temporal_orders, 2.0);
    return table;
}

}  // namespace nsac
