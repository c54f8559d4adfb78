#include "nsac/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>

#include "nsac/config.hpp"
#include "nsac/errors.hpp"
#include "nsac/experiments.hpp"
#include "nsac/io.hpp"

namespace nsac::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config = "default";
    std::string out;
    bool quiet = false;
};

struct Context {
    ExperimentConfig cfg;
    fs::path dir;
    bool quiet = false;
    std::ostream& out;
    RunManifest manifest;

    void note(const std::string& s) const {
        if (!quiet) out << s << '\n';
    }
    fs::path file(const std::string& name) {
        manifest.outputs.push_back(name);
        return dir / name;
    }
};

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// Returns the exit code; NumericalError propagates to the caller.
using Command = std::function<int(Context&)>;

int simulate(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const int n = cfg.levels.back();
    const auto snapshot = [&](int k, const State& s) {
        char name[48];
        std::snprintf(name, sizeof name, "snapshot_%06d.vtk", k);
        write_vtk(s, ctx.file(name));
    };
    if (cfg.output_every > 0) snapshot(0, cfg.initial_state(cfg.grid(n)));
    const SimulationResult r = run_simulation(cfg, n, [&](int k, const State& s, const StepReport&) {
        if (cfg.output_every > 0 && k % cfg.output_every == 0) snapshot(k, s);
    });
    write_energy_csv(r.energy, ctx.file("energy.csv"));
    ctx.note("simulate: n=" + std::to_string(n) + " steps=" + std::to_string(r.energy.size() - 1) +
             " E(0)=" + fmt("%.10g", r.energy.front().total()) + " E(T)=" + fmt("%.10g", r.energy.back().total()));
    return kExitOk;
}

int energy_audit(Context& ctx) {
    const SimulationResult r = run_energy_audit(ctx.cfg);
    write_energy_csv(r.energy, ctx.file("energy.csv"));
    ctx.note("energy-audit: violation=" + fmt("%.3e", r.audit_violation) + " (tolerance " +
             fmt("%.0e", kEnergyAuditTolerance) + ")");
    ctx.note("max-principle: [m,M]=[" + fmt("%.6g", r.bounds.m) + "," + fmt("%.6g", r.bounds.M) +
             "] violations=" + std::to_string(r.max_principle.violations) +
             " worst_excursion=" + fmt("%.3e", r.max_principle.worst_excursion));
    if (!r.audit_passed) {
        ctx.manifest.status = "audit failed";
        throw NumericalError("energy audit failed: violation " + fmt("%.3e", r.audit_violation) + " exceeds " +
                             fmt("%.0e", kEnergyAuditTolerance));
    }
    return kExitOk;
}

void write_levels(Context& ctx, const WSUReport& rep, bool entropy) {
    for (const LevelResult& l : rep.levels) {
        const std::string tag = "_n" + std::to_string(l.n) + ".csv";
        if (entropy) {
            const auto rows = entropy_rows(l.trace, l.fit);
            write_entropy_csv(rows, ctx.file("entropy" + tag));
        }
        write_rei_csv(l.rei, ctx.file("rei" + tag));
        ctx.note("  n=" + std::to_string(l.n) + " max_E=" + fmt("%.6e", l.max_E) + " k=" + fmt("%.6g", l.fit.k) +
                 " gronwall_violated=" + (l.fit.violated ? "true" : "false") +
                 " worst_relative_deficit=" + fmt("%.3e", l.worst_relative_deficit));
    }
}

int wsu(Context& ctx) {
    const WSUReport rep = run_wsu(ctx.cfg, ctx.cfg.t_end);
    ctx.note("wsu: strong proxy n=" + std::to_string(rep.strong_n));
    write_levels(ctx, rep, true);
    for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
        ctx.note("  ratio max_E(n=" + std::to_string(rep.levels[i].n) + ")/max_E(n=" +
                 std::to_string(rep.levels[i + 1].n) + ")=" + fmt("%.4g", rep.ratios[i]));
    }
    return kExitOk;
}

int rei_check(Context& ctx) {
    const WSUReport rep = run_refinement(ctx.cfg, ctx.cfg.t_end, 2);
    ctx.note("rei-check: strong proxy n=" + std::to_string(rep.strong_n));
    write_levels(ctx, rep, false);
    const LevelResult& finest_weak = rep.levels[rep.levels.size() - 2];
    if (finest_weak.worst_relative_deficit > 1e-3) {
        ctx.manifest.status = "rei slack below tolerance";
        throw NumericalError("relative entropy inequality slack below -1e-3 (1 + |LHS|) at n=" +
                             std::to_string(finest_weak.n));
    }
    return kExitOk;
}

int perturb(Context& ctx) {
    bool violated = false;
    for (std::size_t i = 0; i < ctx.cfg.deltas.size(); ++i) {
        const double delta = ctx.cfg.deltas[i];
        const PairResult r = run_perturbation(ctx.cfg, delta, ctx.cfg.t_end);
        const std::string tag = "_delta" + std::to_string(i) + ".csv";
        const auto rows = entropy_rows(r.trace, r.fit);
        write_entropy_csv(rows, ctx.file("entropy" + tag));
        write_rei_csv(r.rei, ctx.file("rei" + tag));
        ctx.note("perturb: delta=" + fmt("%.6g", delta) + " E(0)=" + fmt("%.6e", r.trace.E.front()) +
                 " E(T)/E(0)=" + fmt("%.6g", r.trace.E.front() > 0 ? r.trace.E.back() / r.trace.E.front() : 0.0) +
                 " k=" + fmt("%.6g", r.fit.k) + " violated=" + (r.fit.violated ? "true" : "false") +
                 " poincare_K=" + fmt("%.6g", r.poincare.K_est));
        violated = violated || r.fit.violated;
    }
    if (violated) {
        ctx.manifest.status = "gronwall bound violated";
        throw NumericalError("Gronwall bound violated for at least one perturbation");
    }
    return kExitOk;
}

int mms(Context& ctx) {
    const ConvergenceTable t = run_manufactured(ctx.cfg);
    write_convergence_csv(t, ctx.file("convergence.csv"));
    for (const auto& r : t.spatial) {
        ctx.note("mms spatial: n=" + std::to_string(r.n) + " dt=" + fmt("%.4g", r.dt) + " error=" + fmt("%.6e", r.error));
    }
    for (double o : t.spatial_orders) ctx.note("  spatial order " + fmt("%.4f", o));
    for (const auto& r : t.temporal) {
        ctx.note("mms temporal: n=" + std::to_string(r.n) + " dt=" + fmt("%.4g", r.dt) + " difference=" +
                 fmt("%.6e", r.error));
    }
    for (double o : t.temporal_orders) ctx.note("  temporal order " + fmt("%.4f", o));
    return kExitOk;
}

const std::map<std::string, std::pair<const char*, Command>>& commands() {
    static const std::map<std::string, std::pair<const char*, Command>> c = {
        {"simulate", {"Run one simulation; energy.csv and optional VTK snapshots", simulate}},
        {"energy-audit", {"Run and audit the energy inequality (exit 2 on failure)", energy_audit}},
        {"wsu", {"Weak-strong refinement study against the finest level (>= 3 levels)", wsu}},
        {"perturb", {"Perturbation study and Gronwall fit for each perturbation.delta", perturb}},
        {"rei-check", {"Relative entropy inequality against the finest level (>= 2 levels)", rei_check}},
        {"mms", {"Manufactured-solution convergence study", mms}},
    };
    return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Navier-Stokes/Allen-Cahn simulator and verification suite", "nsac"};
    app.require_subcommand(1);
    Options opt;
    std::string chosen;
    for (const auto& [name, entry] : commands()) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", opt.config, "Config file, or 'default' for built-in defaults");
        sub->add_option("--out", opt.out, "Output directory (overrides output.dir; NSAC_OUT overrides this)");
        sub->add_flag("--quiet", opt.quiet, "Suppress progress output");
        sub->callback([&chosen, n = name] { chosen = n; });
    }

    if (!args.empty() && !args.front().empty() && args.front()[0] != '-' && !commands().count(args.front())) {
        err << "error: unknown subcommand '" << args.front() << "'\n\n" << app.help();
        return kExitValidation;
    }

    std::vector<std::string> argv_store{"nsac"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    RunManifest manifest;
    manifest.command = chosen;
    manifest.version = kVersion;
    manifest.start_time = utc_timestamp();
    try {
        ExperimentConfig cfg = opt.config == "default" ? ExperimentConfig{} : parse_config(opt.config);
        if (const char* env = std::getenv("NSAC_OUT"); env && *env) {
            cfg.output_dir = env;
        } else if (!opt.out.empty()) {
            cfg.output_dir = opt.out;
        }
        cfg.validate();
        Context ctx{cfg, fs::path(cfg.output_dir), opt.quiet, out, std::move(manifest)};
        ctx.manifest.config = config_entries(cfg);
        fs::create_directories(ctx.dir);
        int code = kExitOk;
        try {
            code = commands().at(chosen).second(ctx);
        } catch (const NumericalError&) {
            ctx.manifest.end_time = utc_timestamp();
            if (ctx.manifest.status == "ok") ctx.manifest.status = "numerical failure";
            write_manifest(ctx.manifest, ctx.dir / "manifest.json");
            throw;
        }
        ctx.manifest.end_time = utc_timestamp();
        write_manifest(ctx.manifest, ctx.dir / "manifest.json");
        return code;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace nsac::cli
