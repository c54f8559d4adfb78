#include "support.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nsac/cli.hpp"
#include "nsac/config.hpp"
#include "nsac/errors.hpp"
#include "nsac/io.hpp"

using namespace nsac;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("nsac_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string validation_message(const std::string& text) {
    try {
        parse_config_text(text, "cfg");
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Doubles that stress the 17-digit round trip.
std::vector<double> awkward_values(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> v = {0.0, -0.0, 0.1, 1.0 / 3.0, 5e-324, 2.2250738585072014e-308, 1.7976931348623157e308,
                             -123456.789, 1e-17, 6.02214076e23};
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-300, 300);
    while (v.size() < n) v.push_back(std::ldexp(mant(rng), ex(rng)));
    return v;
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
    CHECK(parse_config_text("") == ExperimentConfig{});
    CHECK(parse_config_text("# only a comment\n\n   \n") == ExperimentConfig{});
    const ExperimentConfig d;
    CHECK(d.fluid.eps == 0.05);
    CHECK(d.fluid.nu == 0.01);
    CHECK(d.levels == std::vector<int>{64});
    CHECK(d.dt == 2.5e-4);
    CHECK(d.t_end == 0.5);
    CHECK(d.potential_kind == "quartic");
    CHECK(d.seed == 42u);
}

TEST_CASE("config values and errors") {
    const ExperimentConfig c = parse_config_text(
        "grid.n = 32, 64,128\n"
        "fluid.eps=0.04   # trailing comment\n"
        "init.kind = spinodal\n"
        "init.seed = 7\n"
        "perturbation.delta = 1e-3\n");
    CHECK(c.levels == std::vector<int>{32, 64, 128});
    CHECK(c.fluid.eps == 0.04);
    CHECK(c.init_kind == "spinodal");
    CHECK(c.seed == 7u);
    CHECK(c.deltas == std::vector<double>{1e-3});

    std::string m = validation_message("\nfluid.nu = -1\n");
    CHECK(m.find("fluid.nu") != std::string::npos);
    CHECK(m.find("cfg:2") != std::string::npos);
    m = validation_message("fluid.viscosity = 1\n");
    CHECK(m.find("fluid.viscosity") != std::string::npos);
    CHECK(m.find("cfg:1") != std::string::npos);
    CHECK(validation_message("fluid.nu 0.1\n").find("cfg:1") != std::string::npos);
    CHECK(validation_message("fluid.nu = abc\n").find("fluid.nu") != std::string::npos);
    CHECK(validation_message("fluid.nu = 0.1\nfluid.nu = 0.2\n").find("cfg:2") != std::string::npos);
    CHECK(validation_message("grid.n = 64, 32\n").find("grid.n") != std::string::npos);
    CHECK_THROWS_AS(parse_config("/nonexistent/path.cfg"), ValidationError);
}

TEST_CASE("config round trip") {
    ExperimentConfig c;
    c.levels = {16, 32, 64};
    c.fluid.nu = 0.0123456789012345;
    c.fluid.eps = 1.0 / 30.0;
    c.f1 = -2.5;
    c.init_kind = "vortex";
    c.seed = 18446744073709551615ull;
    c.deltas = {1e-3, 2e-2, 0.3};
    c.output_dir = "some/dir";
    c.output_every = 5;
    c.mms_temporal_n = 96;
    const std::string text = serialize_config(c);
    const ExperimentConfig back = parse_config_text(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
    CHECK(parse_config_text(serialize_config(ExperimentConfig{})) == ExperimentConfig{});
    CHECK(config_entries(c).size() == config_keys().size());

    TempDir dir;
    spit(dir.path / "c.cfg", text);
    CHECK(parse_config(dir.path / "c.cfg") == c);
}

TEST_CASE("energy csv round trip is bitwise") {
    std::mt19937_64 rng(51);
    const auto vals = awkward_values(rng, 80);
    std::vector<EnergyReport> trace(10);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        auto& r = trace[i];
        const double* v = &vals[8 * i];
        r = {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
    }
    TempDir dir;
    write_energy_csv(trace, dir.path / "energy.csv");
    const auto back = read_energy_csv(dir.path / "energy.csv");
    REQUIRE(back.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(std::memcmp(&back[i], &trace[i], sizeof(EnergyReport)) == 0);
    }
    const std::string first = slurp(dir.path / "energy.csv");
    CHECK(first.substr(0, first.find('\n')) ==
          "t,kinetic,interfacial,potential,viscous_diss,ac_diss,cumulative_diss,audit_violation");
}

TEST_CASE("entropy and rei csv round trips") {
    std::mt19937_64 rng(52);
    const auto vals = awkward_values(rng, 200);
    std::vector<EntropyRow> rows(6);
    std::vector<REIReport> rei(6);
    for (std::size_t i = 0; i < 6; ++i) {
        rows[i] = {vals[5 * i], vals[5 * i + 1], vals[5 * i + 2], vals[5 * i + 3], vals[5 * i + 4]};
        const double* v = &vals[40 + 11 * i];
        rei[i] = {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
    }
    TempDir dir;
    write_entropy_csv(rows, dir.path / "entropy.csv");
    write_rei_csv(rei, dir.path / "rei.csv");
    CHECK(read_entropy_csv(dir.path / "entropy.csv") == rows);
    const auto back = read_rei_csv(dir.path / "rei.csv");
    REQUIRE(back.size() == rei.size());
    for (std::size_t i = 0; i < rei.size(); ++i) CHECK(std::memcmp(&back[i], &rei[i], sizeof(REIReport)) == 0);
    CHECK(entropy_columns() == std::vector<std::string>{"t", "E", "D", "omega", "bound_curve"});
    CHECK(rei_columns().size() == 11u);
    CHECK(rei_columns().back() == "slack");
}

TEST_CASE("empty traces write header-only files") {
    TempDir dir;
    write_energy_csv({}, dir.path / "e.csv");
    const std::string text = slurp(dir.path / "e.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    CHECK(read_energy_csv(dir.path / "e.csv").empty());
}

TEST_CASE("schema mismatches are reported by column") {
    TempDir dir;
    const auto message = [&](const std::string& text) {
        spit(dir.path / "bad.csv", text);
        try {
            read_entropy_csv(dir.path / "bad.csv");
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("t,E,D,omega\n").find("bound_curve") != std::string::npos);
    CHECK(message("t,E,D,omega,bound_curve,extra\n").find("extra") != std::string::npos);
    CHECK(message("t,E,X,omega,bound_curve\n").find("'D'") != std::string::npos);
    CHECK(message("t,E,D,omega,bound_curve\n1,2,3,4\n").find("bound_curve") != std::string::npos);
    CHECK(message("t,E,D,omega,bound_curve\n1,2,3,4,5,6\n").find(":2:") != std::string::npos);
    CHECK(message("t,E,D,omega,bound_curve\n1,2,x,4,5\n").find("'D'") != std::string::npos);
    CHECK(message("").find("header") != std::string::npos);
    CHECK_THROWS_AS(read_rei_csv(dir.path / "missing.csv"), std::runtime_error);
}

TEST_CASE("vtk output") {
    TempDir dir;
    Grid g = make_uniform_grid(2, 4);
    State s = make_rest_state(g, 0.25);
    write_vtk(s, dir.path / "a.vtk");
    std::istringstream in(slurp(dir.path / "a.vtk"));
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    CHECK(lines[0] == "# vtk DataFile Version 3.0");
    CHECK(std::find(lines.begin(), lines.end(), "DIMENSIONS 5 5 1") != lines.end());
    CHECK(std::find(lines.begin(), lines.end(), "CELL_DATA 16") != lines.end());
    const auto c_at = std::find(lines.begin(), lines.end(), "SCALARS c double 1");
    REQUIRE(c_at != lines.end());
    for (int i = 0; i < 16; ++i) CHECK(*(c_at + 2 + i) == "0.25");
    CHECK(*(c_at + 18) == "SCALARS p double 1");

    Grid g3 = make_uniform_grid(3, 6);
    write_vtk(make_rest_state(g3, 0.0), dir.path / "b.vtk");
    CHECK(slurp(dir.path / "b.vtk").find("DIMENSIONS 7 7 7\n") != std::string::npos);
}

TEST_CASE("an independent reader parses the vtk file") {
    const std::string python = NSAC_PYTHON;
    if (python.empty() || std::system((python + " -c 'import meshio' >/dev/null 2>&1").c_str()) != 0) {
        MESSAGE("python3 with meshio not available; skipping");
        return;
    }
    TempDir dir;
    Grid g = make_uniform_grid(2, 8);
    State s = vortex_state(g, 1.0, 0.5);
    write_vtk(s, dir.path / "v.vtk");
    const std::string script =
        "import meshio, sys\n"
        "m = meshio.read(sys.argv[1])\n"
        "c = m.cell_data['c'][0]\n"
        "u = m.cell_data['u'][0]\n"
        "assert len(c) == 64 and abs(float(c.min()) - 0.5) < 1e-15, c\n"
        "assert u.shape == (64, 3), u.shape\n"
        "assert len(m.points) == 81, len(m.points)\n";
    spit(dir.path / "check.py", script);
    const std::string cmd = python + " " + (dir.path / "check.py").string() + " " + (dir.path / "v.vtk").string();
    CHECK(std::system(cmd.c_str()) == 0);
}

TEST_CASE("manifest json") {
    RunManifest m;
    m.command = "simulate";
    m.version = kVersion;
    m.config = {{"fluid.nu", "0.01"}, {"grid.n", "64"}};
    m.outputs = {"energy.csv"};
    m.start_time = "2026-01-01T00:00:00Z";
    m.end_time = "2026-01-01T00:00:01Z";
    const auto j = nlohmann::json::parse(manifest_json(m));
    CHECK(j["command"] == "simulate");
    CHECK(j["version"] == "0.1.0");
    CHECK(j["status"] == "ok");
    CHECK(j["config"]["grid.n"] == "64");
    CHECK(j["outputs"][0] == "energy.csv");
    const std::string ts = utc_timestamp();
    CHECK(ts.size() == 20u);
    CHECK(ts.back() == 'Z');
}

TEST_CASE("cli exit codes") {
    TempDir dir;
    const std::string out = (dir.path / "o").string();

    CliResult r = invoke({"energy-audit", "--config", "default", "--out", out, "--quiet"});
    CHECK(r.code == cli::kExitOk);
    CHECK(fs::exists(fs::path(out) / "energy.csv"));
    CHECK(fs::exists(fs::path(out) / "manifest.json"));

    r = invoke({"bogus"});
    CHECK(r.code == cli::kExitValidation);
    CHECK(r.err.find("unknown subcommand") != std::string::npos);
    CHECK(r.err.find("energy-audit") != std::string::npos);
    CHECK(invoke({}).code == cli::kExitValidation);
    CHECK(invoke({"simulate", "--frobnicate"}).code == cli::kExitValidation);
    CHECK(invoke({"simulate", "--config", (dir.path / "nope.cfg").string()}).code == cli::kExitValidation);

    spit(dir.path / "two.cfg", "grid.n = 16, 32\ninit.kind = bubble\ntime.t_end = 0.01\n");
    r = invoke({"wsu", "--config", (dir.path / "two.cfg").string(), "--out", out});
    CHECK(r.code == cli::kExitValidation);
    CHECK(r.err.find("3") != std::string::npos);

    spit(dir.path / "neg.cfg", "fluid.nu = -1\n");
    r = invoke({"simulate", "--config", (dir.path / "neg.cfg").string(), "--out", out});
    CHECK(r.code == cli::kExitValidation);
    CHECK(r.err.find("fluid.nu") != std::string::npos);

    spit(dir.path / "cfl.cfg", "grid.n = 16\ninit.kind = vortex\ninit.vortex_amplitude = 10\ntime.dt = 0.05\n"
                               "time.ref_n = 16\ntime.t_end = 0.5\n");
    const std::string cfl_out = (dir.path / "cfl").string();
    r = invoke({"simulate", "--config", (dir.path / "cfl.cfg").string(), "--out", cfl_out});
    CHECK(r.code == cli::kExitNumerical);
    CHECK(r.err.find("CFL") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(fs::path(cfl_out) / "manifest.json"));
    CHECK(j["status"] != "ok");

    CHECK(invoke({"--help"}).code == cli::kExitOk);
}

TEST_CASE("manifest lists every output") {
    TempDir dir;
    spit(dir.path / "snap.cfg", "grid.n = 16\ninit.kind = vortex\ntime.t_end = 0.005\noutput.every = 2\n");
    const std::string out = (dir.path / "o").string();
    REQUIRE(invoke({"simulate", "--config", (dir.path / "snap.cfg").string(), "--out", out, "--quiet"}).code == 0);
    const auto j = nlohmann::json::parse(slurp(fs::path(out) / "manifest.json"));
    CHECK(j["command"] == "simulate");
    CHECK(j["config"]["grid.n"] == "16");
    CHECK(j["config"]["output.dir"] == out);
    CHECK(j["outputs"].size() == 4u);  // energy.csv and snapshots 0, 2, 4
    for (const auto& name : j["outputs"]) {
        const fs::path p = fs::path(out) / name.get<std::string>();
        CHECK(fs::exists(p));
        CHECK(fs::file_size(p) > 0);
    }
    CHECK(fs::exists(fs::path(out) / "snapshot_000004.vtk"));
}

TEST_CASE("NSAC_OUT overrides --out") {
    TempDir dir;
    const fs::path env_dir = dir.path / "env";
    ::setenv("NSAC_OUT", env_dir.c_str(), 1);
    const CliResult r = invoke({"energy-audit", "--out", (dir.path / "flag").string(), "--quiet"});
    ::unsetenv("NSAC_OUT");
    CHECK(r.code == 0);
    CHECK(fs::exists(env_dir / "energy.csv"));
    CHECK_FALSE(fs::exists(dir.path / "flag"));
}

TEST_CASE("repeated runs write identical files") {
    TempDir dir;
    spit(dir.path / "p.cfg", "grid.n = 16\ninit.kind = spinodal\ntime.t_end = 0.01\n");
    const std::string cfg = (dir.path / "p.cfg").string();
    const fs::path a = dir.path / "a", b = dir.path / "b";
    REQUIRE(invoke({"simulate", "--config", cfg, "--out", a.string(), "--quiet"}).code == 0);
    REQUIRE(invoke({"simulate", "--config", cfg, "--out", b.string(), "--quiet"}).code == 0);
    CHECK(slurp(a / "energy.csv") == slurp(b / "energy.csv"));

    spit(dir.path / "q.cfg", "grid.n = 16\ninit.kind = bubble\ntime.t_end = 0.01\n");
    const std::string q = (dir.path / "q.cfg").string();
    REQUIRE(invoke({"perturb", "--config", q, "--out", a.string(), "--quiet"}).code == 0);
    REQUIRE(invoke({"perturb", "--config", q, "--out", b.string(), "--quiet"}).code == 0);
    for (const char* f : {"entropy_delta0.csv", "rei_delta0.csv", "entropy_delta1.csv", "rei_delta1.csv"}) {
        CHECK(slurp(a / f) == slurp(b / f));
        CHECK_FALSE(slurp(a / f).empty());
    }
}

TEST_CASE("the installed binary reports exit codes") {
    TempDir dir;
    const std::string bin = NSAC_BINARY;
    const auto status = [&](const std::string& args) {
        const int s = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(s);
    };
    CHECK(status("energy-audit --quiet --out " + (dir.path / "x").string()) == 0);
    CHECK(status("nonsense") == 1);
}
