#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nsac/diagnostics.hpp"
#include "nsac/experiments.hpp"
#include "nsac/solver.hpp"

namespace nsac {

// CSV tables: mandatory header row, comma separated, reals with 17
// significant digits so that reading back is bitwise exact. Readers reject
// any header or column-count mismatch with a ValidationError naming the
// column; I/O failures raise std::runtime_error.

/// One row of entropy.csv.
struct EntropyRow {
    double t = 0.0;
    double E = 0.0;
    double D = 0.0;
    double omega = 0.0;
    double bound_curve = 0.0;

    friend bool operator==(const EntropyRow&, const EntropyRow&) = default;
};

/// Zips a trace with its Gronwall bound (the bound column may be empty).
std::vector<EntropyRow> entropy_rows(const RelEntropyTrace& trace, const GronwallFit& fit);

const std::vector<std::string>& energy_columns();
const std::vector<std::string>& entropy_columns();
const std::vector<std::string>& rei_columns();

void write_energy_csv(std::span<const EnergyReport> trace, const std::filesystem::path& path);
std::vector<EnergyReport> read_energy_csv(const std::filesystem::path& path);

void write_entropy_csv(std::span<const EntropyRow> rows, const std::filesystem::path& path);
std::vector<EntropyRow> read_entropy_csv(const std::filesystem::path& path);

void write_rei_csv(std::span<const REIReport> rows, const std::filesystem::path& path);
std::vector<REIReport> read_rei_csv(const std::filesystem::path& path);

/// Manufactured-solution table: study (spatial|temporal), n, dt, errors.
void write_convergence_csv(const ConvergenceTable& table, const std::filesystem::path& path);

/// Legacy ASCII VTK, STRUCTURED_POINTS with cell data c, p and the
/// cell-averaged velocity u (3 components, zero-padded in 2D).
void write_vtk(const State& state, const std::filesystem::path& path);

/// Provenance of one CLI run, written as manifest.json.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::string version;
    std::string start_time;  ///< UTC, ISO 8601
    std::string end_time;
    std::vector<std::string> outputs;  ///< file names relative to the output directory
    std::string status = "ok";
};

inline constexpr const char* kVersion = "0.1.0";

/// Current UTC wall time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

std::string manifest_json(const RunManifest& m);
void write_manifest(const RunManifest& m, const std::filesystem::path& path);

}  // namespace nsac
