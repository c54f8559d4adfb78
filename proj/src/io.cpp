#include "nsac/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nsac/errors.hpp"
#include "nsac/operators.hpp"

namespace nsac {
namespace {

template <class Row>
struct Column {
    std::string name;
    double Row::*member;
};

template <class Row>
using Schema = std::vector<Column<Row>>;

const Schema<EnergyReport>& energy_schema() {
    static const Schema<EnergyReport> s = {
        {"t", &EnergyReport::t},
        {"kinetic", &EnergyReport::kinetic},
        {"interfacial", &EnergyReport::interfacial},
        {"potential", &EnergyReport::potential},
        {"viscous_diss", &EnergyReport::viscous_diss},
        {"ac_diss", &EnergyReport::ac_diss},
        {"cumulative_diss", &EnergyReport::cumulative_diss},
        {"audit_violation", &EnergyReport::audit_violation},
    };
    return s;
}

const Schema<EntropyRow>& entropy_schema() {
    static const Schema<EntropyRow> s = {
        {"t", &EntropyRow::t},         {"E", &EntropyRow::E},
        {"D", &EntropyRow::D},         {"omega", &EntropyRow::omega},
        {"bound_curve", &EntropyRow::bound_curve},
    };
    return s;
}

const Schema<REIReport>& rei_schema() {
    static const Schema<REIReport> s = {
        {"t", &REIReport::t},
        {"lhs_entropy_gap", &REIReport::lhs_entropy_gap},
        {"lhs_visc", &REIReport::lhs_visc},
        {"lhs_ac", &REIReport::lhs_ac},
        {"r_conv", &REIReport::r_conv},
        {"r_eps1", &REIReport::r_eps1},
        {"r_eps2", &REIReport::r_eps2},
        {"r_eps3", &REIReport::r_eps3},
        {"r_eps4", &REIReport::r_eps4},
        {"r_f", &REIReport::r_f},
        {"slack", &REIReport::slack},
    };
    return s;
}

template <class Row>
std::vector<std::string> names(const Schema<Row>& s) {
    std::vector<std::string> out;
    for (const auto& c : s) out.push_back(c.name);
    return out;
}

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path) {
    out.close();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = line.find(',');
        out.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return out;
}

template <class Row>
void write_table(std::span<const Row> rows, const Schema<Row>& schema, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    std::string line;
    for (std::size_t i = 0; i < schema.size(); ++i) line += (i ? "," : "") + schema[i].name;
    out << line << '\n';
    for (const Row& r : rows) {
        line.clear();
        for (std::size_t i = 0; i < schema.size(); ++i) {
            if (i) line += ',';
            line += fmt17(r.*(schema[i].member));
        }
        out << line << '\n';
    }
    close_checked(out, path);
}

template <class Row>
std::vector<Row> read_table(const Schema<Row>& schema, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    const std::string where = path.string();
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(where + ": missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line);
    for (std::size_t i = 0; i < std::max(header.size(), schema.size()); ++i) {
        if (i >= header.size()) throw ValidationError(where + ": header lacks column '" + schema[i].name + "'");
        if (i >= schema.size()) {
            throw ValidationError(where + ": unexpected extra column '" + std::string(header[i]) + "'");
        }
        if (header[i] != schema[i].name) {
            throw ValidationError(where + ": expected column '" + schema[i].name + "', found '" +
                                  std::string(header[i]) + "'");
        }
    }
    std::vector<Row> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != schema.size()) {
            const std::string col = cells.size() < schema.size() ? "missing column '" + schema[cells.size()].name + "'"
                                                                 : "extra value after column '" + schema.back().name + "'";
            throw ValidationError(where + ":" + std::to_string(line_no) + ": column count mismatch, " + col);
        }
        Row r{};
        for (std::size_t i = 0; i < schema.size(); ++i) {
            double v = 0.0;
            const std::string_view s = cells[i];
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
                throw ValidationError(where + ":" + std::to_string(line_no) + ": column '" + schema[i].name +
                                      "' is not a number");
            }
            r.*(schema[i].member) = v;
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

std::vector<EntropyRow> entropy_rows(const RelEntropyTrace& trace, const GronwallFit& fit) {
    std::vector<EntropyRow> rows(trace.times.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].t = trace.times[i];
        rows[i].E = trace.E[i];
        rows[i].D = trace.D[i];
        rows[i].omega = trace.omega[i];
        rows[i].bound_curve = i < fit.bound_curve.size() ? fit.bound_curve[i] : 0.0;
    }
    return rows;
}

const std::vector<std::string>& energy_columns() {
    static const auto n = names(energy_schema());
    return n;
}
const std::vector<std::string>& entropy_columns() {
    static const auto n = names(entropy_schema());
    return n;
}
const std::vector<std::string>& rei_columns() {
    static const auto n = names(rei_schema());
    return n;
}

void write_energy_csv(std::span<const EnergyReport> trace, const std::filesystem::path& path) {
    write_table(trace, energy_schema(), path);
}
std::vector<EnergyReport> read_energy_csv(const std::filesystem::path& path) {
    return read_table(energy_schema(), path);
}

void write_entropy_csv(std::span<const EntropyRow> rows, const std::filesystem::path& path) {
    write_table(rows, entropy_schema(), path);
}
std::vector<EntropyRow> read_entropy_csv(const std::filesystem::path& path) {
    return read_table(entropy_schema(), path);
}

void write_rei_csv(std::span<const REIReport> rows, const std::filesystem::path& path) {
    write_table(rows, rei_schema(), path);
}
std::vector<REIReport> read_rei_csv(const std::filesystem::path& path) { return read_table(rei_schema(), path); }

void write_convergence_csv(const ConvergenceTable& table, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "study,n,dt,error_u,error_c,error\n";
    const auto emit = [&](const char* study, const ConvergenceRow& r) {
        out << study << ',' << r.n << ',' << fmt17(r.dt) << ',' << fmt17(r.error_u) << ',' << fmt17(r.error_c) << ','
            << fmt17(r.error) << '\n';
    };
    for (const auto& r : table.spatial) emit("spatial", r);
    for (const auto& r : table.temporal) emit("temporal", r);
    close_checked(out, path);
}

void write_vtk(const State& state, const std::filesystem::path& path) {
    const Grid& g = state.c.grid();
    std::ofstream out = open_out(path);
    out << "# vtk DataFile Version 3.0\n";
    out << "nsac t=" << fmt17(state.t) << "\n";
    out << "ASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.n[0] + 1 << ' ' << g.n[1] + 1 << ' ' << (g.dim == 3 ? g.n[2] + 1 : 1) << '\n';
    out << "ORIGIN 0 0 0\n";
    out << "SPACING " << fmt17(g.h[0]) << ' ' << fmt17(g.h[1]) << ' ' << fmt17(g.dim == 3 ? g.h[2] : 1.0) << '\n';
    out << "CELL_DATA " << g.cell_count() << '\n';
    const auto scalars = [&](const char* name, const ScalarField& f) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (double v : f.values()) out << fmt17(v) << '\n';
    };
    scalars("c", state.c);
    scalars("p", state.p);
    std::array<ScalarField, 3> u;
    for (int a = 0; a < 3; ++a) u[a] = a < g.dim ? cell_component(state.u, a) : ScalarField(g, 0.0, ScalarBC::none);
    out << "VECTORS u double\n";
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
        out << fmt17(u[0][i]) << ' ' << fmt17(u[1][i]) << ' ' << fmt17(u[2][i]) << '\n';
    }
    close_checked(out, path);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["version"] = m.version;
    j["status"] = m.status;
    j["start_time"] = m.start_time;
    j["end_time"] = m.end_time;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.config) cfg[k] = v;
    j["config"] = cfg;
    j["outputs"] = m.outputs;
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << manifest_json(m);
    close_checked(out, path);
}

}  // namespace nsac
