#include "nsac/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nsac/errors.hpp"

namespace nsac {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Shortest representation that reads back to the same double.
std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ValidationError("expected a number, got '" + std::string(s) + "'");
    }
    return v;
}

template <class Int>
Int parse_int(std::string_view s) {
    s = trim(s);
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ValidationError("expected an integer, got '" + std::string(s) + "'");
    }
    return v;
}

template <class T, class F>
std::vector<T> parse_list(std::string_view s, F&& item) {
    std::vector<T> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(item(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt(v[i]);
    }
    return out;
}

std::string plain_string(std::string_view s) {
    s = trim(s);
    if (s.empty()) throw ValidationError("expected a non-empty value");
    return std::string(s);
}

struct Key {
    std::string name;
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define NSAC_DOUBLE_KEY(key, member)                                                 \
    Key {                                                                            \
        key, [](ExperimentConfig& c, std::string_view v) { c.member = parse_double(v); }, \
            [](const ExperimentConfig& c) { return format_double(c.member); }       \
    }
#define NSAC_INT_KEY(key, member, type)                                                   \
    Key {                                                                                 \
        key, [](ExperimentConfig& c, std::string_view v) { c.member = parse_int<type>(v); }, \
            [](const ExperimentConfig& c) { return std::to_string(c.member); }           \
    }
#define NSAC_STRING_KEY(key, member)                                                  \
    Key {                                                                             \
        key, [](ExperimentConfig& c, std::string_view v) { c.member = plain_string(v); }, \
            [](const ExperimentConfig& c) { return c.member; }                       \
    }

const std::vector<Key>& keys() {
    static const std::vector<Key> k = {
        NSAC_INT_KEY("grid.dim", dim, int),
        Key{"grid.n",
            [](ExperimentConfig& c, std::string_view v) { c.levels = parse_list<int>(v, parse_int<int>); },
            [](const ExperimentConfig& c) {
                return join(c.levels, [](int n) { return std::to_string(n); });
            }},
        NSAC_DOUBLE_KEY("grid.length", length),
        NSAC_DOUBLE_KEY("fluid.nu", fluid.nu),
        NSAC_DOUBLE_KEY("fluid.eps", fluid.eps),
        NSAC_STRING_KEY("potential.kind", potential_kind),
        NSAC_DOUBLE_KEY("potential.f1", f1),
        NSAC_DOUBLE_KEY("potential.f2", f2),
        NSAC_DOUBLE_KEY("time.dt", dt),
        NSAC_INT_KEY("time.ref_n", ref_n, int),
        NSAC_DOUBLE_KEY("time.t_end", t_end),
        NSAC_STRING_KEY("init.kind", init_kind),
        NSAC_INT_KEY("init.seed", seed, std::uint64_t),
        NSAC_DOUBLE_KEY("init.radius", radius),
        NSAC_DOUBLE_KEY("init.noise", noise),
        NSAC_DOUBLE_KEY("init.vortex_amplitude", vortex_amplitude),
        Key{"perturbation.delta",
            [](ExperimentConfig& c, std::string_view v) { c.deltas = parse_list<double>(v, parse_double); },
            [](const ExperimentConfig& c) { return join(c.deltas, format_double); }},
        NSAC_DOUBLE_KEY("mms.amplitude_u", mms_amplitude_u),
        NSAC_DOUBLE_KEY("mms.amplitude_c", mms_amplitude_c),
        NSAC_DOUBLE_KEY("mms.amplitude_p", mms_amplitude_p),
        NSAC_DOUBLE_KEY("mms.t_end", mms_t_end),
        NSAC_DOUBLE_KEY("mms.dt", mms_dt),
        NSAC_INT_KEY("mms.temporal_n", mms_temporal_n, int),
        NSAC_DOUBLE_KEY("mms.temporal_dt", mms_temporal_dt),
        NSAC_STRING_KEY("output.dir", output_dir),
        NSAC_INT_KEY("output.every", output_every, int),
    };
    return k;
}

#undef NSAC_DOUBLE_KEY
#undef NSAC_INT_KEY
#undef NSAC_STRING_KEY

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << msg;
    throw ValidationError(os.str());
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const Key& k : keys()) n.push_back(k.name);
        return n;
    }();
    return names;
}

ExperimentConfig parse_config_text(std::string_view text, const std::string& origin) {
    ExperimentConfig cfg;
    std::map<std::string, int> seen;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;

        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(origin, line_no, "malformed line, expected 'section.key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos) {
            fail(origin, line_no, "malformed key '" + key + "', expected 'section.key'");
        }
        if (value.empty()) fail(origin, line_no, key + ": missing value");
        const auto it = std::find_if(keys().begin(), keys().end(), [&](const Key& k) { return k.name == key; });
        if (it == keys().end()) fail(origin, line_no, "unknown key '" + key + "'");
        if (!seen.emplace(key, line_no).second) fail(origin, line_no, key + ": repeated key");
        try {
            it->set(cfg, value);
        } catch (const ValidationError& e) {
            fail(origin, line_no, key + ": " + e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const ValidationError& e) {
        // validate() messages start with the key; point at its line if present.
        const std::string msg = e.what();
        const std::string key = msg.substr(0, msg.find(':'));
        const auto s = seen.find(key);
        if (s != seen.end()) fail(origin, s->second, msg);
        throw ValidationError(origin + ": " + msg);
    }
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Key& k : keys()) out.emplace_back(k.name, k.get(cfg));
    return out;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [k, v] : config_entries(cfg)) out += k + " = " + v + "\n";
    return out;
}

}  // namespace nsac
