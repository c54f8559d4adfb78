#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nsac/experiments.hpp"

namespace nsac {

// Config files are line oriented:
//
//   # comment
//   section.key = value
//
// Lists (grid.n, perturbation.delta) are comma separated. Every key is
// optional; see config_keys() for the full set and ExperimentConfig for the
// defaults. Unknown or repeated keys, malformed lines and out-of-range
// values raise ValidationError with the offending line number.

/// Parses config text. `origin` prefixes error messages (usually the path).
ExperimentConfig parse_config_text(std::string_view text, const std::string& origin = "<config>");

/// Reads and parses a file. Throws ValidationError if it cannot be read.
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Every key with its resolved value, in a fixed order, one per line.
/// parse_config_text(serialize_config(c)) == c for every valid c.
std::string serialize_config(const ExperimentConfig& cfg);

/// Recognized keys in serialization order.
const std::vector<std::string>& config_keys();

/// Resolved (key, value) pairs as serialized, for manifests.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);

}  // namespace nsac
