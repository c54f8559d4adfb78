#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nsac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Full command-line behavior of the nsac tool. args excludes the program
/// name. Returns the process exit code: 0 on success, 1 on usage or
/// validation errors, 2 on numerical failure (solver breakdown, CFL guard,
/// failed audit or bound).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsac::cli
