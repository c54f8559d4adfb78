#pragma once

#include <stdexcept>
#include <string>

namespace nsac {

/// Bad input: malformed config, out-of-range parameter, mismatched grids.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The numerics gave up: solver stalled, CFL guard tripped, audit failed.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nsac
