#pragma once

#include <functional>
#include <string>

namespace nsac {

/// Double-well energy density F with minimizers y1 < y2 inside the admissible
/// interval [f1, f2], and the Lipschitz constant L of F' on that interval.
///
/// The record is deliberately open: F and F' are callables so alternative
/// wells plug into the solver and diagnostics unchanged. Use quartic_well()
/// for the standard instance.
struct DoubleWell {
    std::string kind;
    double f1 = -2.0;
    double f2 = 2.0;
    double y1 = -1.0;
    double y2 = 1.0;
    double lipschitz = 11.0;
    std::function<double(double)> F;
    std::function<double(double)> dF;

    double eval_F(double c) const { return F(c); }
    double eval_Fprime(double c) const { return dF(c); }
    double lipschitz_constant() const { return lipschitz; }
};

/// F(c) = (c^2 - 1)^2 / 4 on [f1, f2], continued outside by the quadratic
/// Taylor polynomial at the nearer endpoint so F' stays globally Lipschitz
/// with the same constant L = max |3c^2 - 1| over [f1, f2].
///
/// Throws ValidationError unless f1 <= -1 and 1 <= f2.
DoubleWell quartic_well(double f1 = -2.0, double f2 = 2.0);

/// Looks up a well by config name; only "quartic" is defined.
DoubleWell make_well(const std::string& kind, double f1, double f2);

/// Throws ValidationError if the record breaks f1 < y1 < y2 < f2, the
/// stationarity of the minimizers, or L > 0.
void validate_well(const DoubleWell& w);

}  // namespace nsac
