#include "nsac/potential.hpp"

#include <algorithm>
#include <cmath>

#include "nsac/errors.hpp"

namespace nsac {
namespace {

double quartic(double c) {
    const double s = c * c - 1.0;
    return 0.25 * s * s;
}
double quartic_d1(double c) { return c * c * c - c; }
double quartic_d2(double c) { return 3.0 * c * c - 1.0; }

}  // namespace

DoubleWell quartic_well(double f1, double f2) {
    // Closed containment of the wells is enough to build the record; the
    // strict ordering required of a simulation well is checked by validate_well.
    if (!(std::isfinite(f1) && std::isfinite(f2) && f1 <= -1.0 && f2 >= 1.0)) {
        throw ValidationError("quartic well needs f1 <= -1 and f2 >= 1");
    }
    DoubleWell w;
    w.kind = "quartic";
    w.f1 = f1;
    w.f2 = f2;
    w.y1 = -1.0;
    w.y2 = 1.0;
    // |F''| on [f1,f2] peaks at an endpoint (or is 1 at c = 0, which the
    // interval always contains).
    w.lipschitz = std::max({std::abs(quartic_d2(f1)), std::abs(quartic_d2(f2)), 1.0});

    const double F_lo = quartic(f1), d1_lo = quartic_d1(f1), d2_lo = quartic_d2(f1);
    const double F_hi = quartic(f2), d1_hi = quartic_d1(f2), d2_hi = quartic_d2(f2);
    w.F = [=](double c) {
        if (c < f1) {
            const double d = c - f1;
            return F_lo + d1_lo * d + 0.5 * d2_lo * d * d;
        }
        if (c > f2) {
            const double d = c - f2;
            return F_hi + d1_hi * d + 0.5 * d2_hi * d * d;
        }
        return quartic(c);
    };
    w.dF = [=](double c) {
        if (c < f1) return d1_lo + d2_lo * (c - f1);
        if (c > f2) return d1_hi + d2_hi * (c - f2);
        return quartic_d1(c);
    };
    return w;
}

DoubleWell make_well(const std::string& kind, double f1, double f2) {
    if (kind == "quartic") {
        DoubleWell w = quartic_well(f1, f2);
        validate_well(w);
        return w;
    }
    throw ValidationError("potential.kind: unknown well '" + kind + "'");
}

void validate_well(const DoubleWell& w) {
    if (!w.F || !w.dF) throw ValidationError("double well: F and F' must be set");
    if (!(w.f1 < w.y1 && w.y1 < w.y2 && w.y2 < w.f2)) {
        throw ValidationError("double well: need f1 < y1 < y2 < f2");
    }
    if (std::abs(w.dF(w.y1)) > 1e-12 || std::abs(w.dF(w.y2)) > 1e-12) {
        throw ValidationError("double well: F' must vanish at the minimizers");
    }
    if (!(w.lipschitz > 0.0)) throw ValidationError("double well: Lipschitz constant must be positive");
}

}  // namespace nsac
