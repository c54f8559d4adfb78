#pragma once

#include <doctest.h>

#include <cmath>
#include <random>

#include "nsac/grid.hpp"

namespace nsac::test {

inline ScalarField random_scalar(const Grid& g, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    ScalarField f(g);
    for (auto& v : f.values()) v = d(rng);
    return f;
}

// Random face field with zero boundary-normal values.
inline FaceVectorField random_faces(const Grid& g, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    FaceVectorField v(g);
    for (int a = 0; a < g.dim; ++a)
        for (auto& x : v.component(a)) x = d(rng);
    v.zero_boundary_normal();
    return v;
}

inline double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_diff(const FaceVectorField& a, const FaceVectorField& b) {
    double m = 0.0;
    for (int ax = 0; ax < 3; ++ax) {
        const auto& x = a.component(ax);
        const auto& y = b.component(ax);
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    }
    return m;
}

}  // namespace nsac::test
