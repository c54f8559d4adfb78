#include "nsac/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsac/errors.hpp"

namespace nsac {

double Grid::min_h() const {
    double m = h[0];
    for (int a = 1; a < dim; ++a) m = std::min(m, h[a]);
    return m;
}

Grid make_grid(int dim, std::span<const int> n, std::span<const double> length) {
    if (dim != 2 && dim != 3) {
        throw ValidationError("grid dimension must be 2 or 3, got " + std::to_string(dim));
    }
    if (n.size() != static_cast<std::size_t>(dim) || length.size() != static_cast<std::size_t>(dim)) {
        throw ValidationError("grid: expected " + std::to_string(dim) + " cell counts and extents");
    }
    Grid g;
    g.dim = dim;
    for (int a = 0; a < dim; ++a) {
        if (n[a] < 4) {
            throw ValidationError("grid: axis " + std::to_string(a) + " needs at least 4 cells");
        }
        if (!(length[a] > 0.0) || !std::isfinite(length[a])) {
            throw ValidationError("grid: axis " + std::to_string(a) + " extent must be positive");
        }
        g.n[a] = n[a];
        g.length[a] = length[a];
        g.h[a] = length[a] / n[a];
    }
    return g;
}

Grid make_uniform_grid(int dim, int n, double length) {
    if (dim != 2 && dim != 3) {
        throw ValidationError("grid dimension must be 2 or 3, got " + std::to_string(dim));
    }
    const std::array<int, 3> ns{n, n, n};
    const std::array<double, 3> ls{length, length, length};
    return make_grid(dim, std::span<const int>(ns.data(), dim), std::span<const double>(ls.data(), dim));
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) throw ValidationError(std::string(what) + ": grid mismatch");
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(const Grid& grid, double value, ScalarBC bc)
    : grid_(grid), values_(grid.cell_count(), value), bc_(bc) {}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_, "ScalarField +=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_, "ScalarField -=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

// ---------------------------------------------------------------------------
// FaceVectorField

FaceVectorField::FaceVectorField(const Grid& grid, VectorBC bc) : grid_(grid), bc_(bc) {
    for (int a = 0; a < grid.dim; ++a) comp_[a].assign(grid.face_count(a), 0.0);
}

void FaceVectorField::zero_boundary_normal() {
    for (int a = 0; a < grid_.dim; ++a) {
        const Index3 e = grid_.face_extents(a);
        for (int k = 0; k < e[2]; ++k)
            for (int j = 0; j < e[1]; ++j)
                for (int i = 0; i < e[0]; ++i) {
                    const Index3 idx{i, j, k};
                    if (idx[a] == 0 || idx[a] == grid_.n[a]) comp_[a][grid_.face_index(a, i, j, k)] = 0.0;
                }
    }
}

double FaceVectorField::max_boundary_normal() const {
    double m = 0.0;
    for (int a = 0; a < grid_.dim; ++a) {
        const Index3 e = grid_.face_extents(a);
        for (int k = 0; k < e[2]; ++k)
            for (int j = 0; j < e[1]; ++j)
                for (int i = 0; i < e[0]; ++i) {
                    const Index3 idx{i, j, k};
                    if (idx[a] == 0 || idx[a] == grid_.n[a])
                        m = std::max(m, std::abs(comp_[a][grid_.face_index(a, i, j, k)]));
                }
    }
    return m;
}

double FaceVectorField::max_abs(int axis) const {
    double m = 0.0;
    for (double v : comp_[axis]) m = std::max(m, std::abs(v));
    return m;
}

double FaceVectorField::max_abs() const {
    double m = 0.0;
    for (int a = 0; a < grid_.dim; ++a) m = std::max(m, max_abs(a));
    return m;
}

bool FaceVectorField::all_finite() const {
    for (int a = 0; a < grid_.dim; ++a)
        if (!std::all_of(comp_[a].begin(), comp_[a].end(), [](double v) { return std::isfinite(v); })) return false;
    return true;
}

FaceVectorField& FaceVectorField::operator+=(const FaceVectorField& o) {
    require_same_grid(grid_, o.grid_, "FaceVectorField +=");
    for (int a = 0; a < grid_.dim; ++a)
        for (std::size_t i = 0; i < comp_[a].size(); ++i) comp_[a][i] += o.comp_[a][i];
    return *this;
}

FaceVectorField& FaceVectorField::operator-=(const FaceVectorField& o) {
    require_same_grid(grid_, o.grid_, "FaceVectorField -=");
    for (int a = 0; a < grid_.dim; ++a)
        for (std::size_t i = 0; i < comp_[a].size(); ++i) comp_[a][i] -= o.comp_[a][i];
    return *this;
}

FaceVectorField& FaceVectorField::operator*=(double s) {
    for (int a = 0; a < grid_.dim; ++a)
        for (double& v : comp_[a]) v *= s;
    return *this;
}

FaceVectorField operator+(FaceVectorField a, const FaceVectorField& b) { return a += b; }
FaceVectorField operator-(FaceVectorField a, const FaceVectorField& b) { return a -= b; }
FaceVectorField operator*(double s, FaceVectorField a) { return a *= s; }

}  // namespace nsac
