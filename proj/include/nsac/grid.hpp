#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace nsac {

using Index3 = std::array<int, 3>;

/// Axis-aligned box [0,length_0] x ... split into uniform cells.
///
/// Storage is always three-wide; for dim == 2 the third axis is a single
/// dummy layer (n[2] == 1, h[2] == 1) that no operator differentiates along.
struct Grid {
    int dim = 2;
    Index3 n{1, 1, 1};
    std::array<double, 3> length{1.0, 1.0, 1.0};
    std::array<double, 3> h{1.0, 1.0, 1.0};

    std::size_t cell_count() const {
        return static_cast<std::size_t>(n[0]) * n[1] * n[2];
    }
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= h[a];
        return v;
    }
    double min_h() const;

    /// Extents of the face array holding the axis-normal velocity component.
    Index3 face_extents(int axis) const {
        Index3 e = n;
        e[axis] += 1;
        return e;
    }
    std::size_t face_count(int axis) const {
        const Index3 e = face_extents(axis);
        return static_cast<std::size_t>(e[0]) * e[1] * e[2];
    }

    std::size_t cell_index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(n[0]) * (j + static_cast<std::size_t>(n[1]) * k);
    }
    std::size_t face_index(int axis, int i, int j, int k) const {
        const Index3 e = face_extents(axis);
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(e[0]) * (j + static_cast<std::size_t>(e[1]) * k);
    }
    /// Cell-center coordinate along an axis.
    double center(int axis, int i) const { return (i + 0.5) * h[axis]; }
    /// Face (node) coordinate along an axis.
    double node(int axis, int i) const { return i * h[axis]; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Validating constructor; throws ValidationError on dim outside {2,3},
/// fewer than 4 cells along an axis, nonpositive extents, or a size mismatch.
Grid make_grid(int dim, std::span<const int> n, std::span<const double> length);

/// Square/cube of n^dim cells on [0,length]^dim.
Grid make_uniform_grid(int dim, int n, double length = 1.0);

enum class ScalarBC { neumann_zero, none };
enum class VectorBC { dirichlet_zero, none };

/// Cell-centered scalar (concentration, pressure, chemical residuals).
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& grid, double value = 0.0, ScalarBC bc = ScalarBC::neumann_zero);

    const Grid& grid() const { return grid_; }
    ScalarBC bc() const { return bc_; }
    void set_bc(ScalarBC bc) { bc_ = bc; }

    std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(int i, int j, int k = 0) { return values_[grid_.cell_index(i, j, k)]; }
    double at(int i, int j, int k = 0) const { return values_[grid_.cell_index(i, j, k)]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double min() const;
    double max() const;
    double max_abs() const;
    bool all_finite() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    Grid grid_{};
    std::vector<double> values_;
    ScalarBC bc_ = ScalarBC::neumann_zero;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Staggered vector: component a lives on the faces normal to axis a.
class FaceVectorField {
public:
    FaceVectorField() = default;
    explicit FaceVectorField(const Grid& grid, VectorBC bc = VectorBC::dirichlet_zero);

    const Grid& grid() const { return grid_; }
    VectorBC bc() const { return bc_; }
    void set_bc(VectorBC bc) { bc_ = bc; }

    std::vector<double>& component(int axis) { return comp_[axis]; }
    const std::vector<double>& component(int axis) const { return comp_[axis]; }
    double& at(int axis, int i, int j, int k = 0) { return comp_[axis][grid_.face_index(axis, i, j, k)]; }
    double at(int axis, int i, int j, int k = 0) const { return comp_[axis][grid_.face_index(axis, i, j, k)]; }

    /// Overwrite every boundary-normal face with zero.
    void zero_boundary_normal();
    /// Largest |value| on a boundary-normal face.
    double max_boundary_normal() const;

    double max_abs() const;
    double max_abs(int axis) const;
    bool all_finite() const;

    FaceVectorField& operator+=(const FaceVectorField& o);
    FaceVectorField& operator-=(const FaceVectorField& o);
    FaceVectorField& operator*=(double s);

    friend bool operator==(const FaceVectorField&, const FaceVectorField&) = default;

private:
    Grid grid_{};
    std::array<std::vector<double>, 3> comp_;
    VectorBC bc_ = VectorBC::dirichlet_zero;
};

FaceVectorField operator+(FaceVectorField a, const FaceVectorField& b);
FaceVectorField operator-(FaceVectorField a, const FaceVectorField& b);
FaceVectorField operator*(double s, FaceVectorField a);

/// Throws ValidationError unless both grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace nsac
