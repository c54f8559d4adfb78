#pragma once

#include <memory>
#include <span>

#include "nsac/grid.hpp"

namespace nsac {

/// Direct solver for (shift I - scale Lap) x = b with the reflected-ghost
/// Laplacian, which cosine transforms diagonalize exactly. Used to
/// precondition the conjugate-gradient solves.
class NeumannSpectralSolver {
public:
    explicit NeumannSpectralSolver(const Grid& g);
    ~NeumannSpectralSolver();
    NeumannSpectralSolver(const NeumannSpectralSolver&) = delete;
    NeumannSpectralSolver& operator=(const NeumannSpectralSolver&) = delete;

    /// shift >= 0, scale > 0. With shift == 0 the constant mode of x is set
    /// to zero (pseudo-inverse on mean-free data).
    void solve(double shift, double scale, std::span<const double> b, std::span<double> x) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Shared per-grid instance (plans are built once and reused).
const NeumannSpectralSolver& spectral_solver_for(const Grid& g);

}  // namespace nsac
