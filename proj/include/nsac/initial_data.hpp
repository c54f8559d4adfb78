#pragma once

#include <cstdint>
#include <functional>

#include "nsac/grid.hpp"
#include "nsac/potential.hpp"
#include "nsac/solver.hpp"

namespace nsac {

/// Rest state with a tanh disk (ball in 3D): c = tanh((r - radius)/(sqrt(2) eps)),
/// so the inside sits near -1. Radius and center are in units of the
/// shortest box side; the center defaults to the box midpoint.
State bubble_state(const Grid& g, double eps, double radius = 0.25);

/// Rest state with c uniform in [-amplitude, amplitude], drawn cell by cell
/// from mt19937_64(seed) as (x >> 11) * 2^-53.
State spinodal_state(const Grid& g, std::uint64_t seed, double amplitude = 0.05);

/// Single vortex from psi = (amplitude/pi) sin^2(pi x/Lx) sin^2(pi y/Ly)
/// (times sin^2(pi z/Lz) in 3D) with uniform concentration.
State vortex_state(const Grid& g, double amplitude, double c_value);

/// u = 0, c = c_value, p = 0.
State equilibrium_state(const Grid& g, double c_value);

/// Discrete curl of a stream function sampled at (x node, y node, z center):
/// u_x = d_y psi, u_y = -d_x psi, u_z = 0. Exactly divergence-free; the
/// boundary-normal faces vanish whenever psi does on the walls.
FaceVectorField velocity_from_stream(const Grid& g, const std::function<double(double, double, double)>& psi);

/// Fixed solenoidal direction with (1/2) int |v|^2 = 1 (cell-averaged
/// kinetic energy), from psi = sin^2(2 pi x/Lx) sin^2(pi y/Ly) [sin^2(pi z/Lz)].
FaceVectorField perturbation_direction(const Grid& g);

/// Volume-weighted average of fine cells onto a coarse grid whose counts
/// divide the fine counts; same extents required.
ScalarField restrict_scalar(const ScalarField& fine, const Grid& coarse);

/// Area-weighted average of the fine sub-faces that tile each coarse face.
/// Preserves face fluxes, hence discrete divergence-freeness.
FaceVectorField restrict_faces(const FaceVectorField& fine, const Grid& coarse);

State restrict_state(const State& fine, const Grid& coarse);

/// Analytic solution on the unit square used for solver verification:
///   u = curl[(A g/pi) sin^2(pi x) sin^2(pi y)],  c = B g cos(pi x) cos(pi y),
///   p = P g cos(pi x) cos(pi y),  g(t) = 1 + sin(pi t)/2.
/// forcing() returns the body sources that make it an exact solution of the
/// continuous system with the modified-pressure capillary form.
struct ManufacturedSolution {
    double A = 1.0;
    double B = 0.5;
    double P = 0.1;
    FluidParams params;
    DoubleWell well;

    static double g(double t);
    static double dg(double t);

    /// Throws ValidationError unless the grid is the 2D unit square.
    static void require_unit_square(const Grid& grid);

    /// Exact fields sampled at time t (u pointwise at face centers).
    FaceVectorField velocity(const Grid& grid, double t) const;
    ScalarField concentration(const Grid& grid, double t) const;
    ScalarField pressure(const Grid& grid, double t) const;

    /// Initial state: discrete curl of the stream function, sampled c and p.
    State initial_state(const Grid& grid) const;

    Forcing forcing(const Grid& grid) const;
};

}  // namespace nsac
