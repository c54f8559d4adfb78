#pragma once

#include "nsac/grid.hpp"

namespace nsac {

// Discrete calculus on the MAC grid.
//
// Scalars sit at cell centers with reflected (zero-Neumann) ghosts, velocity
// components sit on the faces normal to their axis with zero boundary-normal
// values and antisymmetric tangential ghosts (no-slip). With these choices
// -gradient is the exact adjoint of divergence under midpoint quadrature,
// which is what lets the energy and relative-entropy budgets close discretely.

/// Face differences (c_R - c_L)/h; zero on every boundary face.
FaceVectorField gradient(const ScalarField& c);

/// Per-cell sum of face differences over h.
ScalarField divergence(const FaceVectorField& v);

/// 2*dim+1 point Laplacian with reflected ghosts; bitwise equal to
/// divergence(gradient(c)).
ScalarField laplacian(const ScalarField& c);

/// Midpoint rule: sum of values times cell volume.
double integrate(const ScalarField& f);

/// Sum over faces of a.b times the dual-cell volume (boundary faces count
/// half). For fields with zero boundary-normal values this is the plain
/// face sum times the cell volume.
double face_inner(const FaceVectorField& a, const FaceVectorField& b);

/// Mean of the two faces bounding each cell, for one component.
ScalarField cell_component(const FaceVectorField& v, int axis);

/// Sum over axes of the face-averaged squares, i.e. |v|^2 at cells.
ScalarField cell_magnitude_squared(const FaceVectorField& v);

/// Average of the two adjacent cells on interior faces, zero on boundary faces.
FaceVectorField face_average(const ScalarField& c);

/// Cell-centered u.grad(c), formed as the face products u_a * (grad c)_a
/// averaged back to cells. Its cell/face adjoint is face_average(q)*grad(c).
ScalarField advect_scalar(const FaceVectorField& u, const ScalarField& c);

/// Component-wise Laplacian with no-slip ghosts. Boundary-normal faces of
/// the result are zero.
FaceVectorField vector_laplacian(const FaceVectorField& v);

/// Skew-symmetric transport of v by w, (1/2)[(w.grad)v + div(w (x) v)], built
/// from central fluxes on the momentum control volumes. face_inner(N(w)v, v)
/// vanishes to roundoff for any w with zero boundary-normal values.
FaceVectorField skew_advection(const FaceVectorField& w, const FaceVectorField& v);

/// -face_inner(v, vector_laplacian(v)) assembled directly as a sum of squared
/// differences (half weight on wall edges).
double dirichlet_energy(const FaceVectorField& v);

// ---------------------------------------------------------------------------
// Edge machinery. An (a,b) edge sits at face positions along both a and b and
// at cell positions along the remaining axis. Edge extents are n with +1 on
// axes a and b.

Index3 edge_extents(const Grid& g, int a, int b);

/// Quadrature weight (fraction of a cell volume) of an (a,b) edge: 1/2 for
/// every one of a, b on which the edge touches the boundary.
double edge_weight(const Grid& g, int a, int b, const Index3& e);

/// Value of a face array X (normal axis `normal`) at the edge, averaged along
/// `along`. Out-of-range neighbors are ghost_sign * (mirror value).
double edge_average(const Grid& g, const std::vector<double>& x, int normal, int along, const Index3& e,
                    double ghost_sign);

/// Difference of a face array X along `along` at the edge, divided by h.
double edge_difference(const Grid& g, const std::vector<double>& x, int normal, int along, const Index3& e,
                       double ghost_sign);

/// (d_b v_a + d_a v_b)^2 at every (a,b) edge, in edge_extents order.
std::vector<double> edge_shear_squared(const FaceVectorField& v, int a, int b);

}  // namespace nsac
