#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nsac {

/// Matrix-free linear operator: y = A x.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

struct SolveOptions {
    double rel_tol = 1e-10;
    int max_iterations = 1000;
    /// Keep iterates orthogonal to constants (pure-Neumann Poisson).
    bool project_mean = false;
    /// Approximate inverse z = M^{-1} r (symmetric positive definite for CG);
    /// empty means no preconditioning.
    LinearOperator preconditioner;
};

/// (Preconditioned) conjugate gradients for symmetric positive (semi)definite A. x holds the
/// initial guess on entry and the solution on exit. A zero right-hand side
/// returns x = 0 immediately.
SolveStats conjugate_gradient(const LinearOperator& A, std::span<const double> b, std::span<double> x,
                              const SolveOptions& opt);

/// BiCGSTAB for nonsymmetric A (same conventions as conjugate_gradient).
SolveStats bicgstab(const LinearOperator& A, std::span<const double> b, std::span<double> x,
                    const SolveOptions& opt);

}  // namespace nsac
