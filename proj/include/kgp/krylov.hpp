// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_KRYLOV_HPP
#define KGP_KRYLOV_HPP

#include <functional>
#include <span>

namespace kgp
{

// y = A x for a matrix-free operator on real vectors.
using LinearMap = std::function<void(std::span<const double> x, std::span<double> y)>;

struct KrylovResult
{
  bool converged = false;
  int iterations = 0;
  double relative_residual = 1.0;
};

//
// Restarted GMRES with right preconditioning: solves A x = rhs through A M^{-1} y = rhs,
// x = M^{-1} y, where precond applies M^{-1}. x holds the initial guess on entry.
// Convergence is ||rhs - A x|| <= tol * ||rhs||.
//
KrylovResult gmres(const LinearMap &A, const LinearMap &precond, std::span<const double> rhs,
                   std::span<double> x, double tol, int max_iterations, int restart = 60);

}  // namespace kgp

#endif  // KGP_KRYLOV_HPP
