#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace hadopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

using LinearOperator = std::function<Vector(const Vector&)>;

/// Orthonormal basis of the orthogonal complement of `normal` in R^n, as the
/// trailing n-1 columns of the Householder reflector that maps normal/|normal|
/// onto a coordinate axis. `normal` must be nonzero.
Matrix complement_basis(const Vector& normal);

struct EigenEstimate {
  double value = 0.0;
  Vector vector;  // unit eigenvector (empty when the subspace is trivial)
  bool converged = false;
  int iterations = 0;
};

struct LanczosOptions {
  double tol = 1e-10;  // absolute residual |beta_k s_k| for the smallest Ritz pair
  int max_iters = 500;
  std::uint64_t seed = 0x5eedULL;
};

/// Smallest eigenvalue of a symmetric operator restricted to the range of the
/// orthogonal projector `project` (of dimension `subspace_dim`). Lanczos with
/// full reorthogonalization; the start vector is drawn from a fixed-seed RNG so
/// the result is a pure function of its inputs.
EigenEstimate lanczos_min_eig(const LinearOperator& op, const LinearOperator& project,
                              Index ambient_dim, Index subspace_dim,
                              const LanczosOptions& opts = {});

/// Smallest eigenpair of a dense symmetric matrix.
EigenEstimate dense_min_eig(const Matrix& symmetric);

/// Largest eigenvalue of a symmetric positive semidefinite operator by power
/// iteration, stopped when the Rayleigh quotient changes by less than
/// rel_tol relative.
double power_iteration_max_eig(const LinearOperator& op, Index dim, double rel_tol = 1e-6,
                               int max_iters = 10000, std::uint64_t seed = 0x5eedULL);

}  // namespace hadopt
