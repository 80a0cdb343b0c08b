#include "hadopt/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace hadopt {

Matrix complement_basis(const Vector& normal) {
  const Index n = normal.size();
  const double nrm = normal.norm();
  if (n == 0 || !(nrm > 0.0)) {
    throw std::invalid_argument("complement_basis: normal must be nonzero");
  }
  Vector v = normal / nrm;
  const double sign = v(0) >= 0.0 ? 1.0 : -1.0;
  v(0) += sign;
  const double vv = v.squaredNorm();
  // H = I - 2 v v^T / (v^T v); H u = -sign e_1, so columns 1..n-1 are orthogonal to u.
  Matrix basis(n, n - 1);
  for (Index j = 1; j < n; ++j) {
    Vector col = -(2.0 * v(j) / vv) * v;
    col(j) += 1.0;
    basis.col(j - 1) = col;
  }
  return basis;
}

EigenEstimate dense_min_eig(const Matrix& symmetric) {
  EigenEstimate out;
  if (symmetric.rows() == 0) {
    out.value = std::numeric_limits<double>::infinity();
    out.converged = true;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric);
  if (es.info() != Eigen::Success) {
    out.converged = false;
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.value = es.eigenvalues()(0);
  out.vector = es.eigenvectors().col(0);
  out.converged = true;
  return out;
}

EigenEstimate lanczos_min_eig(const LinearOperator& op, const LinearOperator& project,
                              Index ambient_dim, Index subspace_dim,
                              const LanczosOptions& opts) {
  EigenEstimate out;
  if (subspace_dim <= 0) {
    out.value = std::numeric_limits<double>::infinity();
    out.converged = true;
    return out;
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector q(ambient_dim);
  for (Index i = 0; i < ambient_dim; ++i) q(i) = normal(rng);
  q = project(q);
  double qn = q.norm();
  if (!(qn > 0.0)) {
    throw std::runtime_error("lanczos_min_eig: start vector vanished under projection");
  }
  q /= qn;

  const int cap = static_cast<int>(std::min<Index>(subspace_dim, opts.max_iters));
  std::vector<Vector> basis;
  std::vector<double> alpha;
  std::vector<double> beta;
  basis.reserve(cap);
  basis.push_back(q);

  Eigen::SelfAdjointEigenSolver<Matrix> tri;
  for (int j = 0; j < cap; ++j) {
    Vector w = project(op(basis[j]));
    const double a = basis[j].dot(w);
    alpha.push_back(a);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& b : basis) w -= b.dot(w) * b;
    }
    const double b = w.norm();

    const Index k = static_cast<Index>(alpha.size());
    Vector diag = Eigen::Map<const Vector>(alpha.data(), k);
    Vector sub(k > 1 ? k - 1 : 0);
    for (Index i = 0; i + 1 < k; ++i) sub(i) = beta[static_cast<size_t>(i)];
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double theta = tri.eigenvalues()(0);
    const Vector s = tri.eigenvectors().col(0);
    const double residual = std::abs(b * s(k - 1));

    const bool exhausted = (k >= subspace_dim);
    const bool breakdown = b <= 1e-14 * std::max(1.0, std::abs(theta));
    if (residual <= opts.tol || exhausted || breakdown || j + 1 == cap) {
      Vector ritz = Vector::Zero(ambient_dim);
      for (Index i = 0; i < k; ++i) ritz += s(i) * basis[static_cast<size_t>(i)];
      out.value = theta;
      out.vector = ritz / ritz.norm();
      out.iterations = j + 1;
      out.converged = residual <= opts.tol || exhausted || breakdown;
      return out;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return out;  // unreachable: cap >= 1
}

double power_iteration_max_eig(const LinearOperator& op, Index dim, double rel_tol,
                               int max_iters, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = normal(rng);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = op(v);
    const double next = v.dot(w);
    const double wn = w.norm();
    if (!(wn > 0.0)) return 0.0;
    v = w / wn;
    if (it > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) {
      return std::max(next, wn);
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace hadopt
