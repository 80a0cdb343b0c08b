#pragma once
// Independent reference computations for the tests. Nothing here calls into
// the library's numerical routines.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline double fd_step(const Vector& z) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, z.norm());
}

// Central-difference gradient.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& z) {
  const double h = fd_step(z);
  Vector g(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    Vector p = z, m = z;
    p(i) += h;
    m(i) -= h;
    g(i) = (f(p) - f(m)) / (2.0 * h);
  }
  return g;
}

// Central difference of a gradient along d.
inline Vector fd_directional(const std::function<Vector(const Vector&)>& grad, const Vector& z,
                             const Vector& d) {
  const double h = fd_step(z) / std::max(1.0, d.norm());
  return (grad(z + h * d) - grad(z - h * d)) / (2.0 * h);
}

inline double rel_err(const Vector& approx, const Vector& exact) {
  return (approx - exact).norm() / std::max(exact.norm(), 1e-300);
}

inline Vector random_unit(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v / v.norm();
}

inline Vector random_gaussian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

// Orthonormal basis of {u : <u, normal> = 0} from a full QR factorization.
inline Matrix null_basis(const Vector& normal) {
  const Matrix N = normal;
  Eigen::HouseholderQR<Matrix> qr(N);
  const Matrix Q = qr.householderQ() * Matrix::Identity(normal.size(), normal.size());
  return Q.rightCols(normal.size() - 1);
}

inline double min_eig(const Matrix& S) {
  if (S.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Simplex projection by enumerating supports: the unique support whose
// threshold leaves every kept entry positive and every dropped entry below it.
inline Vector qp_project_simplex(const Vector& y) {
  const Index n = y.size();
  double best = std::numeric_limits<double>::infinity();
  Vector best_x;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    double s = 0.0;
    int k = 0;
    for (Index i = 0; i < n; ++i)
      if (mask & (1ul << i)) {
        s += y(i);
        ++k;
      }
    const double tau = (s - 1.0) / k;
    bool ok = true;
    Vector x = Vector::Zero(n);
    for (Index i = 0; i < n && ok; ++i) {
      if (mask & (1ul << i)) {
        x(i) = y(i) - tau;
        if (x(i) < 0.0) ok = false;
      } else if (y(i) - tau > 0.0) {
        ok = false;
      }
    }
    if (!ok) continue;
    const double d = (x - y).squaredNorm();
    if (d < best) {
      best = d;
      best_x = x;
    }
  }
  return best_x;
}

// Global minimum of x^T Q x / 2 + c^T x over the simplex for convex Q, by
// solving the equality-constrained KKT system on every support.
struct QpSolution {
  Vector x;
  double value = std::numeric_limits<double>::infinity();
};

inline QpSolution qp_simplex_min(const Matrix& Q, const Vector& c) {
  const Index n = c.size();
  QpSolution best;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    std::vector<Index> S;
    for (Index i = 0; i < n; ++i)
      if (mask & (1ul << i)) S.push_back(i);
    const Index k = static_cast<Index>(S.size());
    Matrix K = Matrix::Zero(k + 1, k + 1);
    Vector rhs(k + 1);
    for (Index a = 0; a < k; ++a) {
      for (Index b = 0; b < k; ++b) K(a, b) = Q(S[a], S[b]);
      K(a, k) = -1.0;
      K(k, a) = 1.0;
      rhs(a) = -c(S[a]);
    }
    rhs(k) = 1.0;
    const Vector sol = K.colPivHouseholderQr().solve(rhs);
    if ((K * sol - rhs).norm() > 1e-9) continue;
    Vector x = Vector::Zero(n);
    bool ok = true;
    for (Index a = 0; a < k; ++a) {
      x(S[a]) = sol(a);
      if (sol(a) < -1e-12) ok = false;
    }
    if (!ok) continue;
    x = x.cwiseMax(0.0);
    const double v = 0.5 * x.dot(Q * x) + c.dot(x);
    if (v < best.value) {
      best.value = v;
      best.x = x;
    }
  }
  return best;
}

// Coordinate descent for min |Ax - b|^2 + mu |x|_1.
inline Vector cd_lasso_penalized(const Matrix& A, const Vector& b, double mu, int sweeps = 20000,
                                 double tol = 1e-15) {
  const Index n = A.cols();
  Vector x = Vector::Zero(n);
  Vector r = b;
  const Vector col_sq = A.colwise().squaredNorm().transpose();
  for (int s = 0; s < sweeps; ++s) {
    double moved = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double rho = A.col(j).dot(r) + col_sq(j) * x(j);
      const double shrunk = std::copysign(std::max(std::abs(rho) - mu / 2.0, 0.0), rho) / col_sq(j);
      const double delta = shrunk - x(j);
      if (delta != 0.0) {
        r -= delta * A.col(j);
        x(j) = shrunk;
        moved = std::max(moved, std::abs(delta));
      }
    }
    if (moved < tol) break;
  }
  return x;
}

// min |Ax - b|^2 over |x|_1 <= radius when the unconstrained minimizer lies
// outside: bisect the penalty until the penalized solution has norm radius.
inline Vector cd_lasso_constrained(const Matrix& A, const Vector& b, double radius = 1.0) {
  double lo = 0.0;
  double hi = 2.0 * (A.transpose() * b).cwiseAbs().maxCoeff();
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cd_lasso_penalized(A, b, mid).lpNorm<1>() > radius)
      lo = mid;
    else
      hi = mid;
  }
  return cd_lasso_penalized(A, b, hi);
}

}  // namespace oracle
