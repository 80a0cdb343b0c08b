#pragma once

#include "hadopt/hadamard.hpp"
#include "hadopt/optimizers.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hadopt {

/// Least-squares objective |Ax - b|^2 with analytic gradient and Hessian.
Objective least_squares_objective(Matrix A, Vector b, std::optional<double> L = std::nullopt,
                                  std::optional<double> M = std::nullopt);

/// 2 sigma_max(A)^2 by power iteration on the smaller Gram matrix, accurate to 1e-6 relative.
double least_squares_lipschitz(const Matrix& A);

/// max over the simplex of |2 A^T (A x - b)|_inf. Exact (attained at a vertex)
/// for n <= 2000; above that a Cauchy-Schwarz upper bound.
double least_squares_grad_inf_bound(const Matrix& A, const Vector& b);

struct LeastSquaresProblem {
  Matrix A;
  Vector b;
  Vector x_true;
  TruthKind truth = TruthKind::Interior;
  std::uint64_t seed = 0;
  double L = 0.0;
  double M = 0.0;

  Objective objective() const;
};

/// A is m x n standard Gaussian with m = max(1, round(0.1 n)); b = A x_true.
/// Interior truth is uniform on the simplex, boundary truth the projection of
/// a standard Gaussian.
LeastSquaresProblem gen_least_squares(Index n, TruthKind truth, std::uint64_t seed);

/// f(x) = -|x|^2: the uniform point is a strict saddle, vertices are minimizers.
Objective gen_strict_saddle(Index n);

struct QuadraticProblem {
  Matrix Q;
  Vector c;
  bool convex = true;
  double L = 0.0;
  double M = 0.0;

  Objective objective() const;
};

/// f(x) = x^T Q x / 2 + c^T x. Convex: Q = B^T B / n; otherwise Q = (B + B^T) / 2.
QuadraticProblem gen_random_quadratic(Index n, bool convex, std::uint64_t seed);

struct LassoProblem {
  Matrix A;
  Vector b;
  Vector x_true;     // sparse, |x_true|_1 = 1
  Vector reference;  // projected gradient on the l1 ball
  double L = 0.0;

  Objective objective() const;
};

/// Reference solver: projected gradient with step 1/L on the l1 ball until
/// successive iterates differ by at most tol.
Vector l1_projected_gradient(const Objective& f, double L, const Vector& x0, double tol = 1e-12,
                             long max_iters = 200000);

/// A is (2n) x n, so the minimizer over the l1 ball is unique.
LassoProblem gen_lasso(Index n, Index sparsity, std::uint64_t seed);

struct WeightedLeastSquaresProblem {
  Matrix A;
  Vector b;
  Vector weights;  // a > 0
  Vector x_true;   // x >= 0, a^T x = 1
  double L = 0.0;

  Objective objective() const;
};

WeightedLeastSquaresProblem gen_weighted_least_squares(Index n, std::uint64_t seed);

enum class ProblemKind { LeastSquares, RandomQuadratic, StrictSaddle, Lasso, WeightedLS };

std::string_view to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(std::string_view name);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::LeastSquares;
  Index n = 100;
  std::uint64_t seed = 0;
  TruthKind truth = TruthKind::Interior;  // LeastSquares
  bool convex = true;                     // RandomQuadratic
  Index sparsity = 3;                     // Lasso

  void validate() const;
};

/// A generated problem in a uniform shape, as consumed by the benchmark.
struct GeneratedProblem {
  ProblemSpec spec;
  Objective f;
  Matrix A;  // empty unless the problem has a data matrix
  Vector b;
  Vector x_true;  // empty when unknown
  std::optional<double> f_star;
  double L = 0.0;
};

GeneratedProblem make_problem(const ProblemSpec& spec);

/// Binary problem file: 16-byte header ("HPRB", u32 m, u32 n, u32 count),
/// A as m*n row-major f64, then `count` vectors, each a u32 length followed by
/// that many f64. All fields little-endian.
struct HprbFile {
  Matrix A;
  std::vector<Vector> vectors;
};

void write_hprb(const std::string& path, const Matrix& A, const std::vector<Vector>& vectors);
HprbFile read_hprb(const std::string& path);

}  // namespace hadopt
