#include "hadopt/problems.hpp"

#include "hadopt/projection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hadopt {

namespace {

Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix A(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) A(i, j) = normal(rng);
  return A;
}

Vector gaussian_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Vector uniform_simplex(Index n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = expo(rng);
  return v / v.sum();
}

Index rows_for(Index n) {
  return std::max<Index>(1, static_cast<Index>(std::llround(0.1 * static_cast<double>(n))));
}

Objective quadratic_objective(Matrix Q, Vector c, std::optional<double> L, std::optional<double> M,
                              Convexity convexity) {
  auto Qp = std::make_shared<const Matrix>(std::move(Q));
  auto cp = std::make_shared<const Vector>(std::move(c));
  Objective f;
  f.dim = cp->size();
  f.value = [Qp, cp](const Vector& x) { return 0.5 * x.dot(*Qp * x) + cp->dot(x); };
  f.gradient = [Qp, cp](const Vector& x) -> Vector { return *Qp * x + *cp; };
  f.hessian_vec = [Qp](const Vector&, const Vector& d) -> Vector { return *Qp * d; };
  f.lipschitz_grad = L;
  f.grad_inf_bound = M;
  f.convexity = convexity;
  return f;
}

void put_u32(std::ostream& os, std::uint32_t v) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(bytes, 4);
}

void put_f64(std::ostream& os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  os.write(bytes, 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char bytes[4];
  if (!is.read(reinterpret_cast<char*>(bytes), 4)) throw std::runtime_error("HPRB: truncated file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char bytes[8];
  if (!is.read(reinterpret_cast<char*>(bytes), 8)) throw std::runtime_error("HPRB: truncated file");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::uint32_t checked_u32(Index v) {
  if (v < 0 || v > static_cast<Index>(UINT32_MAX)) throw std::invalid_argument("HPRB: size out of range");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

Objective least_squares_objective(Matrix A, Vector b, std::optional<double> L,
                                  std::optional<double> M) {
  if (A.rows() != b.size()) throw std::invalid_argument("least squares: A and b disagree in size");
  auto Ap = std::make_shared<const Matrix>(std::move(A));
  auto bp = std::make_shared<const Vector>(std::move(b));
  Objective f;
  f.dim = Ap->cols();
  f.value = [Ap, bp](const Vector& x) { return (*Ap * x - *bp).squaredNorm(); };
  f.gradient = [Ap, bp](const Vector& x) -> Vector {
    return 2.0 * (Ap->transpose() * (*Ap * x - *bp));
  };
  f.hessian_vec = [Ap](const Vector&, const Vector& d) -> Vector {
    return 2.0 * (Ap->transpose() * (*Ap * d));
  };
  f.lipschitz_grad = L;
  f.grad_inf_bound = M;
  f.convexity = Convexity::Convex;
  return f;
}

double least_squares_lipschitz(const Matrix& A) {
  // Iterate on the smaller of A^T A and A A^T; they share the top eigenvalue.
  // A change of 1e-12 between sweeps keeps the estimate within 1e-6 even when
  // the leading gap is small.
  const Matrix G = A.rows() <= A.cols() ? Matrix(A * A.transpose()) : Matrix(A.transpose() * A);
  const LinearOperator op = [&G](const Vector& v) -> Vector { return G * v; };
  return 2.0 * power_iteration_max_eig(op, G.rows(), 1e-12, 1000000);
}

double least_squares_grad_inf_bound(const Matrix& A, const Vector& b) {
  const Vector c = A.transpose() * b;
  if (A.cols() <= 2000) {
    const Matrix G = A.transpose() * A;
    return 2.0 * (G.colwise() - c).cwiseAbs().maxCoeff();
  }
  const Vector col_norms = A.colwise().norm().transpose();
  const double widest = col_norms.maxCoeff();
  return 2.0 * (widest * col_norms + c.cwiseAbs()).maxCoeff();
}

Objective LeastSquaresProblem::objective() const { return least_squares_objective(A, b, L, M); }

LeastSquaresProblem gen_least_squares(Index n, TruthKind truth, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_least_squares: n must be at least 2");
  std::mt19937_64 rng(seed);
  LeastSquaresProblem p;
  p.truth = truth;
  p.seed = seed;
  p.A = gaussian_matrix(rows_for(n), n, rng);
  p.x_true = truth == TruthKind::Interior
                 ? uniform_simplex(n, rng)
                 : project_simplex(gaussian_vector(n, rng), ProjectionAlgo::SortProject).coords();
  p.b = p.A * p.x_true;
  p.L = least_squares_lipschitz(p.A);
  p.M = least_squares_grad_inf_bound(p.A, p.b);
  return p;
}

Objective gen_strict_saddle(Index n) {
  if (n < 2) throw std::invalid_argument("gen_strict_saddle: n must be at least 2");
  Objective f;
  f.dim = n;
  f.value = [](const Vector& x) { return -x.squaredNorm(); };
  f.gradient = [](const Vector& x) -> Vector { return -2.0 * x; };
  f.hessian_vec = [](const Vector&, const Vector& d) -> Vector { return -2.0 * d; };
  f.lipschitz_grad = 2.0;
  f.grad_inf_bound = 2.0;
  f.convexity = Convexity::Nonconvex;
  return f;
}

Objective QuadraticProblem::objective() const {
  return quadratic_objective(Q, c, L, M, convex ? Convexity::Convex : Convexity::Nonconvex);
}

QuadraticProblem gen_random_quadratic(Index n, bool convex, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_random_quadratic: n must be at least 2");
  std::mt19937_64 rng(seed);
  QuadraticProblem p;
  p.convex = convex;
  const Matrix B = gaussian_matrix(n, n, rng);
  p.Q = convex ? Matrix(B.transpose() * B / static_cast<double>(n)) : Matrix(0.5 * (B + B.transpose()));
  p.c = gaussian_vector(n, rng);
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(p.Q, Eigen::EigenvaluesOnly);
  p.L = eig.eigenvalues().cwiseAbs().maxCoeff();
  p.M = (p.Q.colwise() + p.c).cwiseAbs().maxCoeff();
  return p;
}

Objective LassoProblem::objective() const { return least_squares_objective(A, b, L); }

Vector l1_projected_gradient(const Objective& f, double L, const Vector& x0, double tol,
                             long max_iters) {
  if (!(L > 0.0)) throw std::invalid_argument("l1_projected_gradient: L must be positive");
  Vector x = project_l1_ball(x0);
  for (long k = 0; k < max_iters; ++k) {
    Vector next = project_l1_ball(x - f.gradient(x) / L);
    const double moved = (next - x).norm();
    x = std::move(next);
    if (moved <= tol) break;
  }
  return x;
}

LassoProblem gen_lasso(Index n, Index sparsity, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_lasso: n must be at least 2");
  if (sparsity < 1 || sparsity > n) throw std::invalid_argument("gen_lasso: need 1 <= sparsity <= n");
  std::mt19937_64 rng(seed);
  LassoProblem p;
  p.A = gaussian_matrix(2 * n, n, rng);
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  p.x_true = Vector::Zero(n);
  std::uniform_real_distribution<double> mag(0.5, 1.5);
  std::bernoulli_distribution sign(0.5);
  for (Index k = 0; k < sparsity; ++k)
    p.x_true(idx[static_cast<std::size_t>(k)]) = (sign(rng) ? 1.0 : -1.0) * mag(rng);
  p.x_true /= p.x_true.lpNorm<1>();
  p.b = p.A * p.x_true;
  p.L = least_squares_lipschitz(p.A);
  p.reference = l1_projected_gradient(p.objective(), p.L, Vector::Zero(n));
  return p;
}

Objective WeightedLeastSquaresProblem::objective() const {
  return least_squares_objective(A, b, L);
}

WeightedLeastSquaresProblem gen_weighted_least_squares(Index n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_weighted_least_squares: n must be at least 2");
  std::mt19937_64 rng(seed);
  WeightedLeastSquaresProblem p;
  p.A = gaussian_matrix(rows_for(n), n, rng);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  p.weights.resize(n);
  for (Index i = 0; i < n; ++i) p.weights(i) = w(rng);
  const Vector y = uniform_simplex(n, rng);
  p.x_true = y / p.weights.dot(y);
  p.b = p.A * p.x_true;
  p.L = least_squares_lipschitz(p.A);
  return p;
}

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::LeastSquares: return "least_squares";
    case ProblemKind::RandomQuadratic: return "random_quadratic";
    case ProblemKind::StrictSaddle: return "strict_saddle";
    case ProblemKind::Lasso: return "lasso";
    case ProblemKind::WeightedLS: return "weighted_least_squares";
  }
  return "unknown";
}

ProblemKind problem_kind_from_string(std::string_view name) {
  for (ProblemKind k : {ProblemKind::LeastSquares, ProblemKind::RandomQuadratic,
                        ProblemKind::StrictSaddle, ProblemKind::Lasso, ProblemKind::WeightedLS})
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown problem kind: " + std::string(name));
}

void ProblemSpec::validate() const {
  if (n < 2) throw std::invalid_argument("problem spec: n must be at least 2");
  if (kind == ProblemKind::Lasso && (sparsity < 1 || sparsity > n))
    throw std::invalid_argument("problem spec: need 1 <= sparsity <= n");
}

GeneratedProblem make_problem(const ProblemSpec& spec) {
  spec.validate();
  GeneratedProblem out;
  out.spec = spec;
  switch (spec.kind) {
    case ProblemKind::LeastSquares: {
      LeastSquaresProblem p = gen_least_squares(spec.n, spec.truth, spec.seed);
      out.f = p.objective();
      out.L = p.L;
      out.f_star = 0.0;
      out.A = std::move(p.A);
      out.b = std::move(p.b);
      out.x_true = std::move(p.x_true);
      break;
    }
    case ProblemKind::RandomQuadratic: {
      const QuadraticProblem p = gen_random_quadratic(spec.n, spec.convex, spec.seed);
      out.f = p.objective();
      out.L = p.L;
      break;
    }
    case ProblemKind::StrictSaddle:
      out.f = gen_strict_saddle(spec.n);
      out.L = 2.0;
      out.f_star = -1.0;
      break;
    case ProblemKind::Lasso: {
      LassoProblem p = gen_lasso(spec.n, spec.sparsity, spec.seed);
      out.f = p.objective();
      out.L = p.L;
      out.f_star = 0.0;
      out.A = std::move(p.A);
      out.b = std::move(p.b);
      out.x_true = std::move(p.x_true);
      break;
    }
    case ProblemKind::WeightedLS: {
      WeightedLeastSquaresProblem p = gen_weighted_least_squares(spec.n, spec.seed);
      out.f = p.objective();
      out.L = p.L;
      out.f_star = 0.0;
      out.A = std::move(p.A);
      out.b = std::move(p.b);
      out.x_true = std::move(p.x_true);
      break;
    }
  }
  return out;
}

void write_hprb(const std::string& path, const Matrix& A, const std::vector<Vector>& vectors) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("HPRB: cannot open " + path + " for writing");
  os.write("HPRB", 4);
  put_u32(os, checked_u32(A.rows()));
  put_u32(os, checked_u32(A.cols()));
  put_u32(os, checked_u32(static_cast<Index>(vectors.size())));
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j) put_f64(os, A(i, j));
  for (const Vector& v : vectors) {
    put_u32(os, checked_u32(v.size()));
    for (Index i = 0; i < v.size(); ++i) put_f64(os, v(i));
  }
  if (!os) throw std::runtime_error("HPRB: write failed for " + path);
}

HprbFile read_hprb(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("HPRB: cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "HPRB", 4) != 0)
    throw std::runtime_error("HPRB: bad magic in " + path);
  const std::uint32_t m = get_u32(is);
  const std::uint32_t n = get_u32(is);
  const std::uint32_t count = get_u32(is);
  HprbFile out;
  out.A.resize(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) out.A(i, j) = get_f64(is);
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t len = get_u32(is);
    Vector v(len);
    for (Index i = 0; i < v.size(); ++i) v(i) = get_f64(is);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

}  // namespace hadopt
