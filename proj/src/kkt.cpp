#include "hadopt/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hadopt {

namespace {

constexpr Index kDenseLimit = 200;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Curvature {
  double value = kInf;
  Vector direction;
  Index dim = 0;
  std::string method = "trivial";
  bool converged = true;
};

// Smallest eigenvalue of H on {d supported on `coords`, <d, normal> = 0}.
// An empty `normal` (or one vanishing on coords) drops the orthogonality.
Curvature restricted_min_eig(const LinearOperator& H, Index N, const std::vector<Index>& coords,
                             const Vector& normal) {
  Curvature out;
  const Index s = static_cast<Index>(coords.size());
  Vector normal_s;
  if (normal.size() > 0) {
    normal_s.resize(s);
    for (Index i = 0; i < s; ++i) normal_s(i) = normal(coords[static_cast<std::size_t>(i)]);
    if (normal_s.norm() == 0.0) normal_s.resize(0);
  }
  const bool constrained = normal_s.size() > 0;
  out.dim = constrained ? s - 1 : s;
  if (out.dim <= 0) return out;

  if (out.dim <= kDenseLimit) {
    const Matrix Q = constrained ? complement_basis(normal_s) : Matrix::Identity(s, s);
    Matrix B = Matrix::Zero(N, out.dim);
    for (Index i = 0; i < s; ++i) B.row(coords[static_cast<std::size_t>(i)]) = Q.row(i);
    Matrix HB(N, out.dim);
    for (Index j = 0; j < out.dim; ++j) HB.col(j) = H(B.col(j));
    Matrix C = B.transpose() * HB;
    C = 0.5 * (C + C.transpose()).eval();
    const EigenEstimate e = dense_min_eig(C);
    out.value = e.value;
    out.direction = B * e.vector;
    out.method = "dense";
    return out;
  }

  Vector mask = Vector::Zero(N);
  for (Index i : coords) mask(i) = 1.0;
  Vector unit_normal;
  if (constrained) {
    unit_normal = Vector::Zero(N);
    for (Index i = 0; i < s; ++i) unit_normal(coords[static_cast<std::size_t>(i)]) = normal_s(i);
    unit_normal /= unit_normal.norm();
  }
  const auto project = [&](const Vector& w) -> Vector {
    Vector p = w.cwiseProduct(mask);
    if (constrained) p -= p.dot(unit_normal) * unit_normal;
    return p;
  };
  const EigenEstimate e = lanczos_min_eig(H, project, N, out.dim);
  out.value = e.value;
  out.direction = e.vector;
  out.method = "lanczos";
  out.converged = e.converged;
  return out;
}

void classify(KktReport& r, bool strict_complementarity) {
  r.first_order = r.feasible && r.stationarity_residual <= r.tol && r.dual_residual <= r.tol &&
                  r.complementarity_residual <= r.tol;
  if (!r.first_order) {
    r.verdict = KktVerdict::NotStationary;
    return;
  }
  if (std::isnan(r.min_curvature)) {
    r.verdict = KktVerdict::FirstOrderKKT;
    return;
  }
  r.second_order = r.min_curvature >= -r.tol;
  r.strict_saddle = !r.second_order;
  r.non_degenerate = r.second_order && r.min_curvature > r.tol && strict_complementarity;
  if (r.strict_saddle)
    r.verdict = KktVerdict::StrictSaddle;
  else if (r.non_degenerate)
    r.verdict = KktVerdict::NonDegenerate;
  else
    r.verdict = KktVerdict::SecondOrderKKT;
}

void set_curvature(KktReport& r, const Curvature& c) {
  r.min_curvature = c.value;
  r.curvature_direction = c.direction;
  r.critical_dim = c.dim;
  r.curvature_method = c.method;
  r.curvature_converged = c.converged;
}

void no_curvature(KktReport& r) {
  r.min_curvature = std::numeric_limits<double>::quiet_NaN();
  r.curvature_method = "unavailable";
  r.curvature_converged = false;
}

enum class OriginalKind { Equality, Inequality, L1 };

// Original-side check for constraints of the form <a, x> = 1 (Equality),
// <1, x> <= 1 (Inequality) or |x|_1 <= 1 (L1, a = sign x), with x >= 0 in the
// first two cases.
KktReport check_original(const Objective& f, const Vector& x, const Vector& a, OriginalKind kind,
                         GeometryKind geometry, double tol) {
  if (x.size() != f.dim) throw std::invalid_argument("KKT check: point has the wrong dimension");
  KktReport r;
  r.side = ProblemSide::Original;
  r.geometry = geometry;
  r.dim = x.size();
  r.tol = tol;
  const Index n = x.size();

  const Vector normal = kind == OriginalKind::L1 ? Vector(x.cwiseSign()) : a;
  const double level = kind == OriginalKind::L1 ? x.lpNorm<1>() : a.dot(x);
  double infeas = kind == OriginalKind::Equality ? std::abs(level - 1.0) : std::max(level - 1.0, 0.0);
  if (kind != OriginalKind::L1) infeas = std::max(infeas, std::max(-x.minCoeff(), 0.0));
  r.feasibility_residual = infeas;
  r.feasible = infeas <= tol;
  r.constraint_active = kind == OriginalKind::Equality || std::abs(level - 1.0) <= tol;

  const Vector gf = f.gradient(x);
  double num = 0.0;
  double den = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(x(i)) > r.support_tol) {
      r.support.push_back(i);
      num += gf(i) * normal(i);
      den += normal(i) * normal(i);
    }
  }
  double lambda = den > 0.0 ? num / den : 0.0;
  if (kind != OriginalKind::Equality) lambda = r.constraint_active ? std::min(lambda, 0.0) : 0.0;
  r.multiplier = lambda;
  r.beta = gf - lambda * normal;

  std::vector<bool> on(static_cast<std::size_t>(n), false);
  for (Index i : r.support) on[static_cast<std::size_t>(i)] = true;
  bool strict = true;
  for (Index i = 0; i < n; ++i) {
    const double b = r.beta(i);
    if (on[static_cast<std::size_t>(i)]) {
      r.stationarity_residual = std::max(r.stationarity_residual, std::abs(b));
    } else if (kind == OriginalKind::L1) {
      const double slack = std::abs(gf(i)) - std::abs(lambda);
      r.dual_residual = std::max(r.dual_residual, slack);
      if (!(slack < -tol)) strict = false;
    } else {
      r.dual_residual = std::max(r.dual_residual, -b);
      if (!(b > tol)) strict = false;
      r.complementarity_residual = std::max(r.complementarity_residual, std::abs(x(i) * b));
    }
  }
  if (kind != OriginalKind::Equality) {
    r.complementarity_residual =
        std::max(r.complementarity_residual, std::abs((level - 1.0) * lambda));
    if (r.constraint_active && !(lambda < -tol)) strict = false;
  }

  if (f.has_hessian()) {
    const Vector empty;
    const LinearOperator H = [&](const Vector& u) { return f.hessian_vec(x, u); };
    set_curvature(r, restricted_min_eig(H, n, r.support, r.constraint_active ? normal : empty));
  } else {
    no_curvature(r);
  }
  classify(r, strict);
  return r;
}

// Parametrized-side check for g on R^N with constraint sum_i a_i z_i^2 = 1
// (equality) or <= 1 (inequality, multiplier lambda_N <= 0).
struct ParamProblem {
  std::function<Vector(const Vector&)> gradient;
  std::function<Vector(const Vector&, const Vector&)> hessian_vec;
  bool has_hessian = false;
};

KktReport check_parametrized(const ParamProblem& g, const Vector& z, const Vector& a,
                             bool inequality, GeometryKind geometry, double tol) {
  KktReport r;
  r.side = ProblemSide::Parametrized;
  r.geometry = geometry;
  r.dim = z.size();
  r.tol = tol;
  const Index N = z.size();

  const Vector az = a.cwiseProduct(z);
  const double level = az.dot(z);
  r.feasibility_residual = inequality ? std::max(level - 1.0, 0.0) : std::abs(level - 1.0);
  r.feasible = r.feasibility_residual <= tol;
  r.constraint_active = !inequality || std::abs(level - 1.0) <= tol;
  for (Index i = 0; i < N; ++i)
    if (z(i) * z(i) > r.support_tol) r.support.push_back(i);

  const Vector eg = g.gradient(z);
  double lambda = r.constraint_active && level > 0.0 ? eg.dot(z) / (2.0 * level) : 0.0;
  if (inequality) {
    r.dual_residual = std::max(lambda, 0.0);
    lambda = std::min(lambda, 0.0);
  }
  r.multiplier = lambda;
  r.stationarity_residual = (0.5 * eg - lambda * az).norm();
  if (inequality) r.complementarity_residual = std::abs((level - 1.0) * lambda);

  if (g.has_hessian) {
    const LinearOperator H = [&](const Vector& d) -> Vector {
      return g.hessian_vec(z, d) - (2.0 * lambda) * a.cwiseProduct(d);
    };
    std::vector<Index> all(static_cast<std::size_t>(N));
    for (Index i = 0; i < N; ++i) all[static_cast<std::size_t>(i)] = i;
    set_curvature(r, restricted_min_eig(H, N, all, r.constraint_active ? az : Vector()));
  } else {
    no_curvature(r);
  }
  classify(r, !inequality || !r.constraint_active || lambda < -tol);
  return r;
}

ParamProblem pullback_problem(const Objective& f) {
  const PullbackObjective g(f);
  ParamProblem p;
  p.gradient = [g](const Vector& z) { return g.gradient(z); };
  p.hessian_vec = [g](const Vector& z, const Vector& d) { return g.hessian_vec(z, d); };
  p.has_hessian = g.has_hessian();
  return p;
}

ParamProblem double_pullback_problem(const Objective& f) {
  const DoublePullbackObjective g(f);
  ParamProblem p;
  p.gradient = [g](const Vector& z) { return g.gradient(z); };
  p.hessian_vec = [g](const Vector& z, const Vector& d) { return g.hessian_vec(z, d); };
  p.has_hessian = g.has_hessian();
  return p;
}

std::string describe(const KktReport& r) {
  std::ostringstream os;
  os << to_string(r.side) << ": verdict=" << to_string(r.verdict)
     << " stationarity=" << r.stationarity_residual << " dual=" << r.dual_residual
     << " complementarity=" << r.complementarity_residual << " multiplier=" << r.multiplier
     << " curvature=" << r.min_curvature;
  return os.str();
}

}  // namespace

std::string_view to_string(KktVerdict verdict) {
  switch (verdict) {
    case KktVerdict::NotStationary: return "NotStationary";
    case KktVerdict::FirstOrderKKT: return "FirstOrderKKT";
    case KktVerdict::StrictSaddle: return "StrictSaddle";
    case KktVerdict::SecondOrderKKT: return "SecondOrderKKT";
    case KktVerdict::NonDegenerate: return "NonDegenerate";
  }
  return "unknown";
}

std::string_view to_string(ProblemSide side) {
  return side == ProblemSide::Original ? "original" : "parametrized";
}

std::string_view to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::Sphere: return "sphere";
    case GeometryKind::Ball: return "ball";
    case GeometryKind::WeightedBall: return "weighted_ball";
    case GeometryKind::DoubleSphere: return "double_sphere";
  }
  return "unknown";
}

nlohmann::json KktReport::to_json() const {
  using nlohmann::json;
  const auto num = [](double v) -> json {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  const auto vec = [](const Vector& v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
  };
  json j;
  j["side"] = to_string(side);
  j["geometry"] = to_string(geometry);
  j["dim"] = dim;
  j["feasible"] = feasible;
  j["residuals"] = {{"feasibility", feasibility_residual},
                    {"stationarity", stationarity_residual},
                    {"dual", dual_residual},
                    {"complementarity", complementarity_residual}};
  j["multiplier"] = multiplier;
  j["beta"] = vec(beta);
  j["constraint_active"] = constraint_active;
  j["curvature"] = {{"min", num(min_curvature)},
                    {"critical_dim", critical_dim},
                    {"method", curvature_method},
                    {"converged", curvature_converged},
                    {"direction", vec(curvature_direction)}};
  j["flags"] = {{"first_order", first_order},
                {"second_order", second_order},
                {"strict_saddle", strict_saddle},
                {"non_degenerate", non_degenerate}};
  j["verdict"] = to_string(verdict);
  j["support"] = support;
  j["thresholds"] = {{"tol", tol}, {"support_tol", support_tol}, {"kind", "engineering"}};
  return j;
}

KktReport kkt_check_simplex(const Objective& f, const Vector& x, double tol) {
  return check_original(f, x, Vector::Ones(x.size()), OriginalKind::Equality,
                        GeometryKind::Sphere, tol);
}

KktReport kkt_check_sphere(const Objective& f, const Vector& z, double tol) {
  if (z.size() != f.dim) throw std::invalid_argument("KKT check: point has the wrong dimension");
  return check_parametrized(pullback_problem(f), z, Vector::Ones(z.size()), false,
                            GeometryKind::Sphere, tol);
}

bool epsilon_sosp_check(const PullbackObjective& g, const Vector& z, double eps, double rho) {
  if (!(eps > 0.0) || !(rho > 0.0)) throw std::invalid_argument("epsilon_sosp_check: eps and rho must be positive");
  if (riemannian_gradient(g, z).norm() > eps) return false;
  const double bound = std::sqrt(rho * eps);
  MinEigOptions opts;
  opts.tol = bound / 10.0;
  return min_hessian_eig(g, z, opts).value >= -bound;
}

CorrespondenceReport verify_correspondence(const Objective& f, const Vector& z, double tol) {
  CorrespondenceReport out;
  out.sphere = kkt_check_sphere(f, z, tol);
  out.simplex = kkt_check_simplex(f, z.cwiseProduct(z), tol);
  out.agree = out.sphere.second_order == out.simplex.second_order &&
              (!out.simplex.strict_saddle || out.sphere.strict_saddle);
  const Index n = z.size();
  if (n <= 12) {
    const unsigned long patterns = 1ul << n;
    for (unsigned long mask = 1; mask < patterns; ++mask) {
      Vector flipped = z;
      for (Index i = 0; i < n; ++i)
        if (mask & (1ul << i)) flipped(i) = -flipped(i);
      const KktReport r = kkt_check_sphere(f, flipped, tol);
      ++out.flips_checked;
      if (r.verdict != out.sphere.verdict) {
        out.flips_agree = false;
        out.detail += "sign pattern " + std::to_string(mask) + " -> " + describe(r) + "\n";
        break;
      }
    }
    ++out.flips_checked;  // the identity pattern
  }
  if (!out.ok()) out.detail = describe(out.sphere) + "\n" + describe(out.simplex) + "\n" + out.detail;
  return out;
}

KktReport kkt_check_extended(const Objective& f, const Vector& point, const Geometry& geometry,
                             ProblemSide side, double tol) {
  const bool original = side == ProblemSide::Original;
  switch (geometry.kind) {
    case GeometryKind::Sphere:
      return original ? kkt_check_simplex(f, point, tol) : kkt_check_sphere(f, point, tol);
    case GeometryKind::Ball:
      if (original)
        return check_original(f, point, Vector::Ones(point.size()), OriginalKind::Inequality,
                              GeometryKind::Ball, tol);
      if (point.size() != f.dim) throw std::invalid_argument("KKT check: point has the wrong dimension");
      return check_parametrized(pullback_problem(f), point, Vector::Ones(point.size()), true,
                                GeometryKind::Ball, tol);
    case GeometryKind::WeightedBall:
      if (geometry.weights.size() != point.size())
        throw std::invalid_argument("KKT check: weights do not match the point");
      if (original)
        return check_original(f, point, geometry.weights, OriginalKind::Equality,
                              GeometryKind::WeightedBall, tol);
      if (point.size() != f.dim) throw std::invalid_argument("KKT check: point has the wrong dimension");
      return check_parametrized(pullback_problem(f), point, geometry.weights, false,
                                GeometryKind::WeightedBall, tol);
    case GeometryKind::DoubleSphere:
      if (f.convexity == Convexity::Nonconvex)
        throw std::invalid_argument("KKT check: the l1 ball system requires a convex objective");
      if (original)
        return check_original(f, point, Vector(), OriginalKind::L1, GeometryKind::DoubleSphere, tol);
      if (point.size() != 2 * f.dim)
        throw std::invalid_argument("KKT check: expected a stacked (zu, zv) point");
      return check_parametrized(double_pullback_problem(f), point, Vector::Ones(point.size()), true,
                                GeometryKind::DoubleSphere, tol);
  }
  throw std::invalid_argument("KKT check: unknown geometry");
}

}  // namespace hadopt
