#pragma once

#include "hadopt/geometry.hpp"
#include "hadopt/hadamard.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace hadopt {

enum class KktVerdict { NotStationary, FirstOrderKKT, StrictSaddle, SecondOrderKKT, NonDegenerate };
enum class ProblemSide { Original, Parametrized };

std::string_view to_string(KktVerdict verdict);
std::string_view to_string(ProblemSide side);
std::string_view to_string(GeometryKind kind);

inline constexpr double kSupportTol = 1e-8;

/// Residuals and verdicts of a first/second-order KKT check.
///
/// Original side: the point is x and the multiplier is lambda with
/// beta = grad f(x) - lambda * (constraint normal). Parametrized side: the
/// point is z and the multiplier is lambda_N. min_curvature is the smallest
/// eigenvalue of the Lagrangian Hessian on the critical subspace (+inf when
/// that subspace is trivial, NaN when no Hessian is available).
///
/// Thresholds (tol, support_tol) are engineering choices, not derived bounds.
struct KktReport {
  ProblemSide side = ProblemSide::Original;
  GeometryKind geometry = GeometryKind::Sphere;
  Index dim = 0;

  double feasibility_residual = 0.0;
  double stationarity_residual = 0.0;
  double dual_residual = 0.0;  // sign violations of multipliers
  double complementarity_residual = 0.0;
  double multiplier = 0.0;
  Vector beta;  // original side only
  bool constraint_active = true;

  double min_curvature = 0.0;
  Vector curvature_direction;
  Index critical_dim = 0;
  std::string curvature_method;
  bool curvature_converged = true;

  bool feasible = false;
  bool first_order = false;
  bool second_order = false;
  bool strict_saddle = false;
  bool non_degenerate = false;
  KktVerdict verdict = KktVerdict::NotStationary;

  std::vector<Index> support;
  double tol = 0.0;
  double support_tol = kSupportTol;

  nlohmann::json to_json() const;
};

/// x on the probability simplex: grad f = lambda 1 + beta, beta >= 0, x * beta = 0,
/// curvature of Hess f on {sum u = 0, u supported on supp(x)}.
KktReport kkt_check_simplex(const Objective& f, const Vector& x, double tol);

/// z on the unit sphere for g(z) = f(z*z): grad f(x) * z = lambda_N z, curvature of
/// Hess g - 2 lambda_N I on the tangent space.
KktReport kkt_check_sphere(const Objective& f, const Vector& z, double tol);

/// |grad g(z)| <= eps and lambda_min(Hess g(z)) >= -sqrt(rho eps).
bool epsilon_sosp_check(const PullbackObjective& g, const Vector& z, double eps, double rho);

struct CorrespondenceReport {
  KktReport sphere;
  KktReport simplex;
  bool agree = false;          // second-order flags match; simplex strict saddle => sphere strict saddle
  long flips_checked = 0;      // sign patterns of z evaluated (2^n for n <= 12)
  bool flips_agree = true;     // every flip gets the sphere verdict of z itself
  std::string detail;          // residuals of both sides when anything disagrees

  bool ok() const { return agree && flips_agree; }
};

CorrespondenceReport verify_correspondence(const Objective& f, const Vector& z, double tol);

/// KKT systems of the extended problems:
///   Sphere       original: probability simplex    parametrized: unit sphere
///   Ball         original: unit simplex (sum <= 1) parametrized: unit ball
///   WeightedBall original: a^T x = 1, x >= 0       parametrized: |z|_a = 1
///   DoubleSphere original: l1 ball (point is x)    parametrized: stacked (zu, zv), |z| <= 1
/// The l1 case requires f not marked Nonconvex.
KktReport kkt_check_extended(const Objective& f, const Vector& point, const Geometry& geometry,
                             ProblemSide side, double tol);

}  // namespace hadopt
