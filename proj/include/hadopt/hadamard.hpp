#pragma once

#include "hadopt/linalg.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace hadopt {

enum class Convexity { Unknown, Convex, Nonconvex };

/// A smooth objective f : R^n -> R. Closures must be reentrant; solvers call
/// them from whichever thread runs the solve.
struct Objective {
  Index dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  /// (x, d) -> Hessian of f at x applied to d. Optional.
  std::function<Vector(const Vector&, const Vector&)> hessian_vec;
  /// Lipschitz constant L of the gradient, when known.
  std::optional<double> lipschitz_grad;
  /// M = max over the simplex of |grad f(x)|_inf, when known.
  std::optional<double> grad_inf_bound;
  Convexity convexity = Convexity::Unknown;

  bool has_hessian() const { return static_cast<bool>(hessian_vec); }
};

class MissingHessianError : public std::logic_error {
 public:
  MissingHessianError() : std::logic_error("objective has no Hessian-vector product") {}
};

// Entrywise square x = z*z.
Vector hadamard_square(const Vector& z);

// Nonnegative entrywise root. Entries in [-1e-12, 0) are clamped to zero;
// anything more negative throws std::domain_error.
Vector hadamard_sqrt(const Vector& x);

// x = zu*zu - zv*zv.
Vector double_hadamard(const Vector& zu, const Vector& zv);

/// grad g(z) = 2 grad f(z*z) * z.
Vector pullback_gradient(const Objective& f, const Vector& z);

/// Hess g(z) d = 2 grad f(x) * d + 4 z * (Hess f(x) (z * d)), x = z*z.
Vector pullback_hessian_vec(const Objective& f, const Vector& z, const Vector& d);

/// Gradient-Lipschitz constant of the pullback on the sphere: 4L + 2M.
double transfer_lipschitz(double L, double M);

/// g(z) = f(z*z), the objective seen from the sphere side.
class PullbackObjective {
 public:
  explicit PullbackObjective(Objective base);

  const Objective& base() const { return base_; }
  Index dim() const { return base_.dim; }

  double value(const Vector& z) const { return base_.value(z.cwiseProduct(z)); }
  Vector gradient(const Vector& z) const { return pullback_gradient(base_, z); }
  Vector hessian_vec(const Vector& z, const Vector& d) const {
    return pullback_hessian_vec(base_, z, d);
  }
  bool has_hessian() const { return base_.has_hessian(); }
  /// 4L + 2M when both constants are known for the base objective.
  std::optional<double> lipschitz_grad() const { return lipschitz_; }

  /// The pullback packaged as a plain Objective over z.
  Objective as_objective() const;

 private:
  Objective base_;
  std::optional<double> lipschitz_;
};

/// g(zu, zv) = f(zu*zu - zv*zv) acting on the stacked 2n-vector (zu, zv).
class DoublePullbackObjective {
 public:
  explicit DoublePullbackObjective(Objective base);

  const Objective& base() const { return base_; }
  Index dim() const { return 2 * base_.dim; }

  /// Recover x = zu*zu - zv*zv from a stacked 2n-vector.
  Vector to_original(const Vector& stacked) const;

  double value(const Vector& stacked) const;
  Vector gradient(const Vector& stacked) const;
  Vector hessian_vec(const Vector& stacked, const Vector& d) const;
  bool has_hessian() const { return base_.has_hessian(); }

  Objective as_objective() const;

 private:
  Objective base_;
};

/// Map a point of the l1 ball to its decoupled double parametrization:
/// zu = sqrt(max(x, 0)), zv = sqrt(max(-x, 0)), stacked as (zu, zv).
Vector l1_to_double(const Vector& x);

}  // namespace hadopt
