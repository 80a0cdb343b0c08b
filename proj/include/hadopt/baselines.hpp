#pragma once

#include "hadopt/hadamard.hpp"
#include "hadopt/projection.hpp"
#include "hadopt/simplex.hpp"
#include "hadopt/trace.hpp"

#include <optional>

namespace hadopt {

struct BaselineResult {
  SimplexPoint x;
  RunTrace trace;
};

/// Projected gradient descent with an Armijo search along the feasible
/// direction x_bar - x. The trace's grad_norm column holds the gradient
/// mapping |x_bar - x| / s.
struct PgdConfig {
  double step = 1.0;  // s
  double beta = 0.75;
  double rho1 = 1e-4;
  int max_backtracks = 25;
  long max_iters = 1000;
  double grad_tol = 1e-9;
  std::optional<double> target_value;
  ProjectionAlgo projection = ProjectionAlgo::DuchiProject;

  void validate() const;
};

/// s = 20/L, beta = 0.75, rho1 = 1e-4.
PgdConfig bench_pgd_config(double L);

BaselineResult pgd_linesearch(const Objective& f, const SimplexPoint& x0, const PgdConfig& cfg);

struct EmdaConfig {
  double step = 1.0;
  long max_iters = 1000;
  std::optional<double> target_value;

  void validate() const;
};

/// Entropic mirror descent with a constant step. x0 must be strictly positive.
/// The trace's grad_norm column holds |x_{k+1} - x_k|_1 / step.
BaselineResult emda(const Objective& f, const SimplexPoint& x0, const EmdaConfig& cfg);
BaselineResult emda(const Objective& f, const SimplexPoint& x0, double step, long K);

struct FwConfig {
  long max_iters = 1000;
  /// Exact segment line search (needs a Hessian-vector product, exact for
  /// quadratics). Off: step 2/(k+2).
  bool linesearch = true;
  /// Pairwise steps moving mass from the worst support vertex to the LMO vertex.
  bool pairwise = false;
  double gap_tol = 0.0;
  std::optional<double> target_value;

  void validate() const;
};

/// Frank-Wolfe over the simplex. The trace's grad_norm column holds the
/// duality gap <grad f(x_k), x_k - s_k>.
BaselineResult frank_wolfe(const Objective& f, const SimplexPoint& x0, const FwConfig& cfg);

/// Duality gap <grad, x - e_i> with i the smallest gradient entry.
double frank_wolfe_gap(const Vector& grad, const Vector& x);

}  // namespace hadopt
