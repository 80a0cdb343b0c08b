#pragma once

#include "hadopt/geometry.hpp"
#include "hadopt/hadamard.hpp"
#include "hadopt/simplex.hpp"
#include "hadopt/trace.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace hadopt {

/// Smooth function on a sphere S_{N-1}, given by its ambient value and
/// Euclidean gradient. The Hadamard solvers run on this; the simplex and l1
/// entry points build one from a PullbackObjective or DoublePullbackObjective.
struct SphereProblem {
  Index dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

SphereProblem sphere_problem(const PullbackObjective& g);
SphereProblem sphere_problem(const DoublePullbackObjective& g);

/// Curve used to step along a search direction on the sphere.
enum class StepCurve { Geodesic, Retraction };

struct RgdConfig {
  double step_size = 1.0;
  long max_iters = 1000;
  double grad_tol = 1e-9;
  std::optional<double> target_value;

  void validate() const;
};

/// Perturbed RGD settings. Build defaults with make_prgd_config.
struct PrgdConfig : RgdConfig {
  double perturb_threshold = 1e-8;  // epsilon: perturb once |grad| <= epsilon
  double perturb_radius = 1e-8;     // r: radius of the tangent ball xi is drawn from
  double tangent_step = 1e-2;       // eta
  double escape_radius = 1e-4;      // b
  long tangent_iters = 100;         // T
  std::optional<double> hessian_lipschitz;  // rho

  void validate() const;
};

/// Placeholder defaults tuned on the strict-saddle problem:
/// epsilon = 10 grad_tol, r = epsilon, eta = 1/Ltilde, b = sqrt(epsilon / rho).
PrgdConfig make_prgd_config(const RgdConfig& base, double pullback_lipschitz,
                            double rho = 1.0);

struct AwConfig {
  double alpha_def = 1.0;
  double beta = 0.75;
  double rho1 = 1e-4;
  double rho2 = 0.9;
  int max_backtracks = 25;
  long max_iters = 1000;
  double grad_tol = 1e-9;
  std::optional<double> target_value;
  /// Accept only when Armijo AND Wolfe hold. The default accepts on either.
  bool strict_wolfe = false;
  StepCurve curve = StepCurve::Geodesic;

  void validate() const;
};

struct BbConfig {
  double alpha_def = 3.0;
  double delta = 0.5;
  double eta = 0.5;
  double rho1 = 0.1;
  double alpha_min = 1e-10;
  double alpha_max = 30.0;
  int max_shrinks = 50;
  long max_iters = 1000;
  double grad_tol = 1e-9;
  std::optional<double> target_value;
  StepCurve curve = StepCurve::Geodesic;

  void validate() const;
};

/// Where the ground truth of a least-squares benchmark sits. Selects which
/// set of benchmark hyperparameters to use.
enum class TruthKind { Interior, Boundary };

/// Benchmark presets. The AW preset accepts a step only when Armijo and Wolfe
/// both hold: with the large default step the Wolfe test alone passes on the
/// first trial and the iteration never settles.
AwConfig bench_aw_config(TruthKind truth, Index n, double L);
BbConfig bench_bb_config(TruthKind truth, Index n, double L);

/// Clamped BB step |s|^2 / |<s, y>|; an exactly flat <s, y> (below 1e-30)
/// yields the upper clamp.
double bb_step(const Vector& s, const Vector& y, double alpha_min = 1e-10,
               double alpha_max = 30.0);

struct SolveResult {
  SimplexPoint x;
  Vector z;  // terminal point on the sphere
  RunTrace trace;
};

struct SphereSolveResult {
  Vector z;
  RunTrace trace;
};

SphereSolveResult rgd_sphere(const SphereProblem& g, Vector z0, const RgdConfig& cfg);
SphereSolveResult prgd_sphere(const SphereProblem& g, Vector z0, const PrgdConfig& cfg,
                              std::uint64_t rng_seed);
SphereSolveResult rgd_aw_sphere(const SphereProblem& g, Vector z0, const AwConfig& cfg);
SphereSolveResult rgd_bb_sphere(const SphereProblem& g, Vector z0, const BbConfig& cfg);

/// Gradient of s -> g(exp_z(s)) in the tangent space at z.
Vector tangent_pullback_gradient(const SphereProblem& g, const Vector& z, const Vector& s);

struct TangentStepsResult {
  Vector z;
  long steps = 0;
  bool escaped = false;  // left through the |s| >= b branch
};

/// Gradient steps on s -> g(exp_z(s)) from s0; stops early once the next
/// iterate would leave the ball of radius b, taking a final step scaled by the
/// RGD step size. Returns exp_z(Proj_z(s_T)).
TangentStepsResult tangent_space_steps(const SphereProblem& g, const Vector& z,
                                       const Vector& s0, const PrgdConfig& cfg);

/// Sample uniformly from the ball of radius r in T_z S_{n-1}.
template <class Rng>
Vector sample_tangent_ball(const Vector& z, double r, Rng& rng);

SolveResult had_rgd(const Objective& f, const SimplexPoint& x0, const RgdConfig& cfg);
SolveResult had_prgd(const Objective& f, const SimplexPoint& x0, const PrgdConfig& cfg,
                     std::uint64_t rng_seed);
SolveResult had_rgd_aw(const Objective& f, const SimplexPoint& x0, const AwConfig& cfg);
SolveResult had_rgd_bb(const Objective& f, const SimplexPoint& x0, const BbConfig& cfg);

struct L1SolveResult {
  Vector x;        // zu*zu - zv*zv, |x|_1 <= 1
  Vector stacked;  // (zu, zv) on S_{2n-1}
  RunTrace trace;
};

/// HadRGD-BB on the double parametrization of the l1 ball, run on S_{2n-1}
/// (the constraint |x|_1 <= 1 treated as active). The start is a stacked
/// point (zu, zv) on S_{2n-1}. Coordinates where zu or zv is zero stay zero,
/// so the default start puts 1/sqrt(2n) everywhere (x0 = 0).
L1SolveResult had_rgd_bb_l1(const Objective& f, const Vector& stacked0, const BbConfig& cfg);
L1SolveResult had_rgd_bb_l1(const Objective& f, const BbConfig& cfg);

}  // namespace hadopt

#include "hadopt/detail/sampling.ipp"
