#include "hadopt/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace hadopt {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

Vector riemannian(const Vector& egrad, const Vector& z) { return egrad - egrad.dot(z) * z; }

Vector step_along(StepCurve curve, const Vector& z, const Vector& v, double alpha) {
  if (curve == StepCurve::Retraction) {
    Vector out = z + alpha * v;
    return out / out.norm();
  }
  const double t = alpha * v.norm();
  if (t < kZeroVelocity) return z;
  Vector out = std::cos(t) * z + (std::sin(t) / v.norm()) * v;
  return out / out.norm();
}

// d/dalpha of the curve alpha -> step_along(curve, z, v, alpha).
Vector curve_velocity(StepCurve curve, const Vector& z, const Vector& v, double alpha) {
  if (curve == StepCurve::Retraction) {
    const Vector p = z + alpha * v;
    const double r = p.norm();
    const Vector c = p / r;
    return (v - c.dot(v) * c) / r;
  }
  return geodesic_velocity(z, v, alpha);
}

bool reached(double f, double grad_norm, double grad_tol, const std::optional<double>& target) {
  return grad_norm <= grad_tol || (target && f <= *target);
}

class Recorder {
 public:
  explicit Recorder(RunTrace& trace) : trace_(trace) {}

  void add(long iteration, double f, double grad_norm, double step, int backtracks = 0,
           bool failed = false) {
    TraceRecord r;
    r.iteration = iteration;
    r.value = f;
    r.grad_norm = grad_norm;
    r.step = step;
    r.seconds = clock_.seconds();
    r.backtracks = backtracks;
    r.line_search_failed = failed;
    trace_.records.push_back(r);
  }

 private:
  RunTrace& trace_;
  Stopwatch clock_;
};

void check_start(const SphereProblem& g, const Vector& z0) {
  require(g.dim == z0.size(), "initial point has the wrong dimension");
  require(std::abs(z0.norm() - 1.0) <= kFeasibilityTol, "initial point is not on the unit sphere");
}

SolveResult to_simplex(SphereSolveResult run) {
  Vector x = hadamard_square(run.z);
  return SolveResult{SimplexPoint(std::move(x)), std::move(run.z), std::move(run.trace)};
}

}  // namespace

SphereProblem sphere_problem(const PullbackObjective& g) {
  return SphereProblem{g.dim(), [g](const Vector& z) { return g.value(z); },
                       [g](const Vector& z) { return g.gradient(z); }};
}

SphereProblem sphere_problem(const DoublePullbackObjective& g) {
  return SphereProblem{g.dim(), [g](const Vector& z) { return g.value(z); },
                       [g](const Vector& z) { return g.gradient(z); }};
}

void RgdConfig::validate() const {
  require(step_size > 0.0, "RgdConfig: step size must be positive");
  require(max_iters >= 1, "RgdConfig: max_iters must be at least 1");
  require(grad_tol >= 0.0, "RgdConfig: grad_tol must be nonnegative");
}

void PrgdConfig::validate() const {
  RgdConfig::validate();
  require(perturb_threshold >= 0.0, "PrgdConfig: perturbation threshold must be nonnegative");
  require(perturb_radius >= 0.0, "PrgdConfig: perturbation radius must be nonnegative");
  require(tangent_step > 0.0, "PrgdConfig: tangent step must be positive");
  require(escape_radius > 0.0, "PrgdConfig: escape radius must be positive");
  require(tangent_iters >= 1, "PrgdConfig: tangent_iters must be at least 1");
  require(!hessian_lipschitz || *hessian_lipschitz > 0.0,
          "PrgdConfig: Hessian Lipschitz constant must be positive");
}

PrgdConfig make_prgd_config(const RgdConfig& base, double pullback_lipschitz, double rho) {
  require(pullback_lipschitz > 0.0, "make_prgd_config: Lipschitz constant must be positive");
  require(rho > 0.0, "make_prgd_config: rho must be positive");
  PrgdConfig cfg;
  static_cast<RgdConfig&>(cfg) = base;
  cfg.perturb_threshold = 10.0 * base.grad_tol;
  cfg.perturb_radius = cfg.perturb_threshold;
  cfg.tangent_step = 1.0 / pullback_lipschitz;
  cfg.escape_radius = std::sqrt(cfg.perturb_threshold / rho);
  cfg.hessian_lipschitz = rho;
  if (!(cfg.escape_radius > 0.0)) cfg.escape_radius = 1e-8;
  return cfg;
}

void AwConfig::validate() const {
  require(alpha_def > 0.0, "AwConfig: default step must be positive");
  require(beta > 0.0 && beta < 1.0, "AwConfig: beta must lie in (0, 1)");
  require(rho1 > 0.0 && rho1 < rho2 && rho2 < 1.0, "AwConfig: need 0 < rho1 < rho2 < 1");
  require(max_backtracks >= 0, "AwConfig: max_backtracks must be nonnegative");
  require(max_iters >= 1, "AwConfig: max_iters must be at least 1");
  require(grad_tol >= 0.0, "AwConfig: grad_tol must be nonnegative");
}

void BbConfig::validate() const {
  require(alpha_def > 0.0, "BbConfig: default step must be positive");
  require(delta > 0.0 && delta < 1.0, "BbConfig: delta must lie in (0, 1)");
  require(eta > 0.0 && eta < 1.0, "BbConfig: eta must lie in (0, 1)");
  require(rho1 > 0.0, "BbConfig: rho1 must be positive");
  require(alpha_min > 0.0 && alpha_min < alpha_max, "BbConfig: need 0 < alpha_min < alpha_max");
  require(max_shrinks >= 0, "BbConfig: max_shrinks must be nonnegative");
  require(max_iters >= 1, "BbConfig: max_iters must be at least 1");
  require(grad_tol >= 0.0, "BbConfig: grad_tol must be nonnegative");
}

AwConfig bench_aw_config(TruthKind truth, Index n, double L) {
  require(L > 0.0, "bench_aw_config: L must be positive");
  AwConfig cfg;
  const double scale = truth == TruthKind::Interior ? 20.0 : 2.0;
  cfg.alpha_def = 10.0 * std::sqrt(scale * static_cast<double>(n) / L);
  cfg.beta = 0.75;
  cfg.rho1 = 1e-4;
  cfg.rho2 = 0.9;
  cfg.strict_wolfe = true;
  return cfg;
}

BbConfig bench_bb_config(TruthKind truth, Index n, double L) {
  require(L > 0.0, "bench_bb_config: L must be positive");
  BbConfig cfg;
  if (truth == TruthKind::Interior) {
    cfg.alpha_def = 3.0;
    cfg.delta = 0.5;
  } else {
    cfg.alpha_def = 10.0 * std::sqrt(2.0 * static_cast<double>(n) / L);
    cfg.delta = 0.75;
  }
  cfg.eta = 0.5;
  cfg.rho1 = 0.1;
  return cfg;
}

double bb_step(const Vector& s, const Vector& y, double alpha_min, double alpha_max) {
  const double sy = std::abs(s.dot(y));
  if (sy < 1e-30) return alpha_max;
  const double raw = s.squaredNorm() / sy;
  return std::max(std::min(raw, alpha_max), alpha_min);
}

SphereSolveResult rgd_sphere(const SphereProblem& g, Vector z0, const RgdConfig& cfg) {
  cfg.validate();
  check_start(g, z0);
  const Geometry geo = Geometry::sphere(g.dim);
  SphereSolveResult out{std::move(z0), {}};
  Recorder rec(out.trace);
  Vector& z = out.z;
  double f = g.value(z);
  Vector rg = riemannian(g.gradient(z), z);
  rec.add(0, f, rg.norm(), 0.0);
  for (long k = 0;;) {
    if (reached(f, rg.norm(), cfg.grad_tol, cfg.target_value)) {
      out.trace.status = RunStatus::Converged;
      break;
    }
    if (k >= cfg.max_iters) {
      out.trace.status = RunStatus::MaxIters;
      break;
    }
    z = exp_map(geo, z, -cfg.step_size * rg);
    ++k;
    f = g.value(z);
    rg = riemannian(g.gradient(z), z);
    rec.add(k, f, rg.norm(), cfg.step_size);
  }
  return out;
}

Vector tangent_pullback_gradient(const SphereProblem& g, const Vector& z, const Vector& s) {
  const Geometry geo = Geometry::sphere(g.dim);
  const double t = s.norm();
  const Vector w = g.gradient(exp_map(geo, z, s));
  const Vector pw = w - w.dot(z) * z;
  if (t < kZeroVelocity) return pw;
  const Vector sh = s / t;
  const double a = w.dot(sh);
  const double c = w.dot(z);
  const double sinc = std::sin(t) / t;
  return (-std::sin(t) * c + std::cos(t) * a - sinc * a) * sh + sinc * pw;
}

TangentStepsResult tangent_space_steps(const SphereProblem& g, const Vector& z,
                                       const Vector& s0, const PrgdConfig& cfg) {
  const Geometry geo = Geometry::sphere(g.dim);
  Vector s = s0 - s0.dot(z) * z;
  TangentStepsResult out;
  for (long j = 0; j < cfg.tangent_iters; ++j) {
    const Vector grad = tangent_pullback_gradient(g, z, s);
    Vector next = s - cfg.tangent_step * grad;
    ++out.steps;
    if (next.norm() >= cfg.escape_radius) {
      s = s - cfg.step_size * cfg.tangent_step * grad;
      out.escaped = true;
      break;
    }
    s = std::move(next);
  }
  s -= s.dot(z) * z;
  out.z = exp_map(geo, z, s);
  return out;
}

SphereSolveResult prgd_sphere(const SphereProblem& g, Vector z0, const PrgdConfig& cfg,
                              std::uint64_t rng_seed) {
  cfg.validate();
  check_start(g, z0);
  const Geometry geo = Geometry::sphere(g.dim);
  std::mt19937_64 rng(rng_seed);
  SphereSolveResult out{std::move(z0), {}};
  Recorder rec(out.trace);
  Vector& z = out.z;
  double f = g.value(z);
  Vector rg = riemannian(g.gradient(z), z);
  rec.add(0, f, rg.norm(), 0.0);
  for (long k = 0;;) {
    const double gn = rg.norm();
    if (reached(f, gn, cfg.grad_tol, cfg.target_value)) {
      out.trace.status = RunStatus::Converged;
      break;
    }
    if (k >= cfg.max_iters) {
      out.trace.status = RunStatus::MaxIters;
      break;
    }
    if (gn > cfg.perturb_threshold) {
      z = exp_map(geo, z, -cfg.step_size * rg);
      ++k;
      f = g.value(z);
      rg = riemannian(g.gradient(z), z);
      rec.add(k, f, rg.norm(), cfg.step_size);
      continue;
    }
    const Vector xi = sample_tangent_ball(z, cfg.perturb_radius, rng);
    PrgdConfig episode = cfg;
    episode.tangent_iters = std::min(cfg.tangent_iters, cfg.max_iters - k);
    const TangentStepsResult ts = tangent_space_steps(g, z, cfg.tangent_step * xi, episode);
    const double moved = (ts.z - z).norm();
    z = ts.z;
    k += ts.steps;
    f = g.value(z);
    rg = riemannian(g.gradient(z), z);
    rec.add(k, f, rg.norm(), moved, static_cast<int>(ts.steps));
  }
  return out;
}

SphereSolveResult rgd_aw_sphere(const SphereProblem& g, Vector z0, const AwConfig& cfg) {
  cfg.validate();
  check_start(g, z0);
  SphereSolveResult out{std::move(z0), {}};
  Recorder rec(out.trace);
  Vector& z = out.z;
  double f = g.value(z);
  Vector rg = riemannian(g.gradient(z), z);
  rec.add(0, f, rg.norm(), 0.0);
  for (long k = 0;;) {
    const double gn = rg.norm();
    if (reached(f, gn, cfg.grad_tol, cfg.target_value)) {
      out.trace.status = RunStatus::Converged;
      break;
    }
    if (k >= cfg.max_iters) {
      out.trace.status = RunStatus::MaxIters;
      break;
    }
    const Vector v = -rg;
    const double gn2 = gn * gn;
    bool accepted = false;
    int m = 0;
    double alpha = cfg.alpha_def;
    Vector trial;
    double f_trial = f;
    for (; m <= cfg.max_backtracks; ++m) {
      alpha = cfg.alpha_def * std::pow(cfg.beta, m);
      trial = step_along(cfg.curve, z, v, alpha);
      f_trial = g.value(trial);
      const bool armijo = f_trial <= f - cfg.rho1 * alpha * gn2;
      bool wolfe = false;
      if (cfg.strict_wolfe ? armijo : !armijo) {
        const double slope = g.gradient(trial).dot(curve_velocity(cfg.curve, z, v, alpha));
        wolfe = slope >= -cfg.rho2 * gn2;
      }
      accepted = cfg.strict_wolfe ? (armijo && wolfe) : (armijo || wolfe);
      if (accepted) break;
    }
    const int backtracks = std::min(m, cfg.max_backtracks);
    z = std::move(trial);
    ++k;
    f = f_trial;
    rg = riemannian(g.gradient(z), z);
    rec.add(k, f, rg.norm(), alpha, backtracks, !accepted);
    if (!accepted) {
      out.trace.status = RunStatus::LineSearchFailed;
      break;
    }
  }
  return out;
}

SphereSolveResult rgd_bb_sphere(const SphereProblem& g, Vector z0, const BbConfig& cfg) {
  cfg.validate();
  check_start(g, z0);
  SphereSolveResult out{std::move(z0), {}};
  Recorder rec(out.trace);
  Vector& z = out.z;
  double f = g.value(z);
  Vector rg = riemannian(g.gradient(z), z);
  rec.add(0, f, rg.norm(), 0.0);
  double C = f;
  double Q = 1.0;
  double alpha = cfg.alpha_def;
  for (long k = 0;;) {
    const double gn = rg.norm();
    if (reached(f, gn, cfg.grad_tol, cfg.target_value)) {
      out.trace.status = RunStatus::Converged;
      break;
    }
    if (k >= cfg.max_iters) {
      out.trace.status = RunStatus::MaxIters;
      break;
    }
    const Vector v = -rg;
    const double gn2 = gn * gn;
    Vector trial = step_along(cfg.curve, z, v, alpha);
    double f_trial = g.value(trial);
    int shrinks = 0;
    bool failed = false;
    while (!(f_trial < C - cfg.rho1 * alpha * gn2)) {
      if (shrinks == cfg.max_shrinks) {
        failed = true;
        break;
      }
      alpha *= cfg.delta;
      ++shrinks;
      trial = step_along(cfg.curve, z, v, alpha);
      f_trial = g.value(trial);
    }
    const double q_next = cfg.eta * Q + 1.0;
    C = (cfg.eta * Q * C + f_trial) / q_next;
    Q = q_next;

    const Vector s = trial - z;
    Vector rg_next = riemannian(g.gradient(trial), trial);
    const Vector y = rg_next - rg;
    const double used = alpha;
    alpha = bb_step(s, y, cfg.alpha_min, cfg.alpha_max);

    z = std::move(trial);
    rg = std::move(rg_next);
    f = f_trial;
    ++k;
    rec.add(k, f, rg.norm(), used, shrinks, failed);
    if (failed) {
      out.trace.status = RunStatus::LineSearchFailed;
      break;
    }
  }
  return out;
}

SolveResult had_rgd(const Objective& f, const SimplexPoint& x0, const RgdConfig& cfg) {
  const PullbackObjective g(f);
  return to_simplex(rgd_sphere(sphere_problem(g), hadamard_sqrt(x0.coords()), cfg));
}

SolveResult had_prgd(const Objective& f, const SimplexPoint& x0, const PrgdConfig& cfg,
                     std::uint64_t rng_seed) {
  const PullbackObjective g(f);
  return to_simplex(prgd_sphere(sphere_problem(g), hadamard_sqrt(x0.coords()), cfg, rng_seed));
}

SolveResult had_rgd_aw(const Objective& f, const SimplexPoint& x0, const AwConfig& cfg) {
  const PullbackObjective g(f);
  return to_simplex(rgd_aw_sphere(sphere_problem(g), hadamard_sqrt(x0.coords()), cfg));
}

SolveResult had_rgd_bb(const Objective& f, const SimplexPoint& x0, const BbConfig& cfg) {
  const PullbackObjective g(f);
  return to_simplex(rgd_bb_sphere(sphere_problem(g), hadamard_sqrt(x0.coords()), cfg));
}

L1SolveResult had_rgd_bb_l1(const Objective& f, const Vector& stacked0, const BbConfig& cfg) {
  const DoublePullbackObjective g(f);
  require(stacked0.size() == 2 * f.dim, "had_rgd_bb_l1: expected a stacked (zu, zv) start");
  SphereSolveResult run = rgd_bb_sphere(sphere_problem(g), stacked0, cfg);
  Vector x = g.to_original(run.z);
  return L1SolveResult{std::move(x), std::move(run.z), std::move(run.trace)};
}

L1SolveResult had_rgd_bb_l1(const Objective& f, const BbConfig& cfg) {
  const Index N = 2 * f.dim;
  return had_rgd_bb_l1(f, Vector::Constant(N, 1.0 / std::sqrt(static_cast<double>(N))), cfg);
}

}  // namespace hadopt
