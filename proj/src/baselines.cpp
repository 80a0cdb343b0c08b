#include "hadopt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hadopt {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void push(RunTrace& trace, const Stopwatch& clock, long k, double f, double measure, double step,
          int backtracks = 0, bool failed = false) {
  TraceRecord r;
  r.iteration = k;
  r.value = f;
  r.grad_norm = measure;
  r.step = step;
  r.seconds = clock.seconds();
  r.backtracks = backtracks;
  r.line_search_failed = failed;
  trace.records.push_back(r);
}

bool below_target(double f, const std::optional<double>& target) { return target && f <= *target; }

// Entries drift below zero by rounding only; pin them back before wrapping.
SimplexPoint tidy(Vector x) {
  x = x.cwiseMax(0.0);
  x /= x.sum();
  return SimplexPoint(std::move(x));
}

Index argmin_lowest(const Vector& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i)
    if (v(i) < v(best)) best = i;
  return best;
}

}  // namespace

void PgdConfig::validate() const {
  require(step > 0.0, "PgdConfig: step must be positive");
  require(beta > 0.0 && beta < 1.0, "PgdConfig: beta must lie in (0, 1)");
  require(rho1 > 0.0 && rho1 < 1.0, "PgdConfig: rho1 must lie in (0, 1)");
  require(max_backtracks >= 0, "PgdConfig: max_backtracks must be nonnegative");
  require(max_iters >= 1, "PgdConfig: max_iters must be at least 1");
  require(grad_tol >= 0.0, "PgdConfig: grad_tol must be nonnegative");
}

PgdConfig bench_pgd_config(double L) {
  require(L > 0.0, "bench_pgd_config: L must be positive");
  PgdConfig cfg;
  cfg.step = 20.0 / L;
  cfg.beta = 0.75;
  cfg.rho1 = 1e-4;
  return cfg;
}

BaselineResult pgd_linesearch(const Objective& f, const SimplexPoint& x0, const PgdConfig& cfg) {
  cfg.validate();
  require(x0.dim() == f.dim, "pgd_linesearch: dimension mismatch");
  Stopwatch clock;
  RunTrace trace;
  Vector x = x0.coords();
  double fx = f.value(x);
  Vector grad = f.gradient(x);
  Vector xbar = project_simplex(x - cfg.step * grad, cfg.projection).coords();
  push(trace, clock, 0, fx, (xbar - x).norm() / cfg.step, 0.0);
  for (long k = 0;;) {
    const Vector d = xbar - x;
    if (d.norm() / cfg.step <= cfg.grad_tol || below_target(fx, cfg.target_value)) {
      trace.status = RunStatus::Converged;
      break;
    }
    if (k >= cfg.max_iters) {
      trace.status = RunStatus::MaxIters;
      break;
    }
    const double decrease = -cfg.rho1 * grad.dot(d);
    bool accepted = false;
    int m = 0;
    double alpha = 1.0;
    Vector trial;
    double f_trial = fx;
    for (; m <= cfg.max_backtracks; ++m) {
      alpha = std::pow(cfg.beta, m);
      trial = x + alpha * d;
      f_trial = f.value(trial);
      if (fx - f_trial >= decrease) {
        accepted = true;
        break;
      }
    }
    x = tidy(std::move(trial)).coords();
    fx = f.value(x);
    ++k;
    grad = f.gradient(x);
    xbar = project_simplex(x - cfg.step * grad, cfg.projection).coords();
    push(trace, clock, k, fx, (xbar - x).norm() / cfg.step, alpha,
         std::min(m, cfg.max_backtracks), !accepted);
    if (!accepted) {
      trace.status = RunStatus::LineSearchFailed;
      break;
    }
  }
  return BaselineResult{SimplexPoint(std::move(x)), std::move(trace)};
}

void EmdaConfig::validate() const {
  require(step > 0.0, "EmdaConfig: step must be positive");
  require(max_iters >= 1, "EmdaConfig: max_iters must be at least 1");
}

BaselineResult emda(const Objective& f, const SimplexPoint& x0, const EmdaConfig& cfg) {
  cfg.validate();
  require(x0.dim() == f.dim, "emda: dimension mismatch");
  require(x0.coords().minCoeff() > 0.0, "emda: initial point must be strictly positive");
  Stopwatch clock;
  RunTrace trace;
  Vector x = x0.coords();
  double fx = f.value(x);
  push(trace, clock, 0, fx, 0.0, 0.0);
  for (long k = 0;;) {
    if (below_target(fx, cfg.target_value)) {
      trace.status = RunStatus::Converged;
      break;
    }
    if (k >= cfg.max_iters) {
      trace.status = RunStatus::MaxIters;
      break;
    }
    const Vector e = -cfg.step * f.gradient(x);
    Vector next = x.cwiseProduct((e.array() - e.maxCoeff()).exp().matrix());
    next /= next.sum();
    const double moved = (next - x).lpNorm<1>() / cfg.step;
    x = std::move(next);
    fx = f.value(x);
    ++k;
    push(trace, clock, k, fx, moved, cfg.step);
  }
  return BaselineResult{SimplexPoint(std::move(x)), std::move(trace)};
}

BaselineResult emda(const Objective& f, const SimplexPoint& x0, double step, long K) {
  EmdaConfig cfg;
  cfg.step = step;
  cfg.max_iters = K;
  return emda(f, x0, cfg);
}

void FwConfig::validate() const {
  require(max_iters >= 1, "FwConfig: max_iters must be at least 1");
  require(gap_tol >= 0.0, "FwConfig: gap_tol must be nonnegative");
  require(!pairwise || linesearch, "FwConfig: pairwise steps need the exact line search");
}

double frank_wolfe_gap(const Vector& grad, const Vector& x) {
  return grad.dot(x) - grad(argmin_lowest(grad));
}

BaselineResult frank_wolfe(const Objective& f, const SimplexPoint& x0, const FwConfig& cfg) {
  cfg.validate();
  require(x0.dim() == f.dim, "frank_wolfe: dimension mismatch");
  if (cfg.linesearch && !f.has_hessian()) throw MissingHessianError();
  Stopwatch clock;
  RunTrace trace;
  Vector x = x0.coords();
  double fx = f.value(x);
  Vector grad = f.gradient(x);
  double gap = frank_wolfe_gap(grad, x);
  push(trace, clock, 0, fx, gap, 0.0);
  for (long k = 0;;) {
    if (gap <= cfg.gap_tol || below_target(fx, cfg.target_value)) {
      trace.status = RunStatus::Converged;
      break;
    }
    if (k >= cfg.max_iters) {
      trace.status = RunStatus::MaxIters;
      break;
    }
    const Index s = argmin_lowest(grad);
    Vector d;
    double gamma_max = 1.0;
    if (cfg.pairwise) {
      Index a = -1;
      for (Index i = 0; i < x.size(); ++i)
        if (x(i) > 0.0 && (a < 0 || grad(i) > grad(a))) a = i;
      d = Vector::Zero(x.size());
      d(s) += 1.0;
      d(a) -= 1.0;
      gamma_max = x(a);
    } else {
      d = -x;
      d(s) += 1.0;
    }
    double gamma;
    if (cfg.linesearch) {
      const double slope = grad.dot(d);
      const double curv = d.dot(f.hessian_vec(x, d));
      gamma = curv > 0.0 ? std::clamp(-slope / curv, 0.0, gamma_max) : (slope < 0.0 ? gamma_max : 0.0);
    } else {
      gamma = 2.0 / (static_cast<double>(k) + 2.0);
    }
    x += gamma * d;
    if (cfg.pairwise) x = x.cwiseMax(0.0);
    fx = f.value(x);
    ++k;
    grad = f.gradient(x);
    gap = frank_wolfe_gap(grad, x);
    push(trace, clock, k, fx, gap, gamma);
    if (cfg.linesearch && gamma == 0.0 && !cfg.pairwise) {
      trace.status = RunStatus::LineSearchFailed;
      break;
    }
  }
  return BaselineResult{tidy(std::move(x)), std::move(trace)};
}

}  // namespace hadopt
