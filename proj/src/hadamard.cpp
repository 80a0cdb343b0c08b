#include "hadopt/hadamard.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hadopt {

Vector hadamard_square(const Vector& z) { return z.cwiseProduct(z); }

Vector hadamard_sqrt(const Vector& x) {
  Vector z(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    if (xi < -1e-12 || std::isnan(xi)) {
      throw std::domain_error("hadamard_sqrt: entry " + std::to_string(i) + " is negative (" +
                              std::to_string(xi) + ")");
    }
    z(i) = xi > 0.0 ? std::sqrt(xi) : 0.0;
  }
  return z;
}

Vector double_hadamard(const Vector& zu, const Vector& zv) {
  if (zu.size() != zv.size()) throw std::invalid_argument("double_hadamard: size mismatch");
  return zu.cwiseProduct(zu) - zv.cwiseProduct(zv);
}

Vector pullback_gradient(const Objective& f, const Vector& z) {
  const Vector x = z.cwiseProduct(z);
  return 2.0 * f.gradient(x).cwiseProduct(z);
}

Vector pullback_hessian_vec(const Objective& f, const Vector& z, const Vector& d) {
  if (!f.has_hessian()) throw MissingHessianError();
  const Vector x = z.cwiseProduct(z);
  const Vector gf = f.gradient(x);
  const Vector hzd = f.hessian_vec(x, z.cwiseProduct(d));
  return 2.0 * gf.cwiseProduct(d) + 4.0 * z.cwiseProduct(hzd);
}

double transfer_lipschitz(double L, double M) {
  if (!(L >= 0.0) || !(M >= 0.0)) {
    throw std::invalid_argument("transfer_lipschitz: L and M must be nonnegative");
  }
  return 4.0 * L + 2.0 * M;
}

PullbackObjective::PullbackObjective(Objective base) : base_(std::move(base)) {
  if (base_.lipschitz_grad && base_.grad_inf_bound) {
    lipschitz_ = transfer_lipschitz(*base_.lipschitz_grad, *base_.grad_inf_bound);
  }
}

Objective PullbackObjective::as_objective() const {
  Objective g;
  g.dim = base_.dim;
  const Objective f = base_;
  g.value = [f](const Vector& z) { return f.value(z.cwiseProduct(z)); };
  g.gradient = [f](const Vector& z) { return pullback_gradient(f, z); };
  if (f.has_hessian()) {
    g.hessian_vec = [f](const Vector& z, const Vector& d) {
      return pullback_hessian_vec(f, z, d);
    };
  }
  g.lipschitz_grad = lipschitz_;
  return g;
}

DoublePullbackObjective::DoublePullbackObjective(Objective base) : base_(std::move(base)) {}

Vector DoublePullbackObjective::to_original(const Vector& stacked) const {
  const Index n = base_.dim;
  if (stacked.size() != 2 * n) throw std::invalid_argument("expected a stacked 2n-vector");
  return double_hadamard(stacked.head(n), stacked.tail(n));
}

double DoublePullbackObjective::value(const Vector& stacked) const {
  return base_.value(to_original(stacked));
}

Vector DoublePullbackObjective::gradient(const Vector& stacked) const {
  const Index n = base_.dim;
  const Vector gf = base_.gradient(to_original(stacked));
  Vector out(2 * n);
  out.head(n) = 2.0 * gf.cwiseProduct(stacked.head(n));
  out.tail(n) = -2.0 * gf.cwiseProduct(stacked.tail(n));
  return out;
}

Vector DoublePullbackObjective::hessian_vec(const Vector& stacked, const Vector& d) const {
  if (!base_.has_hessian()) throw MissingHessianError();
  const Index n = base_.dim;
  const Vector x = to_original(stacked);
  const Vector gf = base_.gradient(x);
  const auto zu = stacked.head(n);
  const auto zv = stacked.tail(n);
  const auto du = d.head(n);
  const auto dv = d.tail(n);
  // J = [diag(zu); -diag(zv)], Hess = 2 blkdiag(diag(gf), -diag(gf)) + 4 J Hf J^T.
  const Vector jtd = zu.cwiseProduct(du) - zv.cwiseProduct(dv);
  const Vector h = base_.hessian_vec(x, jtd);
  Vector out(2 * n);
  out.head(n) = 2.0 * gf.cwiseProduct(du) + 4.0 * zu.cwiseProduct(h);
  out.tail(n) = -2.0 * gf.cwiseProduct(dv) - 4.0 * zv.cwiseProduct(h);
  return out;
}

Objective DoublePullbackObjective::as_objective() const {
  Objective g;
  g.dim = 2 * base_.dim;
  const DoublePullbackObjective self = *this;
  g.value = [self](const Vector& s) { return self.value(s); };
  g.gradient = [self](const Vector& s) { return self.gradient(s); };
  if (base_.has_hessian()) {
    g.hessian_vec = [self](const Vector& s, const Vector& d) { return self.hessian_vec(s, d); };
  }
  return g;
}

Vector l1_to_double(const Vector& x) {
  const Index n = x.size();
  Vector out(2 * n);
  for (Index i = 0; i < n; ++i) {
    out(i) = x(i) > 0.0 ? std::sqrt(x(i)) : 0.0;
    out(n + i) = x(i) < 0.0 ? std::sqrt(-x(i)) : 0.0;
  }
  return out;
}

}  // namespace hadopt
