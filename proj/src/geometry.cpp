#include "hadopt/geometry.hpp"

#include <cmath>
#include <utility>

namespace hadopt {

namespace {

bool is_sphere_like(GeometryKind kind) {
  return kind == GeometryKind::Sphere || kind == GeometryKind::DoubleSphere;
}

Vector constraint_normal(const Geometry& geo, const Vector& z) {
  if (geo.kind == GeometryKind::WeightedBall) return geo.weights.cwiseProduct(z);
  return z;
}

}  // namespace

Geometry Geometry::weighted_ball(Vector a) {
  if (a.size() == 0 || (a.array() <= 0.0).any()) {
    throw std::invalid_argument("weighted ball weights must be strictly positive");
  }
  const Index n = a.size();
  return {GeometryKind::WeightedBall, n, std::move(a)};
}

double metric_norm_sq(const Geometry& geo, const Vector& z) {
  if (geo.kind == GeometryKind::WeightedBall) return z.dot(geo.weights.cwiseProduct(z));
  return z.squaredNorm();
}

bool is_feasible(const Geometry& geo, const Vector& z) {
  if (z.size() != geo.dim || !z.allFinite()) return false;
  switch (geo.kind) {
    case GeometryKind::Sphere:
    case GeometryKind::DoubleSphere:
      return std::abs(z.norm() - 1.0) <= kFeasibilityTol;
    case GeometryKind::Ball:
      return z.norm() <= 1.0 + kFeasibilityTol;
    case GeometryKind::WeightedBall:
      return metric_norm_sq(geo, z) <= 1.0 + kFeasibilityTol;
  }
  return false;
}

bool on_boundary(const Geometry& geo, const Vector& z) {
  if (is_sphere_like(geo.kind)) return true;
  return std::abs(std::sqrt(metric_norm_sq(geo, z)) - 1.0) <= kFeasibilityTol;
}

ManifoldPoint::ManifoldPoint(Geometry geo, Vector coords)
    : geo_(std::move(geo)), coords_(std::move(coords)) {
  if (!is_feasible(geo_, coords_)) {
    throw std::invalid_argument("ManifoldPoint: coordinates violate the geometry constraint");
  }
}

Vector tangent_project(const Geometry& geo, const Vector& z, const Vector& w) {
  if (!is_sphere_like(geo.kind) && !on_boundary(geo, z)) return w;
  const Vector nrm = constraint_normal(geo, z);
  const double nn = nrm.squaredNorm();
  if (!(nn > 0.0)) return w;
  if (is_sphere_like(geo.kind)) {
    // |z| = 1 up to feasibility tolerance; use the exact formula w - (w.z) z.
    return w - w.dot(z) * z;
  }
  return w - (w.dot(nrm) / nn) * nrm;
}

Vector exp_map(const Geometry& geo, const Vector& z, const Vector& v) {
  if (is_sphere_like(geo.kind)) {
    const double t = v.norm();
    if (t < kZeroVelocity) return z;
    Vector out = std::cos(t) * z + (std::sin(t) / t) * v;
    out /= out.norm();
    return out;
  }
  Vector out = z + v;
  const double r = std::sqrt(metric_norm_sq(geo, out));
  if (r > 1.0) out /= r;
  return out;
}

Vector geodesic_velocity(const Vector& z, const Vector& v, double t) {
  const double nv = v.norm();
  if (nv < kZeroVelocity) return v;
  return -std::sin(t * nv) * nv * z + std::cos(t * nv) * v;
}

Vector riemannian_gradient(const PullbackObjective& g, const Vector& z) {
  const Vector eg = g.gradient(z);
  return eg - eg.dot(z) * z;
}

Vector riemannian_hessian_vec(const PullbackObjective& g, const Vector& z, const Vector& d) {
  const Vector pd = d - d.dot(z) * z;
  const double radial = g.gradient(z).dot(z);
  Vector out = g.hessian_vec(z, pd) - radial * pd;
  return out - out.dot(z) * z;
}

EigenEstimate min_hessian_eig(const PullbackObjective& g, const Vector& z,
                              const MinEigOptions& opts) {
  if (!g.has_hessian()) throw MissingHessianError();
  const Index n = z.size();
  const Vector eg = g.gradient(z);
  const double radial = eg.dot(z);
  const auto project = [&z](const Vector& w) -> Vector { return w - w.dot(z) * z; };
  const auto op = [&](const Vector& d) -> Vector {
    return g.hessian_vec(z, d) - radial * d;
  };
  LanczosOptions lo;
  lo.tol = opts.tol;
  lo.max_iters = opts.max_iters;
  return lanczos_min_eig(op, project, n, n - 1, lo);
}

}  // namespace hadopt
