#pragma once

#include "hadopt/hadamard.hpp"
#include "hadopt/linalg.hpp"

#include <stdexcept>

namespace hadopt {

enum class GeometryKind { Sphere, Ball, WeightedBall, DoubleSphere };

/// Feasible set on the parametrized side.
///   Sphere        S_{n-1}: |z| = 1            (probability simplex)
///   Ball          B_n:     |z| <= 1           (unit simplex)
///   WeightedBall  sum_i a_i z_i^2 <= 1, a > 0 (weighted simplex)
///   DoubleSphere  S_{2n-1} over (zu, zv)      (l1 ball, active constraint)
struct Geometry {
  GeometryKind kind = GeometryKind::Sphere;
  Index dim = 0;   // ambient dimension of the parametrized coordinates
  Vector weights;  // WeightedBall only

  static Geometry sphere(Index n) { return {GeometryKind::Sphere, n, {}}; }
  static Geometry ball(Index n) { return {GeometryKind::Ball, n, {}}; }
  static Geometry weighted_ball(Vector a);
  /// Product sphere over stacked (zu, zv) with zu, zv in R^n.
  static Geometry double_sphere(Index n) { return {GeometryKind::DoubleSphere, 2 * n, {}}; }
};

inline constexpr double kFeasibilityTol = 1e-10;
inline constexpr double kZeroVelocity = 1e-14;

/// |z|^2 in the geometry's metric (diag(a) for the weighted ball).
double metric_norm_sq(const Geometry& geo, const Vector& z);

/// True when z satisfies the geometry's feasibility invariant (tolerance 1e-10).
bool is_feasible(const Geometry& geo, const Vector& z);

/// True when z sits on the boundary of a ball geometry (always true for spheres).
bool on_boundary(const Geometry& geo, const Vector& z);

/// A point paired with its geometry. Construction checks feasibility.
class ManifoldPoint {
 public:
  ManifoldPoint(Geometry geo, Vector coords);
  const Geometry& geometry() const { return geo_; }
  const Vector& coords() const { return coords_; }

 private:
  Geometry geo_;
  Vector coords_;
};

/// Projection onto the tangent space at z: w - <w, n> n / |n|^2 with n the
/// constraint normal (z, or a*z for the weighted ball). Ball interiors return w.
Vector tangent_project(const Geometry& geo, const Vector& z, const Vector& w);

/// Sphere geometries: geodesic step cos|v| z + sin|v| v/|v|, renormalized.
/// Ball geometries: projection retraction (z+v)/max(1, |z+v|) in the metric.
Vector exp_map(const Geometry& geo, const Vector& z, const Vector& v);

/// Velocity of t -> exp_z(t v) at t (sphere geometries).
Vector geodesic_velocity(const Vector& z, const Vector& v, double t);

/// Riemannian gradient of the pullback on the sphere: Proj_z grad g(z).
Vector riemannian_gradient(const PullbackObjective& g, const Vector& z);

/// Proj_z( Hess g(z) Proj_z d - <grad g(z), z> Proj_z d ).
Vector riemannian_hessian_vec(const PullbackObjective& g, const Vector& z, const Vector& d);

struct MinEigOptions {
  double tol = 1e-8;
  int max_iters = 500;
};

/// Smallest eigenvalue of the Riemannian Hessian restricted to T_z S_{n-1},
/// computed matrix-free. `converged` is false when the iteration cap was hit.
EigenEstimate min_hessian_eig(const PullbackObjective& g, const Vector& z,
                              const MinEigOptions& opts = {});

}  // namespace hadopt
