#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hadopt/projection.hpp"

#include "oracles.hpp"

#include <random>

using namespace hadopt;

namespace {

constexpr ProjectionAlgo kAlgos[] = {ProjectionAlgo::SortProject, ProjectionAlgo::PivotProject,
                                     ProjectionAlgo::DuchiProject, ProjectionAlgo::CondatProject};

// p solves the projection onto conv{vertices} iff <y - p, v - p> <= 0 for every vertex v.
double vertex_optimality_violation(const Vector& y, const Vector& p, bool signed_vertices) {
  const Vector r = y - p;
  const double rp = r.dot(p);
  double worst = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < y.size(); ++i) {
    worst = std::max(worst, r(i) - rp);
    if (signed_vertices) worst = std::max(worst, -r(i) - rp);
  }
  return worst;
}

}  // namespace

TEST_CASE("algorithm names") {
  for (ProjectionAlgo a : kAlgos) CHECK(projection_algo_from_string(to_string(a)) == a);
  CHECK(to_string(ProjectionAlgo::CondatProject) == "condat");
  CHECK_THROWS_AS(projection_algo_from_string("michelot"), std::invalid_argument);
}

TEST_CASE("small inputs match the support-enumeration oracle") {
  std::mt19937_64 rng(41);
  for (Index n = 1; n <= 8; ++n) {
    for (int t = 0; t < 300; ++t) {
      Vector y = oracle::random_gaussian(n, rng) * std::pow(10.0, t % 5 - 2);
      const Vector ref = oracle::qp_project_simplex(y);
      for (ProjectionAlgo a : kAlgos) {
        const SimplexPoint x = project_simplex(y, a);
        CHECK((x.coords() - ref).cwiseAbs().maxCoeff() <= 1e-10);
        const double tau = simplex_threshold(y, a);
        CHECK((x.coords() - (y.array() - tau).max(0.0).matrix()).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("special inputs") {
  const std::vector<Vector> inputs = {
      Vector::Constant(6, 3.0),
      Vector::Constant(6, -3.0),
      (Vector(4) << 0.1, 0.2, 0.3, 0.4).finished(),
      (Vector(4) << 5.0, 5.0, -1.0, 5.0).finished(),
      (Vector(3) << 1e8, 0.0, -1e8).finished(),
      (Vector(5) << 0.0, 0.0, 1.0, 0.0, 0.0).finished(),
      (Vector(2) << 1e-17, -1e-17).finished(),
  };
  for (const Vector& y : inputs) {
    const Vector ref = oracle::qp_project_simplex(y);
    for (ProjectionAlgo a : kAlgos) {
      INFO(to_string(a) << " on " << y.transpose());
      CHECK((project_simplex(y, a).coords() - ref).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  for (ProjectionAlgo a : kAlgos) {
    const Vector feasible = (Vector(4) << 0.1, 0.2, 0.3, 0.4).finished();
    CHECK((project_simplex(feasible, a).coords() - feasible).norm() <= 1e-15);
  }
}

TEST_CASE("large inputs agree and satisfy the optimality conditions") {
  std::mt19937_64 rng(42);
  for (Index n : {1000, 20000}) {
    for (double scale : {1e-3, 1.0, 100.0}) {
      const Vector y = oracle::random_gaussian(n, rng) * scale;
      const Vector base = project_simplex(y).coords();
      CHECK(vertex_optimality_violation(y, base, false) <= 1e-12 * std::max(1.0, scale));
      for (ProjectionAlgo a : kAlgos) {
        const Vector x = project_simplex(y, a).coords();
        CHECK((x - base).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(std::abs(x.sum() - 1.0) <= 1e-13);
        CHECK(x.minCoeff() >= 0.0);
      }
    }
  }
}

TEST_CASE("pivot selection is deterministic") {
  std::mt19937_64 rng(43);
  const Vector y = oracle::random_gaussian(5000, rng);
  CHECK(simplex_threshold(y, ProjectionAlgo::PivotProject) ==
        simplex_threshold(y, ProjectionAlgo::PivotProject));
  CHECK(simplex_threshold(y, ProjectionAlgo::DuchiProject) ==
        simplex_threshold(y, ProjectionAlgo::DuchiProject));
}

TEST_CASE("l1 ball projection") {
  std::mt19937_64 rng(44);
  const Vector inside = (Vector(3) << 0.2, -0.3, 0.1).finished();
  CHECK(project_l1_ball(inside) == inside);
  for (int t = 0; t < 500; ++t) {
    const Index n = 1 + t % 12;
    const Vector y = oracle::random_gaussian(n, rng) * 2.0;
    const double radius = 0.5 + (t % 3);
    const Vector p = project_l1_ball(y, radius);
    if (y.lpNorm<1>() <= radius) {
      CHECK(p == y);
      continue;
    }
    CHECK(p.lpNorm<1>() == doctest::Approx(radius).epsilon(1e-12));
    CHECK(vertex_optimality_violation(y / radius, p / radius, true) <= 1e-12);
    if (n <= 8) {
      const Vector ref =
          radius * y.cwiseSign().cwiseProduct(oracle::qp_project_simplex(y.cwiseAbs() / radius));
      CHECK((p - ref).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  CHECK_THROWS_AS(project_l1_ball(inside, 0.0), std::invalid_argument);
}
