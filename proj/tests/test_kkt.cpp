#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hadopt/kkt.hpp"
#include "hadopt/optimizers.hpp"
#include "hadopt/problems.hpp"

#include "oracles.hpp"
#include "test_objectives.hpp"

#include <random>

using namespace hadopt;

namespace {

// Smallest eigenvalue of Q on {u : sum u = 0, u_i = 0 off the support}.
double simplex_curvature_oracle(const Matrix& Q, const std::vector<Index>& support) {
  const Index s = static_cast<Index>(support.size());
  if (s <= 1) return std::numeric_limits<double>::infinity();
  const Matrix V = oracle::null_basis(Vector::Ones(s));
  Matrix Qs(s, s);
  for (Index a = 0; a < s; ++a)
    for (Index b = 0; b < s; ++b) Qs(a, b) = Q(support[a], support[b]);
  return oracle::min_eig(V.transpose() * Qs * V);
}

// Smallest eigenvalue of Hess g - 2 lambda I on the tangent space at z, for f = x'Qx/2 + c'x.
double sphere_curvature_oracle(const Matrix& Q, const Vector& c, const Vector& z) {
  const Vector gf = Q * hadamard_square(z) + c;
  const Matrix H = 2.0 * Matrix(gf.asDiagonal()) + 4.0 * z.asDiagonal() * Q * z.asDiagonal();
  const double lambda = gf.dot(hadamard_square(z));
  const Matrix V = oracle::null_basis(z);
  return oracle::min_eig(V.transpose() * (H - 2.0 * lambda * Matrix::Identity(z.size(), z.size())) * V);
}

void check_dichotomy(const KktReport& r) {
  if (r.verdict == KktVerdict::NotStationary) {
    CHECK_FALSE(r.first_order);
    return;
  }
  CHECK(r.first_order);
  if (std::isnan(r.min_curvature)) {
    CHECK(r.verdict == KktVerdict::FirstOrderKKT);
    return;
  }
  CHECK(r.second_order != r.strict_saddle);
  if (r.non_degenerate) CHECK(r.second_order);
  CHECK((r.verdict == KktVerdict::StrictSaddle) == r.strict_saddle);
}

}  // namespace

TEST_CASE("interior minimizer of a distance") {
  const Vector u = (Vector(4) << 0.1, 0.2, 0.3, 0.4).finished();
  const Objective f = testobj::distance_to(u);
  const KktReport r = kkt_check_simplex(f, u, 1e-8);
  CHECK(r.verdict == KktVerdict::NonDegenerate);
  CHECK(r.multiplier == doctest::Approx(0.0));
  CHECK(r.min_curvature == doctest::Approx(2.0));
  CHECK(r.critical_dim == 3);
  CHECK(r.support.size() == 4);
  const KktReport s = kkt_check_sphere(f, hadamard_sqrt(u), 1e-8);
  CHECK(s.verdict == KktVerdict::NonDegenerate);
  CHECK(s.critical_dim == 3);
}

TEST_CASE("vertex minimizer of a linear function") {
  const Vector c = (Vector(4) << 2.0, -1.0, 0.5, 3.0).finished();
  const Objective f = testobj::linear(c);
  const KktReport r = kkt_check_simplex(f, Vector::Unit(4, 1), 1e-9);
  CHECK(r.verdict == KktVerdict::NonDegenerate);
  CHECK(r.multiplier == doctest::Approx(-1.0));
  CHECK(r.beta(0) == doctest::Approx(3.0));
  CHECK(r.critical_dim == 0);
  CHECK(std::isinf(r.min_curvature));
  const KktReport s = kkt_check_sphere(f, Vector::Unit(4, 1), 1e-9);
  CHECK(s.verdict == KktVerdict::NonDegenerate);
  CHECK(s.multiplier == doctest::Approx(-1.0));
  CHECK(s.min_curvature == doctest::Approx(2.0 * (0.5 + 1.0)));

  // a vertex that is not the minimizer is first-order on the sphere only
  const KktReport bad = kkt_check_simplex(f, Vector::Unit(4, 0), 1e-9);
  CHECK(bad.verdict == KktVerdict::NotStationary);
  CHECK(bad.dual_residual == doctest::Approx(3.0));
  const KktReport sph = kkt_check_sphere(f, Vector::Unit(4, 0), 1e-9);
  CHECK(sph.first_order);
  CHECK(sph.verdict == KktVerdict::StrictSaddle);
}

TEST_CASE("uniform point of the negative norm is a strict saddle") {
  for (Index n : {3, 50, 250}) {
    const Objective f = gen_strict_saddle(n);
    const Vector x = Vector::Constant(n, 1.0 / n);
    const KktReport r = kkt_check_simplex(f, x, 1e-8);
    CHECK(r.verdict == KktVerdict::StrictSaddle);
    CHECK(r.min_curvature == doctest::Approx(-2.0));
    const KktReport s = kkt_check_sphere(f, hadamard_sqrt(x), 1e-8);
    CHECK(s.verdict == KktVerdict::StrictSaddle);
    CHECK(s.min_curvature == doctest::Approx(-8.0 / n));
    CHECK(s.curvature_method == (n - 1 <= 200 ? "dense" : "lanczos"));
    CHECK(kkt_check_simplex(f, Vector::Unit(n, 2), 1e-8).verdict == KktVerdict::NonDegenerate);
  }
}

TEST_CASE("non-stationary and infeasible points") {
  const Objective f = testobj::distance_to((Vector(3) << 0.6, 0.3, 0.1).finished());
  CHECK(kkt_check_simplex(f, Vector::Constant(3, 1.0 / 3), 1e-8).verdict ==
        KktVerdict::NotStationary);
  const KktReport r = kkt_check_simplex(f, (Vector(3) << 0.6, 0.3, 0.3).finished(), 1e-8);
  CHECK_FALSE(r.feasible);
  CHECK(r.feasibility_residual == doctest::Approx(0.2));
  CHECK_THROWS_AS(kkt_check_simplex(f, Vector::Ones(2), 1e-8), std::invalid_argument);
}

TEST_CASE("without a Hessian the verdict stops at first order") {
  Objective f = testobj::distance_to((Vector(3) << 0.6, 0.3, 0.1).finished());
  f.hessian_vec = nullptr;
  const KktReport r = kkt_check_simplex(f, (Vector(3) << 0.6, 0.3, 0.1).finished(), 1e-8);
  CHECK(r.verdict == KktVerdict::FirstOrderKKT);
  CHECK(std::isnan(r.min_curvature));
  CHECK(r.to_json()["curvature"]["min"].is_null());
}

TEST_CASE("curvature and multipliers match dense oracles on solver output") {
  long saddles = 0, minima = 0;
  for (int t = 0; t < 60; ++t) {
    const Index n = 2 + t % 9;
    const QuadraticProblem q = gen_random_quadratic(n, t % 3 == 0, 700 + t);
    const Objective f = q.objective();
    BbConfig cfg;
    cfg.grad_tol = 1e-10;
    cfg.max_iters = 50000;
    const SolveResult run = had_rgd_bb(f, SimplexPoint::uniform(n), cfg);
    const Vector& z = run.z;
    const Vector x = hadamard_square(z);

    const KktReport s = kkt_check_sphere(f, z, 1e-6);
    const KktReport o = kkt_check_simplex(f, x, 1e-6);
    check_dichotomy(s);
    check_dichotomy(o);
    REQUIRE(s.first_order);
    REQUIRE(o.first_order);
    saddles += o.strict_saddle;
    minima += o.second_order;

    CHECK(s.min_curvature == doctest::Approx(sphere_curvature_oracle(q.Q, q.c, z)).epsilon(1e-8));
    const double oc = simplex_curvature_oracle(q.Q, o.support);
    if (std::isinf(oc))
      CHECK(std::isinf(o.min_curvature));
    else
      CHECK(o.min_curvature == doctest::Approx(oc).epsilon(1e-8));

    const Vector gf = q.Q * x + q.c;
    CHECK(s.multiplier == doctest::Approx(gf.dot(x)).epsilon(1e-12));
    for (Index i : s.support)
      CHECK(std::abs(gf(i) - s.multiplier) * std::abs(z(i)) <= s.stationarity_residual + 1e-15);
    for (Index i : o.support) CHECK(std::abs(o.beta(i)) <= o.stationarity_residual);
  }
  CHECK(minima > 0);
}

TEST_CASE("sign flips leave the sphere verdict unchanged") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 20; ++t) {
    const Index n = 2 + t % 8;
    const QuadraticProblem q = gen_random_quadratic(n, false, 900 + t);
    BbConfig cfg;
    cfg.grad_tol = 1e-10;
    const Vector z = had_rgd_bb(q.objective(), SimplexPoint::uniform(n), cfg).z;
    const CorrespondenceReport rep = verify_correspondence(q.objective(), z, 1e-6);
    CHECK(rep.flips_checked == (1L << n));
    CHECK(rep.flips_agree);
    CHECK(rep.agree);
    // flips of a random, non-stationary point too
    const Vector w = oracle::random_unit(n, rng);
    const CorrespondenceReport any = verify_correspondence(q.objective(), w, 1e-6);
    CHECK(any.flips_agree);
  }
}

TEST_CASE("epsilon second-order stationarity") {
  const PullbackObjective g(gen_strict_saddle(10));
  const Vector uniform = Vector::Constant(10, 1.0 / std::sqrt(10.0));
  CHECK_FALSE(epsilon_sosp_check(g, uniform, 1e-3, 1.0));  // -0.8 < -sqrt(1e-3)
  CHECK(epsilon_sosp_check(g, uniform, 1e-3, 1e3));        // -0.8 >= -1
  CHECK(epsilon_sosp_check(g, Vector::Unit(10, 0), 1e-6, 1.0));
  CHECK_THROWS_AS(epsilon_sosp_check(g, uniform, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("unit simplex and ball systems") {
  // f = |x - u|^2 with u outside the unit simplex: the sum constraint binds
  const Vector u = (Vector(3) << 0.8, 0.5, -0.1).finished();
  const Objective f = testobj::distance_to(u);
  const Vector x = (Vector(3) << 0.65, 0.35, 0.0).finished();
  const KktReport r = kkt_check_extended(f, x, Geometry::ball(3), ProblemSide::Original, 1e-9);
  CHECK(r.constraint_active);
  CHECK(r.multiplier == doctest::Approx(-0.3));
  CHECK(r.verdict == KktVerdict::NonDegenerate);
  const KktReport z = kkt_check_extended(f, hadamard_sqrt(x), Geometry::ball(3),
                                         ProblemSide::Parametrized, 1e-9);
  CHECK(z.verdict == KktVerdict::NonDegenerate);

  // u strictly inside: the constraint is inactive and the multiplier vanishes
  const Vector v = (Vector(3) << 0.2, 0.3, 0.1).finished();
  const Objective h = testobj::distance_to(v);
  const KktReport in = kkt_check_extended(h, v, Geometry::ball(3), ProblemSide::Original, 1e-9);
  CHECK_FALSE(in.constraint_active);
  CHECK(in.multiplier == 0.0);
  CHECK(in.verdict == KktVerdict::NonDegenerate);
  const KktReport inz = kkt_check_extended(h, hadamard_sqrt(v), Geometry::ball(3),
                                           ProblemSide::Parametrized, 1e-9);
  CHECK_FALSE(inz.constraint_active);
  CHECK(inz.critical_dim == 3);
  CHECK(inz.verdict == KktVerdict::NonDegenerate);

  // the wrong multiplier sign is a dual violation: pushing outward is not optimal
  const Objective lin = testobj::linear((Vector(2) << 1.0, 2.0).finished());
  const KktReport out = kkt_check_extended(lin, Vector::Unit(2, 0), Geometry::ball(2),
                                           ProblemSide::Parametrized, 1e-9);
  CHECK(out.dual_residual > 0.0);
  CHECK(out.verdict == KktVerdict::NotStationary);
  CHECK(kkt_check_extended(lin, Vector::Zero(2), Geometry::ball(2), ProblemSide::Original, 1e-9)
            .verdict == KktVerdict::NonDegenerate);
}

TEST_CASE("weighted simplex system") {
  const Vector a = (Vector(3) << 1.0, 2.0, 4.0).finished();
  const Vector c = (Vector(3) << 1.0, 1.0, 1.0).finished();
  // min c'x on {a'x = 1, x >= 0}: all mass on the largest weight, x = e_3 / 4
  const Objective f = testobj::linear(c);
  const Geometry wb = Geometry::weighted_ball(a);
  const Vector x = Vector::Unit(3, 2) / 4.0;
  const KktReport r = kkt_check_extended(f, x, wb, ProblemSide::Original, 1e-9);
  CHECK(r.verdict == KktVerdict::NonDegenerate);
  CHECK(r.multiplier == doctest::Approx(0.25));
  const KktReport z = kkt_check_extended(f, hadamard_sqrt(x), wb, ProblemSide::Parametrized, 1e-9);
  CHECK(z.first_order);
  CHECK(z.multiplier == doctest::Approx(0.25));
  CHECK(z.verdict == KktVerdict::NonDegenerate);
  CHECK(kkt_check_extended(f, Vector::Unit(3, 0), wb, ProblemSide::Original, 1e-9).verdict ==
        KktVerdict::NotStationary);
  CHECK_THROWS_AS(kkt_check_extended(f, Vector::Ones(2), wb, ProblemSide::Original, 1e-9),
                  std::invalid_argument);
}

TEST_CASE("unit weights reproduce the standard checks exactly") {
  std::mt19937_64 rng(72);
  for (int t = 0; t < 10; ++t) {
    const Index n = 3 + t;
    const QuadraticProblem q = gen_random_quadratic(n, t % 2 == 0, 300 + t);
    const Objective f = q.objective();
    const Geometry wb = Geometry::weighted_ball(Vector::Ones(n));
    const Vector z = t % 3 == 0 ? oracle::random_unit(n, rng)
                                : had_rgd_bb(f, SimplexPoint::uniform(n), BbConfig{}).z;
    for (ProblemSide side : {ProblemSide::Original, ProblemSide::Parametrized}) {
      const Vector p = side == ProblemSide::Original ? hadamard_square(z) : z;
      nlohmann::json std_report = kkt_check_extended(f, p, Geometry::sphere(n), side, 1e-6).to_json();
      nlohmann::json weighted = kkt_check_extended(f, p, wb, side, 1e-6).to_json();
      CHECK(weighted["geometry"] == "weighted_ball");
      std_report.erase("geometry");
      weighted.erase("geometry");
      CHECK(std_report.dump() == weighted.dump());
    }
  }
}

TEST_CASE("l1 ball system") {
  std::mt19937_64 rng(73);
  const Index n = 6;
  const Matrix A = testobj::gaussian(12, n, rng);
  Vector xt = Vector::Zero(n);
  xt(0) = 2.0;
  xt(3) = -1.0;
  const Vector b = A * xt;
  Objective f = least_squares_objective(A, b);
  f.convexity = Convexity::Convex;
  const Vector x = oracle::cd_lasso_constrained(A, b, 1.0);
  const KktReport r = kkt_check_extended(f, x, Geometry::double_sphere(n), ProblemSide::Original, 1e-6);
  CHECK(r.first_order);
  CHECK(r.multiplier < 0.0);
  CHECK(r.second_order);
  const KktReport z = kkt_check_extended(f, l1_to_double(x), Geometry::double_sphere(n),
                                         ProblemSide::Parametrized, 1e-6);
  CHECK(z.first_order);
  CHECK(z.second_order);
  CHECK(z.multiplier == doctest::Approx(r.multiplier).epsilon(1e-5));
  CHECK(kkt_check_extended(f, Vector::Zero(n), Geometry::double_sphere(n), ProblemSide::Original,
                           1e-6).verdict == KktVerdict::NotStationary);

  f.convexity = Convexity::Nonconvex;
  CHECK_THROWS_AS(kkt_check_extended(f, x, Geometry::double_sphere(n), ProblemSide::Original, 1e-6),
                  std::invalid_argument);
}

TEST_CASE("report JSON") {
  const Objective f = testobj::linear((Vector(3) << 2.0, -1.0, 0.5).finished());
  const nlohmann::json j = kkt_check_simplex(f, Vector::Unit(3, 1), 1e-9).to_json();
  CHECK(j["verdict"] == "NonDegenerate");
  CHECK(j["side"] == "original");
  CHECK(j["geometry"] == "sphere");
  CHECK(j["curvature"]["min"] == "inf");
  CHECK(j["thresholds"]["kind"] == "engineering");
  CHECK(j["thresholds"]["support_tol"] == 1e-8);
  CHECK(j["support"] == nlohmann::json::array({1}));
  CHECK(j["flags"]["first_order"] == true);
}
