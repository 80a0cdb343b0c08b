#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hadopt/baselines.hpp"
#include "hadopt/problems.hpp"

#include "oracles.hpp"
#include "test_objectives.hpp"

#include <random>

using namespace hadopt;

namespace {

struct Instance {
  Matrix Q;
  Vector c;
  Objective f;
  oracle::QpSolution opt;
};

Instance convex_instance(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix B = testobj::gaussian(n, n, rng);
  Instance out;
  out.Q = B.transpose() * B / double(n) + 0.05 * Matrix::Identity(n, n);
  out.c = oracle::random_gaussian(n, rng);
  out.f = testobj::quadratic(out.Q, out.c);
  out.opt = oracle::qp_simplex_min(out.Q, out.c);
  return out;
}

}  // namespace

TEST_CASE("PGD first step follows the feasible-direction Armijo rule") {
  const Instance q = convex_instance(6, 51);
  PgdConfig cfg;
  cfg.step = 3.0;
  cfg.max_iters = 1;
  const SimplexPoint x0 = SimplexPoint::uniform(6);
  const BaselineResult r = pgd_linesearch(q.f, x0, cfg);
  REQUIRE(r.trace.records.size() == 2);

  const Vector x = x0.coords();
  const Vector g = q.f.gradient(x);
  const Vector d = oracle::qp_project_simplex(x - cfg.step * g) - x;
  int m = 0;
  while (q.f.value(x) - q.f.value(x + std::pow(cfg.beta, m) * d) < -cfg.rho1 * g.dot(d)) ++m;
  CHECK(r.trace.records[1].backtracks == m);
  CHECK(r.trace.records[1].step == doctest::Approx(std::pow(cfg.beta, m)));
  CHECK((r.x.coords() - (x + std::pow(cfg.beta, m) * d)).norm() <= 1e-12);
  CHECK(r.trace.records[0].grad_norm == doctest::Approx(d.norm() / cfg.step));
}

TEST_CASE("PGD converges, stays feasible and never increases f") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Instance q = convex_instance(4 + seed, 60 + seed);
    for (ProjectionAlgo a : {ProjectionAlgo::SortProject, ProjectionAlgo::DuchiProject,
                             ProjectionAlgo::CondatProject, ProjectionAlgo::PivotProject}) {
      PgdConfig cfg;
      cfg.step = 2.0;
      cfg.max_iters = 20000;
      cfg.grad_tol = 1e-7;
      cfg.projection = a;
      const BaselineResult r = pgd_linesearch(q.f, SimplexPoint::uniform(q.c.size()), cfg);
      CHECK(r.trace.status == RunStatus::Converged);
      CHECK(r.trace.final_value() == doctest::Approx(q.opt.value).epsilon(1e-9));
      CHECK((r.x.coords() - q.opt.x).norm() <= 1e-6);
      for (std::size_t i = 1; i < r.trace.records.size(); ++i)
        CHECK(r.trace.records[i].value <= r.trace.records[i - 1].value + 1e-15);
    }
  }
}

TEST_CASE("PGD benchmark preset") {
  const PgdConfig c = bench_pgd_config(4.0);
  CHECK(c.step == doctest::Approx(5.0));
  CHECK(c.beta == 0.75);
  CHECK(c.rho1 == 1e-4);
  CHECK_THROWS_AS(bench_pgd_config(0.0), std::invalid_argument);
  PgdConfig bad;
  bad.rho1 = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("EMDA multiplicative update") {
  const Instance q = convex_instance(5, 70);
  const SimplexPoint x0 = SimplexPoint::uniform(5);
  const BaselineResult one = emda(q.f, x0, 0.3, 1);
  Vector expected = x0.coords().cwiseProduct((-0.3 * q.f.gradient(x0.coords())).array().exp().matrix());
  expected /= expected.sum();
  CHECK((one.x.coords() - expected).norm() <= 1e-15);

  const BaselineResult many = emda(q.f, x0, 0.5, 20000);
  CHECK(many.trace.final_value() == doctest::Approx(q.opt.value).epsilon(1e-4));
  CHECK(many.trace.iterations() == 20000);

  const Objective steep = testobj::linear((Vector(3) << 1e6, 0.0, -1e6).finished());
  const BaselineResult s = emda(steep, SimplexPoint::uniform(3), 1.0, 5);
  CHECK(s.x.coords().allFinite());
  CHECK(s.x[2] == doctest::Approx(1.0));

  CHECK_THROWS_AS(emda(q.f, SimplexPoint::vertex(5, 0), 0.1, 10), std::invalid_argument);
  CHECK_THROWS_AS(emda(q.f, x0, 0.0, 10), std::invalid_argument);
}

TEST_CASE("Frank-Wolfe gap") {
  const Vector g = (Vector(4) << 3.0, -1.0, -1.0, 2.0).finished();
  const Vector x = (Vector(4) << 0.25, 0.25, 0.25, 0.25).finished();
  CHECK(frank_wolfe_gap(g, x) == doctest::Approx(0.75 + 1.0));
  CHECK(frank_wolfe_gap(g, Vector::Unit(4, 1)) == 0.0);
}

TEST_CASE("Frank-Wolfe steps") {
  const Instance q = convex_instance(6, 80);
  const SimplexPoint x0 = SimplexPoint::uniform(6);
  FwConfig cfg;
  cfg.max_iters = 1;
  const BaselineResult r = frank_wolfe(q.f, x0, cfg);
  const Vector x = x0.coords(), g = q.f.gradient(x);
  Index s = 0;
  g.minCoeff(&s);
  const Vector d = Vector::Unit(6, s) - x;
  const double gamma = std::clamp(-g.dot(d) / d.dot(q.Q * d), 0.0, 1.0);
  CHECK((r.x.coords() - (x + gamma * d)).norm() <= 1e-14);
  CHECK(r.trace.records[0].grad_norm == doctest::Approx(frank_wolfe_gap(g, x)));

  FwConfig open;
  open.linesearch = false;
  open.max_iters = 2;
  const BaselineResult o = frank_wolfe(q.f, x0, open);
  CHECK(o.trace.records[1].step == 1.0);
  CHECK(o.trace.records[2].step == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("Frank-Wolfe variants converge") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Instance q = convex_instance(5 + seed, 90 + seed);
    const SimplexPoint x0 = SimplexPoint::uniform(q.c.size());
    FwConfig ls;
    ls.max_iters = 20000;
    FwConfig pw = ls;
    pw.pairwise = true;
    pw.gap_tol = 1e-12;
    FwConfig open = ls;
    open.linesearch = false;
    const BaselineResult a = frank_wolfe(q.f, x0, ls);
    const BaselineResult b = frank_wolfe(q.f, x0, pw);
    const BaselineResult c = frank_wolfe(q.f, x0, open);
    CHECK(a.trace.final_value() - q.opt.value <= 1e-5);
    CHECK(c.trace.final_value() - q.opt.value <= 1e-3);
    CHECK(b.trace.status == RunStatus::Converged);
    CHECK(b.trace.final_value() - q.opt.value <= 1e-10);
    for (const BaselineResult* r : {&a, &b, &c}) {
      CHECK(r->trace.final_value() >= q.opt.value - 1e-12);
      // the gap bounds the suboptimality
      for (const TraceRecord& rec : r->trace.records)
        CHECK(rec.value - q.opt.value <= rec.grad_norm + 1e-12);
    }
  }
}

TEST_CASE("Frank-Wolfe needs a Hessian for the line search") {
  Objective f = testobj::distance_to(Vector::Constant(3, 1.0 / 3));
  f.hessian_vec = nullptr;
  CHECK_THROWS_AS(frank_wolfe(f, SimplexPoint::uniform(3), FwConfig{}), MissingHessianError);
  FwConfig open;
  open.linesearch = false;
  CHECK_NOTHROW(frank_wolfe(f, SimplexPoint::uniform(3), open));
  FwConfig bad;
  bad.linesearch = false;
  bad.pairwise = true;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("baselines on least squares reach small error") {
  const LeastSquaresProblem p = gen_least_squares(200, TruthKind::Boundary, 5);
  const Objective f = p.objective();
  const SimplexPoint x0 = SimplexPoint::uniform(200);
  PgdConfig cfg = bench_pgd_config(p.L);
  cfg.target_value = 1e-6;
  const BaselineResult r = pgd_linesearch(f, x0, cfg);
  CHECK(r.trace.final_value() <= 1e-6);
  FwConfig pw;
  pw.pairwise = true;
  pw.target_value = 1e-6;
  pw.max_iters = 20000;
  CHECK(frank_wolfe(f, x0, pw).trace.final_value() <= 1e-6);
}
