#include "hadopt/bench.hpp"
#include "hadopt/kkt.hpp"
#include "hadopt/projection.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hadopt;
using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(e.what());
  }
}

GeneratedProblem generate(const std::string& kind, Index n, std::uint64_t seed, const std::string& truth,
                          bool convex, Index sparsity) {
  json j = {{"kind", kind}, {"n", n}, {"seed", seed}, {"truth", truth}, {"convex", convex},
            {"sparsity", sparsity}};
  return make_problem(problem_spec_from_json(j));
}

GeneratedProblem from_data(const Matrix& A, const Vector& b) {
  if (A.rows() != b.size()) throw std::invalid_argument("A and b have mismatched rows");
  GeneratedProblem p;
  p.spec.n = A.cols();
  p.A = A;
  p.b = b;
  p.L = least_squares_lipschitz(A);
  p.f = least_squares_objective(A, b, p.L);
  return p;
}

Vector check_dim(const GeneratedProblem& p, const Vector& x) {
  if (x.size() != p.f.dim) throw std::invalid_argument("point has the wrong dimension");
  return x;
}

py::dict solve(const GeneratedProblem& p, const std::string& solver, long max_iters,
               std::optional<double> target, std::uint64_t seed, const std::string& overrides) {
  SolverRun run;
  {
    py::gil_scoped_release release;
    run = run_solver(solver, parse(overrides), p, max_iters, target, seed);
  }
  const std::size_t k = run.trace.records.size();
  Eigen::VectorXd f(k), grad(k), step(k), secs(k);
  Eigen::VectorXi backtracks(k);
  for (std::size_t i = 0; i < k; ++i) {
    const TraceRecord& r = run.trace.records[i];
    f(i) = r.value;
    grad(i) = r.grad_norm;
    step(i) = r.step;
    secs(i) = r.seconds;
    backtracks(i) = r.backtracks;
  }
  py::dict out;
  out["x"] = run.x;
  out["status"] = std::string(to_string(run.trace.status));
  out["iterations"] = run.trace.iterations();
  out["seconds"] = run.seconds;
  out["f"] = f;
  out["grad_norm"] = grad;
  out["step"] = step;
  out["trace_seconds"] = secs;
  out["backtracks"] = backtracks;
  return out;
}

std::string correspondence(const GeneratedProblem& p, const Vector& x, double tol) {
  const CorrespondenceReport c = verify_correspondence(p.f, hadamard_sqrt(check_dim(p, x)), tol);
  return json{{"simplex", c.simplex.to_json()},
              {"sphere", c.sphere.to_json()},
              {"agree", c.agree},
              {"flips_checked", c.flips_checked},
              {"flips_agree", c.flips_agree},
              {"detail", c.detail}}
      .dump();
}

std::string bench(const std::string& config) {
  const BenchConfig cfg = BenchConfig::from_json(parse(config));
  BenchResult r;
  {
    py::gil_scoped_release release;
    r = run_bench(cfg);
  }
  json trials = json::array();
  for (const TrialResult& t : r.trials)
    trials.push_back({{"solver", t.solver},
                      {"n", t.n},
                      {"trial", t.trial},
                      {"seed", t.seed},
                      {"iterations", t.iterations},
                      {"seconds", t.seconds},
                      {"final_f", t.final_f},
                      {"final_error", t.final_error},
                      {"status", t.status},
                      {"reached_target", t.reached_target}});
  json cells = json::array();
  const auto stat = [](const Stat& s) { return json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}}; };
  for (const CellSummary& c : r.cells)
    cells.push_back({{"solver", c.solver},
                     {"n", c.n},
                     {"trials", c.trials},
                     {"reached_target", c.reached},
                     {"iterations", stat(c.iterations)},
                     {"seconds", stat(c.seconds)},
                     {"final_error", stat(c.final_error)}});
  return json{{"f_star", r.f_star}, {"target", r.target}, {"errors", r.any_errors}, {"trials", trials},
              {"cells", cells}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_hadopt, m) {
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<MissingHessianError>(m, "MissingHessianError", PyExc_RuntimeError);

  m.def("hadamard_square", &hadamard_square, py::arg("z"));
  m.def("hadamard_sqrt", &hadamard_sqrt, py::arg("x"));
  m.def("transfer_lipschitz", &transfer_lipschitz, py::arg("L"), py::arg("M"));
  m.def(
      "project_simplex",
      [](const Vector& y, const std::string& algo) {
        return project_simplex(y, projection_algo_from_string(algo)).coords();
      },
      py::arg("y"), py::arg("algo") = "sort");
  m.def("project_l1_ball", &project_l1_ball, py::arg("y"), py::arg("radius") = 1.0);
  m.def("known_solvers", &known_solvers);

  py::class_<GeneratedProblem>(m, "Problem")
      .def_property_readonly("n", [](const GeneratedProblem& p) { return p.f.dim; })
      .def_property_readonly("kind", [](const GeneratedProblem& p) { return std::string(to_string(p.spec.kind)); })
      .def_readonly("A", &GeneratedProblem::A)
      .def_readonly("b", &GeneratedProblem::b)
      .def_readonly("x_true", &GeneratedProblem::x_true)
      .def_readonly("f_star", &GeneratedProblem::f_star)
      .def_readonly("L", &GeneratedProblem::L)
      .def("value", [](const GeneratedProblem& p, const Vector& x) { return p.f.value(check_dim(p, x)); })
      .def("gradient", [](const GeneratedProblem& p, const Vector& x) { return p.f.gradient(check_dim(p, x)); })
      .def("pullback_gradient",
           [](const GeneratedProblem& p, const Vector& z) { return pullback_gradient(p.f, check_dim(p, z)); })
      .def("pullback_hessian_vec", [](const GeneratedProblem& p, const Vector& z, const Vector& d) {
        return pullback_hessian_vec(p.f, check_dim(p, z), check_dim(p, d));
      });

  m.def("make_problem", &generate, py::arg("kind") = "least_squares", py::arg("n") = 100, py::arg("seed") = 0,
        py::arg("truth") = "interior", py::arg("convex") = true, py::arg("sparsity") = 3);
  m.def("least_squares", &from_data, py::arg("A"), py::arg("b"));
  m.def("_solve", &solve, py::arg("problem"), py::arg("solver"), py::arg("max_iters"), py::arg("target"),
        py::arg("seed"), py::arg("overrides"));
  m.def("_kkt_check", &correspondence, py::arg("problem"), py::arg("x"), py::arg("tol"));
  m.def("_run_bench", &bench, py::arg("config"));
}
