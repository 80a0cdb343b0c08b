// hadopt: benchmark and analysis harness.
//
//   hadopt bench         --config grid.json [--out DIR] [--seed S] [--jobs J]
//   hadopt project-bench [--config proj.json] [--out DIR] [--seed S]
//   hadopt kkt-check     --config point.json [--out DIR]
//   hadopt trace         --config run.json [--out DIR] [--seed S]
//
// Exit codes: 0 success, 1 configuration error, 2 solver failure.

#include "hadopt/bench.hpp"
#include "hadopt/kkt.hpp"
#include "hadopt/simplex.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hadopt;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

json load_config(const std::string& path, bool required) {
  if (path.empty()) {
    if (required) throw ConfigError("--config is required");
    return json::object();
  }
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
}

fs::path out_dir(const Flags& flags, const json& cfg, const char* fallback) {
  std::string dir = flags.out.empty() ? cfg.value("out", std::string(fallback)) : flags.out;
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

int cmd_bench(const Flags& flags) {
  json raw = load_config(flags.config, true);
  if (!flags.out.empty()) raw["out"] = flags.out;
  if (flags.seed) raw["seed"] = *flags.seed;
  if (flags.jobs) raw["jobs"] = *flags.jobs;
  if (!raw.contains("out")) raw["out"] = "bench_out";
  const BenchConfig cfg = BenchConfig::from_json(raw);
  const BenchResult result = run_bench(cfg);
  const fs::path dir = cfg.out_dir;
  emit_plot_data(result, PlotFigure::IterVsN, (dir / "iter_vs_n.csv").string());
  emit_plot_data(result, PlotFigure::TimeVsN, (dir / "time_vs_n.csv").string());
  emit_plot_data(result, PlotFigure::ConvergenceCurve, (dir / "convergence.csv").string());

  std::cout << std::left << std::setw(12) << "solver" << std::setw(8) << "n" << std::setw(10)
            << "reached" << std::setw(14) << "iters(mean)" << std::setw(14) << "seconds"
            << "final_error\n";
  for (const CellSummary& c : result.cells) {
    std::cout << std::setw(12) << c.solver << std::setw(8) << c.n << std::setw(10)
              << (std::to_string(c.reached) + "/" + std::to_string(c.trials)) << std::setw(14)
              << c.iterations.mean << std::setw(14) << c.seconds.mean << c.final_error.mean << '\n';
  }
  std::cout << "results written to " << dir.string() << '\n';
  return result.any_errors ? kExitSolver : 0;
}

int cmd_project_bench(const Flags& flags) {
  const json raw = load_config(flags.config, false);
  std::vector<Index> dims;
  int repeats = 3;
  try {
    dims = raw.value("dimensions", std::vector<Index>{1000, 10000, 100000});
    repeats = raw.value("repeats", 3);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  if (dims.empty() || repeats < 1) throw ConfigError("need nonempty dimensions and repeats >= 1");
  const std::uint64_t seed = flags.seed.value_or(raw.value("seed", std::uint64_t{0}));
  const auto rows = project_bench(dims, repeats, seed);
  const fs::path dir = out_dir(flags, raw, "project_bench_out");
  write_projection_csv(rows, (dir / "projection.csv").string());
  double worst = 0.0;
  for (const ProjectionTiming& r : rows) {
    worst = std::max(worst, r.max_dev);
    std::cout << std::left << std::setw(10) << r.n << std::setw(8) << r.algo << std::setw(14)
              << r.seconds << r.max_dev << '\n';
  }
  std::cout << "max deviation from sort: " << worst << '\n';
  return 0;
}

Vector vector_field(const json& raw, const char* key) {
  const auto v = raw.at(key).get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

int cmd_kkt_check(const Flags& flags) {
  const json raw = load_config(flags.config, true);
  ProblemSpec spec = problem_spec_from_json(raw.value("problem", json::object()));
  if (flags.seed) spec.seed = *flags.seed;
  const GeneratedProblem problem = make_problem(spec);
  const double tol = raw.value("tol", 1e-6);
  json report;
  Vector z;
  if (raw.contains("point")) {
    const Vector x = vector_field(raw, "point");
    if (x.size() != spec.n) throw ConfigError("point has the wrong dimension");
    z = hadamard_sqrt(x);
  } else {
    const std::string solver = raw.value("solver", std::string("hadrgd-bb"));
    const json overrides = raw.value("overrides", json::object());
    json ov = overrides;
    if (!ov.contains("grad_tol")) ov["grad_tol"] = 1e-9;
    const SolverRun run = run_solver(solver, ov, problem, raw.value("max_iters", 10000L), std::nullopt,
                                     spec.seed);
    z = hadamard_sqrt(run.x);
    report["solver"] = solver;
    report["solver_status"] = std::string(to_string(run.trace.status));
  }
  const CorrespondenceReport c = verify_correspondence(problem.f, z, tol);
  report["simplex"] = c.simplex.to_json();
  report["sphere"] = c.sphere.to_json();
  report["correspondence"] = {{"agree", c.agree},
                              {"flips_checked", c.flips_checked},
                              {"flips_agree", c.flips_agree},
                              {"detail", c.detail}};
  if (flags.out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    const fs::path dir = out_dir(flags, raw, "");
    write_json(dir / "kkt_report.json", report);
    std::cout << "simplex: " << to_string(c.simplex.verdict) << ", sphere: " << to_string(c.sphere.verdict)
              << ", agree: " << (c.ok() ? "yes" : "no") << '\n';
  }
  return 0;
}

int cmd_trace(const Flags& flags) {
  const json raw = load_config(flags.config, true);
  ProblemSpec spec = problem_spec_from_json(raw.value("problem", json::object()));
  if (flags.seed) spec.seed = *flags.seed;
  spec.validate();
  const GeneratedProblem problem = make_problem(spec);
  const std::string solver = raw.value("solver", std::string("hadrgd-bb"));
  const auto& names = known_solvers();
  if (std::find(names.begin(), names.end(), solver) == names.end())
    throw ConfigError("unknown solver: " + solver);
  std::optional<double> target;
  if (raw.contains("target")) target = problem.f_star.value_or(0.0) + raw["target"].get<double>();
  const SolverRun run = run_solver(solver, raw.value("overrides", json::object()), problem,
                                   raw.value("max_iters", 1000L), target, spec.seed);
  const fs::path dir = out_dir(flags, raw, "trace_out");
  std::ofstream os(dir / "trace.csv");
  run.trace.write_csv(os);
  std::cout << solver << ": " << to_string(run.trace.status) << " after " << run.trace.iterations()
            << " iterations, f = " << run.trace.final_value() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplex-constrained optimization through the Hadamard parametrization"};
  app.require_subcommand(1);
  Flags flags;
  const auto add_common = [&flags](CLI::App* sub, bool with_jobs) {
    sub->add_option("--config", flags.config, "JSON configuration file");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "global seed");
    if (with_jobs) sub->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber);
  };
  CLI::App* bench = app.add_subcommand("bench", "run a solver x dimension x trial grid");
  add_common(bench, true);
  CLI::App* proj = app.add_subcommand("project-bench", "time and cross-check the projection algorithms");
  add_common(proj, false);
  CLI::App* kkt = app.add_subcommand("kkt-check", "certify a point on both sides of the parametrization");
  add_common(kkt, false);
  CLI::App* trace = app.add_subcommand("trace", "run one solver and write its trace");
  add_common(trace, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (bench->parsed()) return cmd_bench(flags);
    if (proj->parsed()) return cmd_project_bench(flags);
    if (kkt->parsed()) return cmd_kkt_check(flags);
    if (trace->parsed()) return cmd_trace(flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
