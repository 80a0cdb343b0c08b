#pragma once

#include "hadopt/problems.hpp"
#include "hadopt/trace.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hadopt {

/// Raised for malformed or inconsistent benchmark configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver names accepted by the harness:
///   hadrgd, hadprgd, hadrgd-aw, hadrgd-bb, pgd-ls, emda, fw, fw-ls, pfw-ls
const std::vector<std::string>& known_solvers();

/// Parse {"kind", "n", "seed", "truth", "convex", "sparsity"}; absent fields
/// keep their defaults.
ProblemSpec problem_spec_from_json(const nlohmann::json& j);

struct SolverSpec {
  std::string name;
  nlohmann::json overrides = nlohmann::json::object();
};

struct BenchConfig {
  ProblemSpec problem;  // n is taken from `dimensions`
  std::optional<double> f_star;
  std::vector<SolverSpec> solvers;
  std::vector<Index> dimensions;
  int trials = 10;
  double target = 1e-8;
  std::map<std::string, long> max_iters;  // per solver; default 1000, 1000 sqrt(n) for FW
  std::string out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool write_traces = true;
  bool gzip_traces = false;

  static BenchConfig from_json(const nlohmann::json& j);
  void validate() const;
  long iteration_cap(const std::string& solver, Index n) const;
};

/// Outcome of one solver run on one generated problem.
struct SolverRun {
  Vector x;
  RunTrace trace;
  double seconds = 0.0;  // around the solver call only
};

/// Run a named solver from the uniform start. `overrides` replaces individual
/// hyperparameters of the benchmark defaults (alpha_def, beta, rho1, rho2,
/// delta, eta, step, step_size, grad_tol, strict_wolfe, curve, projection).
SolverRun run_solver(const std::string& name, const nlohmann::json& overrides,
                     const GeneratedProblem& problem, long max_iters,
                     std::optional<double> target_value, std::uint64_t seed);

struct TrialResult {
  std::string solver;
  Index n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  long iterations = 0;
  double seconds = 0.0;
  double final_f = 0.0;
  double final_error = 0.0;  // f - f_star
  std::string status;
  bool reached_target = false;
  RunTrace trace;
};

struct Stat {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct CellSummary {
  std::string solver;
  Index n = 0;
  int trials = 0;
  int reached = 0;
  Stat iterations;
  Stat seconds;
  Stat final_error;
};

struct BenchResult {
  double f_star = 0.0;
  double target = 0.0;
  std::vector<TrialResult> trials;  // ordered by (n, trial, solver)
  std::vector<CellSummary> cells;   // ordered by (solver, n)
  bool any_errors = false;
};

/// Run the grid. Seeds are global seed + trial index. Solver exceptions are
/// recorded in the status column and never abort the grid. When out_dir is
/// set, writes results.csv, summary.json and traces/.
BenchResult run_bench(const BenchConfig& cfg);

void write_results_csv(const BenchResult& result, const std::string& path);
void write_summary_json(const BenchResult& result, const std::string& path);

enum class PlotFigure { IterVsN, TimeVsN, ConvergenceCurve };

PlotFigure plot_figure_from_string(const std::string& name);

/// Long-format CSV. IterVsN / TimeVsN: solver,n,statistic,value with
/// statistic in {mean,min,max}. ConvergenceCurve adds an iteration column and
/// aggregates log10(f_k - f_star) over trials.
void emit_plot_data(const BenchResult& result, PlotFigure figure, const std::string& path);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Fit log10(f_k - f_star) against k over the last (1 - skip_fraction) of the
/// trace. Records with f_k <= f_star are dropped.
LinearFit log_linear_fit(const RunTrace& trace, double f_star, double skip_fraction);

struct ProjectionTiming {
  Index n = 0;
  std::string algo;
  double seconds = 0.0;    // mean over repeats
  double max_dev = 0.0;    // max |x_algo - x_sort|_inf over repeats
};

/// Gaussian inputs at each n, all four projection algorithms.
std::vector<ProjectionTiming> project_bench(const std::vector<Index>& dims, int repeats,
                                            std::uint64_t seed);
void write_projection_csv(const std::vector<ProjectionTiming>& rows, const std::string& path);

}  // namespace hadopt
