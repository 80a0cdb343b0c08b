#include "hadopt/bench.hpp"

#include "hadopt/baselines.hpp"
#include "hadopt/optimizers.hpp"
#include "hadopt/projection.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace hadopt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

TruthKind truth_from_string(const std::string& s) {
  if (s == "interior") return TruthKind::Interior;
  if (s == "boundary") return TruthKind::Boundary;
  throw ConfigError("unknown truth kind: " + s);
}

StepCurve curve_from_string(const std::string& s) {
  if (s == "geodesic") return StepCurve::Geodesic;
  if (s == "retraction") return StepCurve::Retraction;
  throw ConfigError("unknown step curve: " + s);
}

bool is_frank_wolfe(const std::string& name) {
  return name == "fw" || name == "fw-ls" || name == "pfw-ls";
}

Stat stat_of(const std::vector<double>& v) {
  Stat s;
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = std::clamp(sum / static_cast<double>(v.size()), s.min, s.max);
  return s;
}

json stat_json(const Stat& s) { return {{"mean", s.mean}, {"min", s.min}, {"max", s.max}}; }

std::string trace_csv(const RunTrace& trace) {
  std::ostringstream os;
  trace.write_csv(os);
  return os.str();
}

void write_text(const std::string& path, const std::string& text, bool gzip) {
  if (gzip) {
    gzFile gz = gzopen(path.c_str(), "wb");
    if (!gz) throw std::runtime_error("cannot open " + path);
    const int written = gzwrite(gz, text.data(), static_cast<unsigned>(text.size()));
    gzclose(gz);
    if (written != static_cast<int>(text.size())) throw std::runtime_error("gzip write failed: " + path);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << text;
}

double log_error(double f, double f_star) {
  const double e = f - f_star;
  return e > 0.0 ? std::log10(e) : -std::numeric_limits<double>::infinity();
}

}  // namespace

const std::vector<std::string>& known_solvers() {
  static const std::vector<std::string> names = {"hadrgd", "hadprgd", "hadrgd-aw", "hadrgd-bb",
                                                 "pgd-ls", "emda",    "fw",        "fw-ls",
                                                 "pfw-ls"};
  return names;
}

ProblemSpec problem_spec_from_json(const json& problem) {
  if (!problem.is_object()) throw ConfigError("'problem' must be an object");
  ProblemSpec spec;
  try {
    spec.kind = problem_kind_from_string(get_or<std::string>(problem, "kind", "least_squares"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  spec.n = get_or<Index>(problem, "n", spec.n);
  spec.seed = get_or<std::uint64_t>(problem, "seed", spec.seed);
  spec.truth = truth_from_string(get_or<std::string>(problem, "truth", "interior"));
  spec.convex = get_or<bool>(problem, "convex", true);
  spec.sparsity = get_or<Index>(problem, "sparsity", 3);
  return spec;
}

BenchConfig BenchConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  BenchConfig cfg;
  const json problem = j.value("problem", json::object());
  cfg.problem = problem_spec_from_json(problem);
  if (problem.contains("f_star")) cfg.f_star = get_or<double>(problem, "f_star", 0.0);

  if (!j.contains("solvers") || !j["solvers"].is_array())
    throw ConfigError("config needs a 'solvers' array");
  for (const json& s : j["solvers"]) {
    SolverSpec spec;
    if (s.is_string()) {
      spec.name = s.get<std::string>();
    } else if (s.is_object()) {
      spec.name = get_or<std::string>(s, "name", "");
      spec.overrides = s.value("overrides", json::object());
    } else {
      throw ConfigError("each solver must be a name or an object");
    }
    cfg.solvers.push_back(std::move(spec));
  }
  cfg.dimensions = get_or<std::vector<Index>>(j, "dimensions", {});
  cfg.trials = get_or<int>(j, "trials", 10);
  cfg.target = get_or<double>(j, "target", 1e-8);
  if (j.contains("max_iters")) {
    if (!j["max_iters"].is_object()) throw ConfigError("'max_iters' must map solver names to counts");
    for (const auto& [name, v] : j["max_iters"].items()) cfg.max_iters[name] = v.get<long>();
  }
  cfg.out_dir = get_or<std::string>(j, "out", "");
  cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
  cfg.jobs = get_or<int>(j, "jobs", 1);
  cfg.write_traces = get_or<bool>(j, "traces", true);
  cfg.gzip_traces = get_or<bool>(j, "gzip_traces", false);
  cfg.validate();
  return cfg;
}

void BenchConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (dimensions.empty()) throw ConfigError("dimensions must not be empty");
  if (!std::is_sorted(dimensions.begin(), dimensions.end()))
    throw ConfigError("dimensions must be sorted ascending");
  if (dimensions.front() < 2) throw ConfigError("dimensions must be at least 2");
  if (solvers.empty()) throw ConfigError("solvers must not be empty");
  for (const SolverSpec& s : solvers) {
    const auto& names = known_solvers();
    if (std::find(names.begin(), names.end(), s.name) == names.end())
      throw ConfigError("unknown solver: " + s.name);
    if (!s.overrides.is_object()) throw ConfigError("overrides for " + s.name + " must be an object");
  }
  for (const auto& [name, cap] : max_iters)
    if (cap < 1) throw ConfigError("max_iters for " + name + " must be at least 1");
  if (!(target >= 0.0)) throw ConfigError("target must be nonnegative");
  switch (problem.kind) {
    case ProblemKind::LeastSquares:
    case ProblemKind::StrictSaddle:
      break;
    case ProblemKind::RandomQuadratic:
      if (!f_star) throw ConfigError("random_quadratic has no known optimum; set problem.f_star");
      break;
    case ProblemKind::Lasso:
    case ProblemKind::WeightedLS:
      throw ConfigError(std::string("the benchmark runs simplex problems only, not ") +
                        std::string(to_string(problem.kind)));
  }
}

long BenchConfig::iteration_cap(const std::string& solver, Index n) const {
  if (auto it = max_iters.find(solver); it != max_iters.end()) return it->second;
  if (is_frank_wolfe(solver))
    return static_cast<long>(std::ceil(1000.0 * std::sqrt(static_cast<double>(n))));
  return 1000;
}

SolverRun run_solver(const std::string& name, const json& ov, const GeneratedProblem& problem,
                     long max_iters, std::optional<double> target_value, std::uint64_t seed) {
  const Objective& f = problem.f;
  const Index n = f.dim;
  const SimplexPoint x0 = SimplexPoint::uniform(n);
  const TruthKind truth = problem.spec.truth;
  const double L = problem.L;
  const double grad_tol = get_or<double>(ov, "grad_tol", 0.0);
  SolverRun out;

  const auto pullback_step = [&]() {
    if (ov.contains("step_size")) return get_or<double>(ov, "step_size", 1.0);
    const PullbackObjective g(f);
    if (!g.lipschitz_grad() || *g.lipschitz_grad() <= 0.0)
      throw ConfigError(name + " needs 'step_size' when L and M are unknown");
    return 1.0 / *g.lipschitz_grad();
  };

  Stopwatch clock;
  if (name == "hadrgd" || name == "hadprgd") {
    RgdConfig base;
    base.step_size = pullback_step();
    base.max_iters = max_iters;
    base.grad_tol = grad_tol;
    base.target_value = target_value;
    if (name == "hadrgd") {
      clock = Stopwatch();
      SolveResult r = had_rgd(f, x0, base);
      out.seconds = clock.seconds();
      out.x = r.x.coords();
      out.trace = std::move(r.trace);
    } else {
      PrgdConfig cfg = make_prgd_config(base, 1.0 / base.step_size, get_or<double>(ov, "rho", 1.0));
      cfg.perturb_threshold = get_or<double>(ov, "perturb_threshold", cfg.perturb_threshold);
      cfg.perturb_radius = get_or<double>(ov, "perturb_radius", cfg.perturb_radius);
      cfg.tangent_step = get_or<double>(ov, "tangent_step", cfg.tangent_step);
      cfg.escape_radius = get_or<double>(ov, "escape_radius", cfg.escape_radius);
      cfg.tangent_iters = get_or<long>(ov, "tangent_iters", cfg.tangent_iters);
      clock = Stopwatch();
      SolveResult r = had_prgd(f, x0, cfg, seed);
      out.seconds = clock.seconds();
      out.x = r.x.coords();
      out.trace = std::move(r.trace);
    }
  } else if (name == "hadrgd-aw") {
    AwConfig cfg = bench_aw_config(truth, n, L);
    cfg.alpha_def = get_or<double>(ov, "alpha_def", cfg.alpha_def);
    cfg.beta = get_or<double>(ov, "beta", cfg.beta);
    cfg.rho1 = get_or<double>(ov, "rho1", cfg.rho1);
    cfg.rho2 = get_or<double>(ov, "rho2", cfg.rho2);
    cfg.strict_wolfe = get_or<bool>(ov, "strict_wolfe", cfg.strict_wolfe);
    if (ov.contains("curve")) cfg.curve = curve_from_string(get_or<std::string>(ov, "curve", ""));
    cfg.max_iters = max_iters;
    cfg.grad_tol = grad_tol;
    cfg.target_value = target_value;
    clock = Stopwatch();
    SolveResult r = had_rgd_aw(f, x0, cfg);
    out.seconds = clock.seconds();
    out.x = r.x.coords();
    out.trace = std::move(r.trace);
  } else if (name == "hadrgd-bb") {
    BbConfig cfg = bench_bb_config(truth, n, L);
    cfg.alpha_def = get_or<double>(ov, "alpha_def", cfg.alpha_def);
    cfg.delta = get_or<double>(ov, "delta", cfg.delta);
    cfg.eta = get_or<double>(ov, "eta", cfg.eta);
    cfg.rho1 = get_or<double>(ov, "rho1", cfg.rho1);
    if (ov.contains("curve")) cfg.curve = curve_from_string(get_or<std::string>(ov, "curve", ""));
    cfg.max_iters = max_iters;
    cfg.grad_tol = grad_tol;
    cfg.target_value = target_value;
    clock = Stopwatch();
    SolveResult r = had_rgd_bb(f, x0, cfg);
    out.seconds = clock.seconds();
    out.x = r.x.coords();
    out.trace = std::move(r.trace);
  } else if (name == "pgd-ls") {
    PgdConfig cfg = bench_pgd_config(L);
    cfg.step = get_or<double>(ov, "step", cfg.step);
    cfg.beta = get_or<double>(ov, "beta", cfg.beta);
    cfg.rho1 = get_or<double>(ov, "rho1", cfg.rho1);
    if (ov.contains("projection")) {
      try {
        cfg.projection = projection_algo_from_string(get_or<std::string>(ov, "projection", ""));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    cfg.max_iters = max_iters;
    cfg.grad_tol = grad_tol;
    cfg.target_value = target_value;
    clock = Stopwatch();
    BaselineResult r = pgd_linesearch(f, x0, cfg);
    out.seconds = clock.seconds();
    out.x = r.x.coords();
    out.trace = std::move(r.trace);
  } else if (name == "emda") {
    EmdaConfig cfg;
    cfg.step = get_or<double>(ov, "step", 1.0 / L);
    cfg.max_iters = max_iters;
    cfg.target_value = target_value;
    clock = Stopwatch();
    BaselineResult r = emda(f, x0, cfg);
    out.seconds = clock.seconds();
    out.x = r.x.coords();
    out.trace = std::move(r.trace);
  } else if (is_frank_wolfe(name)) {
    FwConfig cfg;
    cfg.linesearch = name != "fw";
    cfg.pairwise = name == "pfw-ls";
    cfg.gap_tol = get_or<double>(ov, "gap_tol", 0.0);
    cfg.max_iters = max_iters;
    cfg.target_value = target_value;
    clock = Stopwatch();
    BaselineResult r = frank_wolfe(f, x0, cfg);
    out.seconds = clock.seconds();
    out.x = r.x.coords();
    out.trace = std::move(r.trace);
  } else {
    throw ConfigError("unknown solver: " + name);
  }
  return out;
}

BenchResult run_bench(const BenchConfig& cfg) {
  cfg.validate();
  struct Task {
    Index n;
    int trial;
  };
  std::vector<Task> tasks;
  for (Index n : cfg.dimensions)
    for (int t = 0; t < cfg.trials; ++t) tasks.push_back({n, t});

  const std::size_t per_task = cfg.solvers.size();
  std::vector<TrialResult> rows(tasks.size() * per_task);
  std::atomic<std::size_t> next{0};
  std::optional<double> f_star_seen;
  std::mutex mu;
  std::exception_ptr setup_error;

  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task task = tasks[i];
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(task.trial);
      ProblemSpec spec = cfg.problem;
      spec.n = task.n;
      spec.seed = seed;
      GeneratedProblem problem;
      try {
        problem = make_problem(spec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!setup_error) setup_error = std::current_exception();
        return;
      }
      const double f_star = cfg.f_star ? *cfg.f_star : problem.f_star.value_or(0.0);
      {
        std::lock_guard<std::mutex> lock(mu);
        f_star_seen = f_star;
      }
      for (std::size_t s = 0; s < per_task; ++s) {
        const SolverSpec& solver = cfg.solvers[s];
        TrialResult& row = rows[i * per_task + s];
        row.solver = solver.name;
        row.n = task.n;
        row.trial = task.trial;
        row.seed = seed;
        try {
          SolverRun run = run_solver(solver.name, solver.overrides, problem,
                                     cfg.iteration_cap(solver.name, task.n), f_star + cfg.target, seed);
          row.iterations = run.trace.iterations();
          row.seconds = run.seconds;
          row.final_f = run.trace.final_value();
          row.final_error = row.final_f - f_star;
          row.reached_target = row.final_error <= cfg.target;
          row.status = std::string(to_string(run.trace.status));
          row.trace = std::move(run.trace);
        } catch (const ConfigError&) {
          throw;
        } catch (const std::exception& e) {
          row.status = std::string("Error: ") + e.what();
          row.final_f = std::numeric_limits<double>::quiet_NaN();
          row.final_error = std::numeric_limits<double>::quiet_NaN();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  std::exception_ptr worker_error;
  const int jobs = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&]() {
      try {
        worker();
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!worker_error) worker_error = std::current_exception();
        next = tasks.size();
      }
    });
  for (auto& t : pool) t.join();
  if (worker_error) std::rethrow_exception(worker_error);
  if (setup_error) std::rethrow_exception(setup_error);

  BenchResult result;
  result.target = cfg.target;
  result.f_star = f_star_seen.value_or(0.0);
  result.trials = std::move(rows);
  for (const TrialResult& r : result.trials)
    if (r.status.rfind("Error", 0) == 0) result.any_errors = true;

  for (const SolverSpec& solver : cfg.solvers) {
    for (Index n : cfg.dimensions) {
      std::vector<double> its, secs, errs;
      CellSummary cell;
      cell.solver = solver.name;
      cell.n = n;
      for (const TrialResult& r : result.trials) {
        if (r.solver != solver.name || r.n != n) continue;
        ++cell.trials;
        if (r.reached_target) ++cell.reached;
        if (std::isnan(r.final_error)) continue;
        its.push_back(static_cast<double>(r.iterations));
        secs.push_back(r.seconds);
        errs.push_back(r.final_error);
      }
      cell.iterations = stat_of(its);
      cell.seconds = stat_of(secs);
      cell.final_error = stat_of(errs);
      result.cells.push_back(cell);
    }
  }

  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    write_results_csv(result, (fs::path(cfg.out_dir) / "results.csv").string());
    write_summary_json(result, (fs::path(cfg.out_dir) / "summary.json").string());
    if (cfg.write_traces) {
      const fs::path dir = fs::path(cfg.out_dir) / "traces";
      fs::create_directories(dir);
      for (const TrialResult& r : result.trials) {
        if (r.trace.empty()) continue;
        std::string file = r.solver + "_n" + std::to_string(r.n) + "_t" + std::to_string(r.trial) + ".csv";
        if (cfg.gzip_traces) file += ".gz";
        write_text((dir / file).string(), trace_csv(r.trace), cfg.gzip_traces);
      }
    }
  }
  return result;
}

void write_results_csv(const BenchResult& result, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "solver,n,trial,seed,iterations,seconds,final_f,final_error,status,reached_target\n";
  os << std::setprecision(17);
  for (const TrialResult& r : result.trials) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    os << r.solver << ',' << r.n << ',' << r.trial << ',' << r.seed << ',' << r.iterations << ','
       << r.seconds << ',' << r.final_f << ',' << r.final_error << ',' << status << ','
       << (r.reached_target ? 1 : 0) << '\n';
  }
}

void write_summary_json(const BenchResult& result, const std::string& path) {
  json cells = json::array();
  for (const CellSummary& c : result.cells) {
    cells.push_back({{"solver", c.solver},
                     {"n", c.n},
                     {"trials", c.trials},
                     {"reached_target", c.reached},
                     {"iterations", stat_json(c.iterations)},
                     {"seconds", stat_json(c.seconds)},
                     {"final_error", stat_json(c.final_error)}});
  }
  const json j = {{"f_star", result.f_star},
                  {"target", result.target},
                  {"errors", result.any_errors},
                  {"cells", cells}};
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << j.dump(2) << '\n';
}

PlotFigure plot_figure_from_string(const std::string& name) {
  if (name == "iter_vs_n") return PlotFigure::IterVsN;
  if (name == "time_vs_n") return PlotFigure::TimeVsN;
  if (name == "convergence") return PlotFigure::ConvergenceCurve;
  throw std::invalid_argument("unknown figure: " + name);
}

void emit_plot_data(const BenchResult& result, PlotFigure figure, const std::string& path) {
  if (result.trials.empty() || result.cells.empty())
    throw std::invalid_argument("emit_plot_data: empty benchmark result");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << std::setprecision(17);
  if (figure != PlotFigure::ConvergenceCurve) {
    os << "solver,n,statistic,value\n";
    for (const CellSummary& c : result.cells) {
      const Stat& s = figure == PlotFigure::IterVsN ? c.iterations : c.seconds;
      os << c.solver << ',' << c.n << ",mean," << s.mean << '\n';
      os << c.solver << ',' << c.n << ",min," << s.min << '\n';
      os << c.solver << ',' << c.n << ",max," << s.max << '\n';
    }
    return;
  }
  os << "solver,n,iteration,statistic,value\n";
  for (const CellSummary& c : result.cells) {
    std::map<long, std::vector<double>> by_iter;
    for (const TrialResult& r : result.trials) {
      if (r.solver != c.solver || r.n != c.n) continue;
      for (const TraceRecord& rec : r.trace.records) {
        const double e = log_error(rec.value, result.f_star);
        if (std::isfinite(e)) by_iter[rec.iteration].push_back(e);
      }
    }
    for (const auto& [k, values] : by_iter) {
      const Stat s = stat_of(values);
      os << c.solver << ',' << c.n << ',' << k << ",mean," << s.mean << '\n';
      os << c.solver << ',' << c.n << ',' << k << ",min," << s.min << '\n';
      os << c.solver << ',' << c.n << ',' << k << ",max," << s.max << '\n';
    }
  }
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("fit_line: need at least two points");
  LinearFit fit;
  fit.points = x.size();
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x has no spread");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

LinearFit log_linear_fit(const RunTrace& trace, double f_star, double skip_fraction) {
  if (trace.empty()) throw std::invalid_argument("log_linear_fit: empty trace");
  const auto first = static_cast<long>(std::floor(skip_fraction * static_cast<double>(trace.iterations())));
  std::vector<double> ks, ys;
  for (const TraceRecord& r : trace.records) {
    if (r.iteration < first) continue;
    const double e = log_error(r.value, f_star);
    if (!std::isfinite(e)) continue;
    ks.push_back(static_cast<double>(r.iteration));
    ys.push_back(e);
  }
  return fit_line(ks, ys);
}

std::vector<ProjectionTiming> project_bench(const std::vector<Index>& dims, int repeats,
                                            std::uint64_t seed) {
  if (repeats < 1) throw std::invalid_argument("project_bench: repeats must be at least 1");
  const ProjectionAlgo algos[] = {ProjectionAlgo::SortProject, ProjectionAlgo::PivotProject,
                                  ProjectionAlgo::DuchiProject, ProjectionAlgo::CondatProject};
  std::vector<ProjectionTiming> rows;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (Index n : dims) {
    std::vector<ProjectionTiming> cell;
    for (ProjectionAlgo a : algos) cell.push_back({n, std::string(to_string(a)), 0.0, 0.0});
    for (int rep = 0; rep < repeats; ++rep) {
      Vector y(n);
      for (Index i = 0; i < n; ++i) y(i) = normal(rng);
      Vector reference;
      for (std::size_t k = 0; k < cell.size(); ++k) {
        const Stopwatch clock;
        const SimplexPoint x = project_simplex(y, algos[k]);
        cell[k].seconds += clock.seconds() / repeats;
        if (k == 0) reference = x.coords();
        cell[k].max_dev = std::max(cell[k].max_dev, (x.coords() - reference).cwiseAbs().maxCoeff());
      }
    }
    rows.insert(rows.end(), cell.begin(), cell.end());
  }
  return rows;
}

void write_projection_csv(const std::vector<ProjectionTiming>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "n,algorithm,seconds,max_deviation\n" << std::setprecision(17);
  for (const ProjectionTiming& r : rows)
    os << r.n << ',' << r.algo << ',' << r.seconds << ',' << r.max_dev << '\n';
}

}  // namespace hadopt
