#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hadopt {

enum class RunStatus { Converged, MaxIters, LineSearchFailed };

std::string_view to_string(RunStatus status);

struct TraceRecord {
  long iteration = 0;
  double value = 0.0;
  double grad_norm = 0.0;  // Riemannian gradient norm, or the solver's stationarity measure
  double step = 0.0;       // step accepted to produce this iterate (0 for the start point)
  double seconds = 0.0;    // cumulative wall clock since the solve started
  int backtracks = 0;
  bool line_search_failed = false;
};

/// Per-iteration record of a solver run. Iteration indices are strictly
/// increasing; wall-clock time is nondecreasing.
struct RunTrace {
  std::vector<TraceRecord> records;
  RunStatus status = RunStatus::MaxIters;

  bool empty() const { return records.empty(); }
  const TraceRecord& back() const { return records.back(); }
  long iterations() const { return records.empty() ? 0 : records.back().iteration; }
  double final_value() const { return records.back().value; }

  /// CSV with header iteration,f,grad_norm,step,seconds,backtracks.
  void write_csv(std::ostream& os) const;
};

/// Wall clock measured from construction.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace hadopt
