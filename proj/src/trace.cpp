#include "hadopt/trace.hpp"

#include <iomanip>
#include <ostream>

namespace hadopt {

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxIters: return "MaxIters";
    case RunStatus::LineSearchFailed: return "LineSearchFailed";
  }
  return "Unknown";
}

void RunTrace::write_csv(std::ostream& os) const {
  os << "iteration,f,grad_norm,step,seconds,backtracks\n";
  os << std::setprecision(17);
  for (const auto& r : records) {
    os << r.iteration << ',' << r.value << ',' << r.grad_norm << ',' << r.step << ','
       << r.seconds << ',' << r.backtracks << '\n';
  }
}

}  // namespace hadopt
