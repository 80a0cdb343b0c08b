#include "hadopt/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hadopt {

bool SimplexPoint::is_feasible(const Vector& coords) {
  if (coords.size() == 0 || !coords.allFinite()) return false;
  if (coords.minCoeff() < -kSimplexNegTol) return false;
  return std::abs(coords.sum() - 1.0) <= kSimplexSumTol;
}

SimplexPoint::SimplexPoint(Vector coords) : coords_(std::move(coords)) {
  if (!is_feasible(coords_)) {
    throw std::invalid_argument("SimplexPoint: coordinates are not in the probability simplex");
  }
}

SimplexPoint SimplexPoint::uniform(Index n) {
  if (n < 1) throw std::invalid_argument("SimplexPoint::uniform: n must be positive");
  return SimplexPoint(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

SimplexPoint SimplexPoint::vertex(Index n, Index i) {
  if (i < 0 || i >= n) throw std::out_of_range("SimplexPoint::vertex: index out of range");
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return SimplexPoint(std::move(e));
}

}  // namespace hadopt
