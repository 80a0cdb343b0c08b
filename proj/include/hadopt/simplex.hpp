#pragma once

#include "hadopt/linalg.hpp"

namespace hadopt {

inline constexpr double kSimplexSumTol = 1e-10;
inline constexpr double kSimplexNegTol = 1e-12;

/// A point of the probability simplex: entries >= -1e-12 and
/// |sum - 1| <= 1e-10. Construction throws std::invalid_argument otherwise.
class SimplexPoint {
 public:
  explicit SimplexPoint(Vector coords);

  static SimplexPoint uniform(Index n);
  static SimplexPoint vertex(Index n, Index i);
  static bool is_feasible(const Vector& coords);

  const Vector& coords() const { return coords_; }
  Index dim() const { return coords_.size(); }
  double operator[](Index i) const { return coords_(i); }

 private:
  Vector coords_;
};

}  // namespace hadopt
