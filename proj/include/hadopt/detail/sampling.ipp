#pragma once

#include <cmath>
#include <random>

namespace hadopt {

template <class Rng>
Vector sample_tangent_ball(const Vector& z, double r, Rng& rng) {
  const Index n = z.size();
  if (!(r > 0.0) || n < 2) return Vector::Zero(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector w(n);
  for (;;) {
    for (Index i = 0; i < n; ++i) w(i) = normal(rng);
    w -= w.dot(z) * z;
    const double wn = w.norm();
    if (wn > 1e-12) {
      w /= wn;
      break;
    }
  }
  const double radius = r * std::pow(unif(rng), 1.0 / static_cast<double>(n - 1));
  return radius * w;
}

}  // namespace hadopt
