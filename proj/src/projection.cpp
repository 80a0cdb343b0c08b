#include "hadopt/projection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hadopt {

namespace {

// Pivot selection uses a fixed-seed generator so projections are deterministic.
constexpr std::uint64_t kPivotSeed = 0x9e3779b97f4a7c15ULL;

double sort_threshold(const Vector& y) {
  std::vector<double> u(y.data(), y.data() + y.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  return tau;
}

// Randomized pivot search over the candidate set, growing the support from
// the top. The pivot itself joins the upper set in both branches.
double pivot_threshold(const Vector& v) {
  std::mt19937_64 rng(kPivotSeed);
  std::vector<Index> U(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) U[static_cast<std::size_t>(i)] = i;
  std::vector<Index> G, L;
  double s = 0.0;
  Index rho = 0;
  while (!U.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, U.size() - 1);
    const Index k = U[pick(rng)];
    const double vk = v(k);
    G.clear();
    L.clear();
    double ds = vk;
    for (Index j : U) {
      if (v(j) >= vk) {
        if (j != k) {
          ds += v(j);
          G.push_back(j);
        }
      } else {
        L.push_back(j);
      }
    }
    const Index drho = static_cast<Index>(G.size()) + 1;
    if (s + ds - static_cast<double>(rho + drho) * vk < 1.0) {
      s += ds;
      rho += drho;
      U.swap(L);
    } else {
      U.swap(G);
    }
  }
  return (s - 1.0) / static_cast<double>(rho);
}

// Randomized median-style search; on rejection the pivot is dropped from G.
double duchi_threshold(const Vector& v) {
  std::mt19937_64 rng(kPivotSeed);
  std::vector<Index> U(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) U[static_cast<std::size_t>(i)] = i;
  std::vector<Index> G, L;
  double s = 0.0;
  Index rho = 0;
  while (!U.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, U.size() - 1);
    const Index k = U[pick(rng)];
    const double vk = v(k);
    G.clear();
    L.clear();
    double ds = 0.0;
    for (Index j : U) {
      if (v(j) >= vk) {
        ds += v(j);
        G.push_back(j);
      } else {
        L.push_back(j);
      }
    }
    const Index drho = static_cast<Index>(G.size());
    if (s + ds - static_cast<double>(rho + drho) * vk < 1.0) {
      s += ds;
      rho += drho;
      U.swap(L);
    } else {
      G.erase(std::find(G.begin(), G.end(), k));
      U.swap(G);
    }
  }
  return (s - 1.0) / static_cast<double>(rho);
}

double condat_threshold(const Vector& y) {
  const Index N = y.size();
  std::vector<double> v;
  std::vector<double> vt;
  v.reserve(static_cast<std::size_t>(N));
  v.push_back(y(0));
  double rho = y(0) - 1.0;
  for (Index n = 1; n < N; ++n) {
    const double yn = y(n);
    if (yn > rho) {
      rho += (yn - rho) / static_cast<double>(v.size() + 1);
      if (rho > yn - 1.0) {
        v.push_back(yn);
      } else {
        vt.insert(vt.end(), v.begin(), v.end());
        v.assign(1, yn);
        rho = yn - 1.0;
      }
    }
  }
  for (double yv : vt) {
    if (yv > rho) {
      v.push_back(yv);
      rho += (yv - rho) / static_cast<double>(v.size());
    }
  }
  std::size_t before = 0;
  do {
    before = v.size();
    std::vector<double> kept;
    kept.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double yv = v[i];
      if (yv <= rho) {
        const std::size_t remaining = v.size() - i - 1 + kept.size();
        if (remaining > 0) rho += (rho - yv) / static_cast<double>(remaining);
      } else {
        kept.push_back(yv);
      }
    }
    v.swap(kept);
  } while (v.size() != before);
  return rho;
}

}  // namespace

std::string_view to_string(ProjectionAlgo algo) {
  switch (algo) {
    case ProjectionAlgo::SortProject: return "sort";
    case ProjectionAlgo::PivotProject: return "pivot";
    case ProjectionAlgo::DuchiProject: return "duchi";
    case ProjectionAlgo::CondatProject: return "condat";
  }
  return "unknown";
}

ProjectionAlgo projection_algo_from_string(std::string_view name) {
  if (name == "sort") return ProjectionAlgo::SortProject;
  if (name == "pivot") return ProjectionAlgo::PivotProject;
  if (name == "duchi") return ProjectionAlgo::DuchiProject;
  if (name == "condat") return ProjectionAlgo::CondatProject;
  throw std::invalid_argument("unknown projection algorithm: " + std::string(name));
}

double simplex_threshold(const Vector& y, ProjectionAlgo algo) {
  if (y.size() == 0) throw std::invalid_argument("cannot project an empty vector");
  switch (algo) {
    case ProjectionAlgo::SortProject: return sort_threshold(y);
    case ProjectionAlgo::PivotProject: return pivot_threshold(y);
    case ProjectionAlgo::DuchiProject: return duchi_threshold(y);
    case ProjectionAlgo::CondatProject: return condat_threshold(y);
  }
  throw std::invalid_argument("unknown projection algorithm");
}

SimplexPoint project_simplex(const Vector& y, ProjectionAlgo algo) {
  const double tau = simplex_threshold(y, algo);
  Vector x = (y.array() - tau).max(0.0).matrix();
  // Rounding in tau can leave the sum a few ulps away from 1.
  const double sum = x.sum();
  if (std::abs(sum - 1.0) > 1e-13) x /= sum;
  return SimplexPoint(std::move(x));
}

Vector project_l1_ball(const Vector& y, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("l1 ball radius must be positive");
  if (y.lpNorm<1>() <= radius) return y;
  const Vector mag = y.cwiseAbs() / radius;
  const double tau = sort_threshold(mag);
  const Vector shrunk = (mag.array() - tau).max(0.0).matrix() * radius;
  return y.cwiseSign().cwiseProduct(shrunk);
}

}  // namespace hadopt
