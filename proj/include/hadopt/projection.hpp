#pragma once

#include "hadopt/linalg.hpp"
#include "hadopt/simplex.hpp"

#include <string_view>

namespace hadopt {

enum class ProjectionAlgo { SortProject, PivotProject, DuchiProject, CondatProject };

std::string_view to_string(ProjectionAlgo algo);
ProjectionAlgo projection_algo_from_string(std::string_view name);

/// Euclidean projection onto the probability simplex. All four algorithms
/// compute the same point; they differ only in how the threshold is found.
SimplexPoint project_simplex(const Vector& y, ProjectionAlgo algo = ProjectionAlgo::SortProject);

/// Threshold tau with P(y) = max(y - tau, 0).
double simplex_threshold(const Vector& y, ProjectionAlgo algo = ProjectionAlgo::SortProject);

/// Euclidean projection onto the l1 ball of the given radius.
Vector project_l1_ball(const Vector& y, double radius = 1.0);

}  // namespace hadopt
