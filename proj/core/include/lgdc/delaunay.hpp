#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lgdc {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Edges (i < j, sorted) of the Delaunay triangulation of `points`, built by
/// incremental Bowyer-Watson insertion inside a super-triangle. Convex-hull
/// edges are always included. Returns nullopt when a degenerate configuration
/// (collinear triple among a triangle, or a co-circular in-circle test) is
/// met, so the caller can resample.
std::optional<std::vector<std::pair<int, int>>> delaunay_edges(std::span<const Point> points);

}  // namespace lgdc
