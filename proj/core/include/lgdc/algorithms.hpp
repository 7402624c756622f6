#pragma once

#include "lgdc/graph.hpp"

#include <vector>

namespace lgdc {

/// Node partition into connected components, each sorted ascending; components
/// are ordered by their smallest node.
std::vector<std::vector<int>> connected_components(const Graph& g);
int component_count(const Graph& g);
bool is_connected(const Graph& g);

struct PathStats {
  int diameter = 0;
  double aspl = 0.0;
  /// Set when the input was disconnected and the statistics describe only its
  /// largest component.
  bool largest_component_only = false;
};

/// Hop-count diameter and mean shortest path length over unordered pairs.
/// Throws for the empty graph.
PathStats shortest_path_stats(const Graph& g);

/// Global minimum edge cut on the unweighted topology (unit capacities).
/// Returns 0 for disconnected graphs; throws for n < 2.
int edge_connectivity(const Graph& g);

/// Connected and m == n - 1.
bool is_tree(const Graph& g);

/// Exact planarity decision using the left-right criterion over a DFS
/// orientation.
bool is_planar(const Graph& g);

}  // namespace lgdc
