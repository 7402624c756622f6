#include "lgdc/algorithms.hpp"

#include "lgdc/error.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace lgdc {

namespace {

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int source) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<int> frontier;
  dist[static_cast<std::size_t>(source)] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int w : adj[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

// Edmonds-Karp on the symmetric unit-capacity network; residual capacities are
// kept in a dense matrix since n is small.
int unit_max_flow(const Graph& g, int source, int sink) {
  const int n = g.num_nodes();
  std::vector<int> cap(static_cast<std::size_t>(n * n), 0);
  for (const auto& e : g.edges()) {
    cap[static_cast<std::size_t>(e.u * n + e.v)] = 1;
    cap[static_cast<std::size_t>(e.v * n + e.u)] = 1;
  }
  const auto adj = g.adjacency();
  int flow = 0;
  std::vector<int> parent(static_cast<std::size_t>(n));
  while (true) {
    std::fill(parent.begin(), parent.end(), -1);
    parent[static_cast<std::size_t>(source)] = source;
    std::queue<int> frontier;
    frontier.push(source);
    while (!frontier.empty() && parent[static_cast<std::size_t>(sink)] < 0) {
      const int u = frontier.front();
      frontier.pop();
      for (int w : adj[static_cast<std::size_t>(u)]) {
        if (parent[static_cast<std::size_t>(w)] < 0 && cap[static_cast<std::size_t>(u * n + w)] > 0) {
          parent[static_cast<std::size_t>(w)] = u;
          frontier.push(w);
        }
      }
    }
    if (parent[static_cast<std::size_t>(sink)] < 0) return flow;
    for (int w = sink; w != source; w = parent[static_cast<std::size_t>(w)]) {
      const int u = parent[static_cast<std::size_t>(w)];
      --cap[static_cast<std::size_t>(u * n + w)];
      ++cap[static_cast<std::size_t>(w * n + u)];
    }
    ++flow;
  }
}

}  // namespace

std::vector<std::vector<int>> connected_components(const Graph& g) {
  const int n = g.num_nodes();
  const auto adj = g.adjacency();
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    std::vector<int> comp{s};
    seen[static_cast<std::size_t>(s)] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (int w : adj[static_cast<std::size_t>(comp[head])]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

int component_count(const Graph& g) { return static_cast<int>(connected_components(g).size()); }

bool is_connected(const Graph& g) { return component_count(g) == 1; }

PathStats shortest_path_stats(const Graph& g) {
  if (g.num_nodes() == 0) throw Error("shortest_path_stats: empty graph");
  PathStats stats;
  auto comps = connected_components(g);
  const std::vector<int>* nodes = &comps.front();
  if (comps.size() > 1) {
    stats.largest_component_only = true;
    nodes = &*std::max_element(comps.begin(), comps.end(),
                               [](const auto& a, const auto& b) { return a.size() < b.size(); });
  }
  const Graph sub = g.induced(*nodes);
  const auto adj = sub.adjacency();
  const int k = sub.num_nodes();
  long long total = 0;
  for (int s = 0; s < k; ++s) {
    const auto dist = bfs_distances(adj, s);
    for (int t = s + 1; t < k; ++t) {
      total += dist[static_cast<std::size_t>(t)];
      stats.diameter = std::max(stats.diameter, dist[static_cast<std::size_t>(t)]);
    }
  }
  const long long pairs = static_cast<long long>(k) * (k - 1) / 2;
  stats.aspl = pairs > 0 ? static_cast<double>(total) / static_cast<double>(pairs) : 0.0;
  return stats;
}

int edge_connectivity(const Graph& g) {
  if (g.num_nodes() < 2) throw Error("edge_connectivity: need at least two nodes");
  if (!is_connected(g)) return 0;
  int best = std::numeric_limits<int>::max();
  for (int t = 1; t < g.num_nodes(); ++t) best = std::min(best, unit_max_flow(g, 0, t));
  return best;
}

bool is_tree(const Graph& g) {
  return g.num_nodes() >= 1 && g.num_edges() == g.num_nodes() - 1 && is_connected(g);
}

}  // namespace lgdc
