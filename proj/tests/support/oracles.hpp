#pragma once

// Independent reference implementations used only by tests.

#include "lgdc/graph.hpp"
#include "lgdc/rng.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/graph/isomorphism.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

namespace lgdc::testing {

using BoostGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;

inline BoostGraph to_boost(const Graph& g) {
  BoostGraph b(static_cast<std::size_t>(g.num_nodes()));
  for (const auto& e : g.edges()) boost::add_edge(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v), b);
  return b;
}

inline bool boost_planar(const Graph& g) {
  BoostGraph b = to_boost(g);
  return boost::boyer_myrvold_planarity_test(b);
}

inline bool boost_isomorphic(const Graph& a, const Graph& b) {
  if (a.num_nodes() != b.num_nodes() || a.num_edges() != b.num_edges()) return false;
  BoostGraph ga = to_boost(a);
  BoostGraph gb = to_boost(b);
  return boost::isomorphism(ga, gb);
}

/// G(n, p) on the unit-weight topology.
inline Graph random_graph(int n, double p, Rng& rng) {
  Graph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) g.set_edge(i, j, 1.0);
    }
  }
  return g;
}

/// Random spanning tree plus extra G(n, p) edges, so always connected.
inline Graph random_connected_graph(int n, double p, Rng& rng) {
  Graph g = random_graph(n, p, rng);
  for (int v = 1; v < n; ++v) g.set_edge(static_cast<int>(rng.below(static_cast<std::uint64_t>(v))), v, 1.0);
  return g;
}

/// Graph on n nodes whose edge set is the bit pattern `code` over the pairs
/// (i < j) in lexicographic order.
inline Graph graph_from_code(int n, std::uint64_t code) {
  Graph g(n);
  int bit = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++bit) {
      if ((code >> bit) & 1U) g.set_edge(i, j, 1.0);
    }
  }
  return g;
}

inline std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  rng.shuffle(p);
  return p;
}

struct BruteForceGraphlets {
  std::vector<std::array<std::int64_t, 15>> orbits;
  std::array<std::int64_t, 6> motifs{};
};

/// Classifies every node subset of size 2, 3 and 4 by its induced edge count
/// and degree pattern.
inline BruteForceGraphlets brute_force_graphlets(const Graph& g) {
  const int n = g.num_nodes();
  BruteForceGraphlets out;
  out.orbits.assign(static_cast<std::size_t>(n), {});
  auto adj = [&](int a, int b) { return g.has_edge(a, b) ? 1 : 0; };
  auto bump = [&](int node, int orbit) { ++out.orbits[static_cast<std::size_t>(node)][static_cast<std::size_t>(orbit)]; };

  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (adj(a, b)) {
        bump(a, 0);
        bump(b, 0);
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        const int s[3] = {a, b, c};
        int deg[3] = {adj(a, b) + adj(a, c), adj(a, b) + adj(b, c), adj(a, c) + adj(b, c)};
        const int m = (deg[0] + deg[1] + deg[2]) / 2;
        if (m == 3) {
          for (int x : s) bump(x, 3);
        } else if (m == 2) {
          for (int k = 0; k < 3; ++k) bump(s[k], deg[k] == 2 ? 2 : 1);
        }
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        for (int d = c + 1; d < n; ++d) {
          const int s[4] = {a, b, c, d};
          int deg[4] = {};
          for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
              if (i != j) deg[i] += adj(s[i], s[j]);
            }
          }
          const int m = (deg[0] + deg[1] + deg[2] + deg[3]) / 2;
          // Connectivity: with 4 nodes, m >= 3 is connected unless a
          // triangle plus an isolated node.
          const bool isolated = deg[0] == 0 || deg[1] == 0 || deg[2] == 0 || deg[3] == 0;
          if (m < 3 || isolated) continue;
          const int maxdeg = *std::max_element(deg, deg + 4);
          for (int i = 0; i < 4; ++i) {
            int orbit = -1;
            if (m == 3 && maxdeg == 2) orbit = deg[i] == 1 ? 4 : 5;
            if (m == 3 && maxdeg == 3) orbit = deg[i] == 1 ? 6 : 7;
            if (m == 4 && maxdeg == 2) orbit = 8;
            if (m == 4 && maxdeg == 3) orbit = deg[i] == 1 ? 9 : (deg[i] == 2 ? 10 : 11);
            if (m == 5) orbit = deg[i] == 2 ? 12 : 13;
            if (m == 6) orbit = 14;
            bump(s[i], orbit);
          }
          int motif = -1;
          if (m == 3) motif = maxdeg == 2 ? 0 : 1;
          if (m == 4) motif = maxdeg == 2 ? 2 : 3;
          if (m == 5) motif = 4;
          if (m == 6) motif = 5;
          ++out.motifs[static_cast<std::size_t>(motif)];
        }
      }
    }
  }
  return out;
}

}  // namespace lgdc::testing
