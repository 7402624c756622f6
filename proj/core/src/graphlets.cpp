#include "lgdc/graphlets.hpp"

#include <algorithm>

namespace lgdc {

namespace {

// Visits every connected induced subgraph with 3 or 4 nodes exactly once.
template <typename Visitor>
class Esu {
 public:
  Esu(const Graph& g, Visitor& visit) : g_(g), adj_(g.adjacency()), visit_(visit) {}

  void run() {
    for (int v = 0; v < g_.num_nodes(); ++v) {
      std::vector<int> ext;
      for (int u : adj_[static_cast<std::size_t>(v)]) {
        if (u > v) ext.push_back(u);
      }
      sub_ = {v};
      extend(ext, v);
    }
  }

 private:
  bool in_closed_neighborhood(int u) const {
    for (int s : sub_) {
      if (s == u || g_.has_edge(s, u)) return true;
    }
    return false;
  }

  void extend(std::vector<int> ext, int root) {
    if (sub_.size() >= 3) visit_(sub_);
    if (sub_.size() == 4) return;
    while (!ext.empty()) {
      const int w = ext.back();
      ext.pop_back();
      std::vector<int> next = ext;
      for (int u : adj_[static_cast<std::size_t>(w)]) {
        if (u > root && !in_closed_neighborhood(u) && std::find(next.begin(), next.end(), u) == next.end()) {
          next.push_back(u);
        }
      }
      sub_.push_back(w);
      extend(std::move(next), root);
      sub_.pop_back();
    }
  }

  const Graph& g_;
  std::vector<std::vector<int>> adj_;
  Visitor& visit_;
  std::vector<int> sub_;
};

struct Induced {
  int edges = 0;
  std::array<int, 4> degree{};
  int max_degree = 0;
};

Induced induced_shape(const Graph& g, const std::vector<int>& nodes) {
  Induced s;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (g.has_edge(nodes[a], nodes[b])) {
        ++s.edges;
        ++s.degree[a];
        ++s.degree[b];
      }
    }
  }
  s.max_degree = *std::max_element(s.degree.begin(), s.degree.begin() + static_cast<long>(nodes.size()));
  return s;
}

Motif4 classify4(const Induced& s) {
  switch (s.edges) {
    case 3: return s.max_degree == 3 ? Motif4::star : Motif4::path;
    case 4: return s.max_degree == 3 ? Motif4::paw : Motif4::cycle;
    case 5: return Motif4::diamond;
    default: return Motif4::clique;
  }
}

int orbit4(Motif4 type, int degree) {
  switch (type) {
    case Motif4::path: return degree == 1 ? 4 : 5;
    case Motif4::star: return degree == 1 ? 6 : 7;
    case Motif4::cycle: return 8;
    case Motif4::paw: return degree == 1 ? 9 : (degree == 2 ? 10 : 11);
    case Motif4::diamond: return degree == 2 ? 12 : 13;
    case Motif4::clique: return 14;
  }
  return 14;
}

}  // namespace

std::vector<OrbitVector> orbit_counts(const Graph& g) {
  std::vector<OrbitVector> counts(static_cast<std::size_t>(g.num_nodes()), OrbitVector{});
  for (int v = 0; v < g.num_nodes(); ++v) counts[static_cast<std::size_t>(v)][0] = g.degree(v);
  auto visit = [&](const std::vector<int>& nodes) {
    const Induced s = induced_shape(g, nodes);
    if (nodes.size() == 3) {
      for (std::size_t a = 0; a < 3; ++a) {
        const int orbit = s.edges == 3 ? 3 : (s.degree[a] == 1 ? 1 : 2);
        ++counts[static_cast<std::size_t>(nodes[a])][static_cast<std::size_t>(orbit)];
      }
      return;
    }
    const Motif4 type = classify4(s);
    for (std::size_t a = 0; a < 4; ++a) {
      ++counts[static_cast<std::size_t>(nodes[a])][static_cast<std::size_t>(orbit4(type, s.degree[a]))];
    }
  };
  Esu<decltype(visit)>(g, visit).run();
  return counts;
}

std::array<std::int64_t, kMotifCount> motif_counts(const Graph& g) {
  std::array<std::int64_t, kMotifCount> counts{};
  auto visit = [&](const std::vector<int>& nodes) {
    if (nodes.size() == 4) ++counts[static_cast<std::size_t>(classify4(induced_shape(g, nodes)))];
  };
  Esu<decltype(visit)>(g, visit).run();
  return counts;
}

}  // namespace lgdc
