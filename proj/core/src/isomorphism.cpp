#include "lgdc/isomorphism.hpp"

#include "lgdc/algorithms.hpp"
#include "lgdc/rng.hpp"

#include <algorithm>
#include <unordered_map>

namespace lgdc {

namespace {

std::uint64_t combine(std::uint64_t seed, std::uint64_t value) {
  return Rng::mix(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

std::uint64_t hash_sorted(std::vector<std::uint64_t> values, std::uint64_t seed) {
  std::sort(values.begin(), values.end());
  std::uint64_t h = combine(seed, values.size());
  for (auto v : values) h = combine(h, v);
  return h;
}

using Colors = std::vector<std::uint64_t>;

Colors initial_colors(const std::vector<std::vector<int>>& adj) {
  Colors c(adj.size());
  for (std::size_t i = 0; i < adj.size(); ++i) c[i] = Rng::mix(adj[i].size());
  return c;
}

Colors refine_once(const std::vector<std::vector<int>>& adj, const Colors& colors) {
  Colors next(adj.size());
  std::vector<std::uint64_t> multiset;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    multiset.clear();
    for (int w : adj[i]) multiset.push_back(colors[static_cast<std::size_t>(w)]);
    next[i] = hash_sorted(multiset, colors[i]);
  }
  return next;
}

std::size_t distinct(const Colors& c) {
  Colors sorted = c;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

class Matcher {
 public:
  Matcher(const Graph& a, const Graph& b, Colors ca, Colors cb)
      : a_(a), b_(b), adj_a_(a.adjacency()), adj_b_(b.adjacency()), ca_(std::move(ca)), cb_(std::move(cb)) {
    const auto n = static_cast<std::size_t>(a.num_nodes());
    map_.assign(n, -1);
    used_.assign(n, false);
    build_order();
  }

  bool solve() { return extend(0); }

 private:
  // BFS order starting from the rarest color class so each node after the
  // first has an already-placed anchor neighbor whenever its component allows.
  void build_order() {
    const int n = a_.num_nodes();
    std::unordered_map<std::uint64_t, int> freq;
    for (auto c : ca_) ++freq[c];
    std::vector<int> seeds(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) seeds[static_cast<std::size_t>(i)] = i;
    std::stable_sort(seeds.begin(), seeds.end(), [&](int x, int y) {
      return freq[ca_[static_cast<std::size_t>(x)]] < freq[ca_[static_cast<std::size_t>(y)]];
    });
    std::vector<bool> placed(static_cast<std::size_t>(n), false);
    anchor_.assign(static_cast<std::size_t>(n), -1);
    for (int s : seeds) {
      if (placed[static_cast<std::size_t>(s)]) continue;
      std::size_t head = order_.size();
      order_.push_back(s);
      placed[static_cast<std::size_t>(s)] = true;
      for (; head < order_.size(); ++head) {
        const int u = order_[head];
        for (int w : adj_a_[static_cast<std::size_t>(u)]) {
          if (!placed[static_cast<std::size_t>(w)]) {
            placed[static_cast<std::size_t>(w)] = true;
            anchor_[static_cast<std::size_t>(w)] = u;
            order_.push_back(w);
          }
        }
      }
    }
  }

  bool consistent(int u, int x) const {
    for (int p : placed_) {
      const int y = map_[static_cast<std::size_t>(p)];
      if (a_.has_edge(u, p) != b_.has_edge(x, y)) return false;
    }
    return true;
  }

  bool try_candidate(std::size_t depth, int u, int x) {
    if (used_[static_cast<std::size_t>(x)] || cb_[static_cast<std::size_t>(x)] != ca_[static_cast<std::size_t>(u)]) {
      return false;
    }
    if (!consistent(u, x)) return false;
    map_[static_cast<std::size_t>(u)] = x;
    used_[static_cast<std::size_t>(x)] = true;
    placed_.push_back(u);
    if (extend(depth + 1)) return true;
    placed_.pop_back();
    used_[static_cast<std::size_t>(x)] = false;
    map_[static_cast<std::size_t>(u)] = -1;
    return false;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    const int u = order_[depth];
    const int anchor = anchor_[static_cast<std::size_t>(u)];
    if (anchor >= 0) {
      for (int x : adj_b_[static_cast<std::size_t>(map_[static_cast<std::size_t>(anchor)])]) {
        if (try_candidate(depth, u, x)) return true;
      }
      return false;
    }
    for (int x = 0; x < b_.num_nodes(); ++x) {
      if (try_candidate(depth, u, x)) return true;
    }
    return false;
  }

  const Graph& a_;
  const Graph& b_;
  std::vector<std::vector<int>> adj_a_, adj_b_;
  Colors ca_, cb_;
  std::vector<int> order_, anchor_, map_, placed_;
  std::vector<bool> used_;
};

}  // namespace

std::uint64_t canonical_hash(const Graph& g) {
  const auto adj = g.adjacency();
  Colors colors = initial_colors(adj);
  std::uint64_t h = combine(combine(0x5eedULL, static_cast<std::uint64_t>(g.num_nodes())),
                            static_cast<std::uint64_t>(g.num_edges()));
  h = combine(h, static_cast<std::uint64_t>(component_count(g)));
  for (int round = 0; round < 3; ++round) {
    colors = refine_once(adj, colors);
    h = combine(h, hash_sorted(colors, static_cast<std::uint64_t>(round)));
  }
  return h;
}

bool are_isomorphic(const Graph& a, const Graph& b) {
  if (a.num_nodes() != b.num_nodes() || a.num_edges() != b.num_edges()) return false;
  const auto adj_a = a.adjacency();
  const auto adj_b = b.adjacency();
  Colors ca = initial_colors(adj_a);
  Colors cb = initial_colors(adj_b);
  // Refine jointly until the partition of `a` stops splitting; identical hash
  // functions keep colors comparable across the two graphs.
  for (int round = 0; round <= a.num_nodes(); ++round) {
    if (hash_sorted(ca, 1) != hash_sorted(cb, 1)) return false;
    Colors na = refine_once(adj_a, ca);
    Colors nb = refine_once(adj_b, cb);
    const bool stable = distinct(na) == distinct(ca);
    ca = std::move(na);
    cb = std::move(nb);
    if (stable) break;
  }
  if (hash_sorted(ca, 1) != hash_sorted(cb, 1)) return false;
  return Matcher(a, b, std::move(ca), std::move(cb)).solve();
}

std::vector<int> isomorphism_classes(const std::vector<Graph>& graphs) {
  std::vector<int> cls(graphs.size());
  std::unordered_map<std::uint64_t, std::vector<int>> buckets;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto h = canonical_hash(graphs[i]);
    auto& bucket = buckets[h];
    cls[i] = static_cast<int>(i);
    for (int rep : bucket) {
      if (are_isomorphic(graphs[i], graphs[static_cast<std::size_t>(rep)])) {
        cls[i] = rep;
        break;
      }
    }
    if (cls[i] == static_cast<int>(i)) bucket.push_back(static_cast<int>(i));
  }
  return cls;
}

}  // namespace lgdc
