#include "lgdc/candidates.hpp"

#include "lgdc/error.hpp"

#include <string>

namespace lgdc {

std::vector<int> CandidateSet::index_matrix() const {
  const auto n = static_cast<std::size_t>(num_nodes());
  std::vector<int> index(n * n, -1);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto u = static_cast<std::size_t>(edges[k].u);
    const auto v = static_cast<std::size_t>(edges[k].v);
    index[u * n + v] = static_cast<int>(k);
    index[v * n + u] = static_cast<int>(k);
  }
  return index;
}

CandidateSet expand(const Graph& coarse, std::span<const int> v) {
  const int n_c = coarse.num_nodes();
  if (static_cast<int>(v.size()) != n_c) {
    throw Error("expand: expansion vector has length " + std::to_string(v.size()) + ", coarse graph has " +
                std::to_string(n_c) + " nodes");
  }
  CandidateSet out;
  out.sizes.assign(v.begin(), v.end());
  out.offset.resize(static_cast<std::size_t>(n_c));
  int total = 0;
  for (int i = 0; i < n_c; ++i) {
    if (v[static_cast<std::size_t>(i)] < 1) throw Error("expand: expansion sizes must be positive");
    out.offset[static_cast<std::size_t>(i)] = total;
    total += v[static_cast<std::size_t>(i)];
  }
  out.cluster_of.resize(static_cast<std::size_t>(total));
  for (int i = 0; i < n_c; ++i) {
    for (int r = 0; r < v[static_cast<std::size_t>(i)]; ++r) {
      out.cluster_of[static_cast<std::size_t>(out.offset[static_cast<std::size_t>(i)] + r)] = i;
    }
  }

  for (int i = 0; i < n_c; ++i) {
    const int lo = out.offset[static_cast<std::size_t>(i)];
    const int hi = lo + v[static_cast<std::size_t>(i)];
    for (int a = lo; a < hi; ++a) {
      for (int b = a + 1; b < hi; ++b) out.edges.push_back({a, b, i, i});
    }
  }
  for (const Edge& e : coarse.edges()) {
    const int lo_u = out.offset[static_cast<std::size_t>(e.u)];
    const int lo_v = out.offset[static_cast<std::size_t>(e.v)];
    for (int a = lo_u; a < lo_u + v[static_cast<std::size_t>(e.u)]; ++a) {
      for (int b = lo_v; b < lo_v + v[static_cast<std::size_t>(e.v)]; ++b) out.edges.push_back({a, b, e.u, e.v});
    }
  }
  return out;
}

Graph refine(const CandidateSet& candidates, std::span<const std::uint8_t> mask) {
  if (mask.size() != candidates.size()) {
    throw Error("refine: mask has length " + std::to_string(mask.size()) + ", candidate set has " +
                std::to_string(candidates.size()));
  }
  Graph g(candidates.num_nodes());
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (mask[k]) g.set_edge(candidates.edges[k].u, candidates.edges[k].v, 1.0);
  }
  return g;
}

}  // namespace lgdc
