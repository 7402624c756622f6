#pragma once

#include "lgdc/graph.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lgdc {

/// One candidate fine edge. `u < v` are skeleton node indices; for intra
/// candidates `cluster_u == cluster_v`.
struct Candidate {
  int u = 0;
  int v = 0;
  int cluster_u = 0;
  int cluster_v = 0;
  [[nodiscard]] bool intra() const { return cluster_u == cluster_v; }
};

/// Expanded skeleton: coarse node i becomes the contiguous fine nodes
/// [offset[i], offset[i] + v[i]). Candidates are listed in canonical order:
/// intra blocks by cluster, then inter blocks by coarse edge (i < j,
/// lexicographic), each block in lexicographic pair order.
struct CandidateSet {
  std::vector<int> sizes;
  std::vector<int> offset;
  std::vector<int> cluster_of;
  std::vector<Candidate> edges;

  [[nodiscard]] int num_nodes() const { return static_cast<int>(cluster_of.size()); }
  [[nodiscard]] std::size_t size() const { return edges.size(); }
  /// Dense lookup from a skeleton pair to its candidate index, -1 if absent.
  [[nodiscard]] std::vector<int> index_matrix() const;
};

/// Replicates each coarse node i into v[i] fine nodes and lists candidate
/// edges. Throws if v has the wrong length or a non-positive entry.
CandidateSet expand(const Graph& coarse, std::span<const int> v);

/// Simple unit-weight graph on the skeleton holding the candidates with mask 1.
Graph refine(const CandidateSet& candidates, std::span<const std::uint8_t> mask);

}  // namespace lgdc
