#pragma once

#include "lgdc/graph.hpp"

#include <cstdint>
#include <vector>

namespace lgdc {

/// Isomorphism-invariant digest of the unweighted topology: three rounds of
/// Weisfeiler-Leman color refinement hashed as sorted multisets, folded with
/// node, edge and component counts. Equal digests are only a candidate signal;
/// confirm with are_isomorphic.
std::uint64_t canonical_hash(const Graph& g);

/// Exact isomorphism test of the unweighted topologies by color-refined
/// backtracking.
bool are_isomorphic(const Graph& a, const Graph& b);

/// Groups graphs into isomorphism classes; result[i] is the index of the first
/// graph isomorphic to graphs[i].
std::vector<int> isomorphism_classes(const std::vector<Graph>& graphs);

}  // namespace lgdc
