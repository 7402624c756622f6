#pragma once

#include "lgdc/graph.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace lgdc {

inline constexpr int kOrbitCount = 15;
inline constexpr int kMotifCount = 6;

using OrbitVector = std::array<std::int64_t, kOrbitCount>;

/// Connected 4-node induced subgraph types, in the order used by motif_counts.
enum class Motif4 { path, star, cycle, paw, diamond, clique };

/// Per-node counts of the 15 orbits of connected graphlets on 2-4 nodes:
///   0 edge; 1-2 path (end, middle); 3 triangle; 4-5 4-path (end, inner);
///   6-7 star (leaf, center); 8 4-cycle; 9-11 paw (tail, degree-2, degree-3);
///   12-13 diamond (degree-2, degree-3); 14 4-clique.
/// Connected subgraphs are enumerated with the ESU extension scheme, so the
/// cost follows the number of connected 3- and 4-subsets, not n^4.
std::vector<OrbitVector> orbit_counts(const Graph& g);

/// Induced connected 4-node subgraph counts indexed by Motif4.
std::array<std::int64_t, kMotifCount> motif_counts(const Graph& g);

}  // namespace lgdc
