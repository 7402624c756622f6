#pragma once

#include "lgdc/graph.hpp"
#include "lgdc/graph_io.hpp"
#include "lgdc/rng.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lgdc {

enum class Family { tree, planar, community20 };

std::string to_string(Family family);
/// Accepts "tree", "planar", "community20" (also "community", "sbm").
Family parse_family(const std::string& text);

struct SbmParams {
  int communities = 2;
  double p_in = 0.3;
  double p_out = 0.05;
};

struct DatasetSpec {
  Family family = Family::community20;
  int count = 1;
  int n_min = 12;
  int n_max = 20;
  std::uint64_t seed = 0;
  SbmParams sbm;

  /// Benchmark defaults: trees and planar graphs at n = 64; Community-20 with
  /// n in [12, 20], two communities, p_in = 0.3, p_out = 0.05.
  static DatasetSpec defaults(Family family);
  /// Throws ConfigError on n_min < 1, n_min > n_max, count < 1 or bad SBM values.
  void validate() const;
  /// key=value parameters recorded in the dataset header.
  [[nodiscard]] std::map<std::string, std::string> header_params() const;
};

/// Uniform labeled tree on n nodes from a random Prüfer sequence.
Graph gen_tree(int n, Rng& rng);
/// Tree decoded from an explicit Prüfer sequence of length n - 2.
Graph tree_from_pruefer(int n, const std::vector<int>& sequence);

/// Delaunay triangulation of n uniform points in the unit square.
Graph gen_planar(int n, Rng& rng);

/// Planted-partition graph with near-equal community sizes, resampled until
/// connected; throws lgdc::Error after 100 failed attempts.
Graph gen_sbm(int n, const SbmParams& params, Rng& rng);
/// Draws n uniformly from [n_min, n_max] first.
Graph gen_sbm(const DatasetSpec& spec, Rng& rng);

/// Community assignment used by gen_sbm for n nodes (contiguous blocks).
std::vector<int> sbm_communities(int n, int communities);

/// Graph `index` of the dataset described by `spec`; depends only on
/// (spec, index) so generation can run in any order.
Graph generate_graph(const DatasetSpec& spec, std::uint64_t index);
std::vector<Graph> generate_dataset(const DatasetSpec& spec);

/// MMD(train, test) for the nine reference statistics: degree, orbit, motif,
/// clustering, spectre, components, edge_conn, aspl, diameter.
std::map<std::string, double> dataset_reference_stats(const std::vector<Graph>& train,
                                                      const std::vector<Graph>& test);

}  // namespace lgdc
