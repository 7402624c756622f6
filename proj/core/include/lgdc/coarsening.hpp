#pragma once

#include "lgdc/graph.hpp"
#include "lgdc/rng.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace lgdc {

/// Fine-to-coarse assignment. Equivalent to the binary matrix C (n_c x n) with
/// C(assignment[u], u) = 1.
struct Projection {
  std::vector<int> assignment;
  int num_coarse = 0;

  static Projection identity(int n);
  [[nodiscard]] int num_fine() const { return static_cast<int>(assignment.size()); }
  [[nodiscard]] Eigen::MatrixXd matrix() const;
  /// Applies `next` after this projection.
  [[nodiscard]] Projection then(const Projection& next) const;
  [[nodiscard]] std::vector<int> cluster_sizes() const;
  /// Throws unless every coarse index in [0, num_coarse) is used.
  void validate() const;
};

/// Coarse graph with Laplacian C L C^T: off-diagonal weights are summed fine
/// weights between clusters, intra-cluster mass is dropped.
Graph project_graph(const Graph& fine, const Projection& proj);

struct Contraction {
  Graph graph;
  Projection proj;
};

/// Merges nodes i and j. The merged node takes index min(i, j); nodes after
/// max(i, j) shift down by one. Throws if i == j or the edge is absent.
Contraction contract_edge(const Graph& g, int i, int j);

struct RecOptions {
  /// Draw budget per pass; 0 means 10 n.
  long iteration_limit = 0;
  /// Stop contracting once the graph has this many nodes (0 disables).
  int node_floor = 0;
  /// Candidate edges whose merged cluster would exceed this size are left
  /// out of the pass (0 disables). `sizes` gives the current cluster sizes.
  int size_cap = 0;
  const std::vector<int>* sizes = nullptr;
};

/// One randomized edge contraction pass. Every candidate is drawn with
/// probability w / Phi for the weight total Phi fixed at the start of the
/// pass; removed candidates move their mass to the null outcome.
Contraction rec_pass(const Graph& g, Rng& rng, const RecOptions& options = {});

/// Categories for coarse edge weights: 0 none, 1, 2, ..., b-1 for >= b-1.
int weight_bucket(double w, int buckets);
/// Coarse node label for a cluster of `size` fine nodes: min(size, v_max) - 1.
int size_label(int size, int v_max);

struct CoarseningOptions {
  double target_ratio = 0.2;
  int v_max = 8;
  int k_eig = 8;
  int max_attempts = 20;
  long iteration_limit = 0;
  /// Measure epsilon with the row-normalized C (rows of unit length) instead
  /// of the binary C.
  bool normalized_projection = false;
};

struct CoarseningResult {
  /// Weighted coarse graph labeled with size_label of each cluster.
  Graph coarse;
  Projection proj;
  std::vector<int> v_star;
  /// Mask over the canonical candidate order of expand(coarse, v_star).
  std::vector<std::uint8_t> e_star;
  /// position[u] is fine node u's index in the expanded skeleton: clusters in
  /// order, original ids ascending within a cluster.
  std::vector<int> position;
  double epsilon = 0.0;
  int attempts = 1;
};

/// Composes REC passes until n_c <= ceil(target_ratio n), keeping every
/// cluster at most v_max. Throws lgdc::Error when no attempt reaches the
/// target within the cap.
CoarseningResult coarsen_to_ratio(const Graph& g, const CoarseningOptions& options, Rng& rng);

/// Index of each fine node in the expanded skeleton: clusters in order,
/// original ids ascending within a cluster.
std::vector<int> expansion_positions(const Projection& proj);

/// Builds the full result (coarse graph, v_star, e_star, epsilon) for a given
/// projection.
CoarseningResult make_result(const Graph& fine, const Projection& proj, int v_max, int k_eig,
                             bool normalized_projection = false);

/// max over the first k nontrivial fine eigenvectors x of
/// |x_c^T L_c x_c / x^T L x - 1| with x_c = C x.
double spectral_epsilon(const Graph& fine, const Projection& proj, int k, bool normalized_projection = false);

}  // namespace lgdc
