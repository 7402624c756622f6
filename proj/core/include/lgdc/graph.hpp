#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lgdc {

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted undirected graph stored as a dense symmetric weight matrix.
///
/// Weight 0 means "no edge". The diagonal is always zero. Node labels are an
/// optional vector of small category indices (coarse graphs carry cluster-size
/// buckets there). Dense storage is deliberate: every graph in this project has
/// at most a few hundred nodes and most consumers need O(1) adjacency queries.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int num_nodes);

  /// Validates symmetry, zero diagonal and nonnegativity; throws lgdc::Error.
  static Graph from_weights(Eigen::MatrixXd weights);
  static Graph from_edges(int num_nodes, std::span<const Edge> edges);
  static Graph from_edges(int num_nodes, std::span<const std::pair<int, int>> edges);

  [[nodiscard]] int num_nodes() const { return static_cast<int>(weights_.rows()); }
  [[nodiscard]] int num_edges() const;
  [[nodiscard]] double weight(int i, int j) const { return weights_(i, j); }
  [[nodiscard]] bool has_edge(int i, int j) const { return weights_(i, j) > 0.0; }
  [[nodiscard]] const Eigen::MatrixXd& weights() const { return weights_; }

  /// Sets w(i, j) = w(j, i) = w. Self-loops are rejected.
  void set_edge(int i, int j, double w = 1.0);

  [[nodiscard]] std::vector<int> neighbors(int i) const;
  [[nodiscard]] int degree(int i) const;
  /// Edges with u < v in lexicographic order.
  [[nodiscard]] std::vector<Edge> edges() const;
  /// Adjacency lists over the unweighted topology, neighbors ascending.
  [[nodiscard]] std::vector<std::vector<int>> adjacency() const;

  /// True when every weight is 0 or 1.
  [[nodiscard]] bool is_simple() const;
  /// Same topology with all positive weights replaced by 1.
  [[nodiscard]] Graph topology() const;

  [[nodiscard]] bool has_labels() const { return labels_.has_value(); }
  [[nodiscard]] const std::vector<int>& labels() const;
  void set_labels(std::vector<int> labels);
  void clear_labels() { labels_.reset(); }

  /// Relabeled copy where old node i becomes node perm[i].
  [[nodiscard]] Graph permuted(std::span<const int> perm) const;
  /// Subgraph induced by `nodes`, in the given order.
  [[nodiscard]] Graph induced(std::span<const int> nodes) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  Eigen::MatrixXd weights_ = Eigen::MatrixXd(0, 0);
  std::optional<std::vector<int>> labels_;
};

}  // namespace lgdc
