#include "lgdc/graph.hpp"

#include "lgdc/error.hpp"

#include <cmath>
#include <string>

namespace lgdc {

Graph::Graph(int num_nodes) {
  if (num_nodes < 0) throw Error("Graph: negative node count");
  weights_ = Eigen::MatrixXd::Zero(num_nodes, num_nodes);
}

Graph Graph::from_weights(Eigen::MatrixXd weights) {
  if (weights.rows() != weights.cols()) throw Error("Graph: weight matrix is not square");
  const auto n = weights.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights(i, i) != 0.0) throw Error("Graph: nonzero diagonal at node " + std::to_string(i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (weights(i, j) != weights(j, i)) throw Error("Graph: weight matrix is not symmetric");
      if (weights(i, j) < 0.0 || !std::isfinite(weights(i, j))) {
        throw Error("Graph: weights must be finite and nonnegative");
      }
    }
  }
  Graph g;
  g.weights_ = std::move(weights);
  return g;
}

Graph Graph::from_edges(int num_nodes, std::span<const Edge> edges) {
  Graph g(num_nodes);
  for (const auto& e : edges) g.set_edge(e.u, e.v, e.weight);
  return g;
}

Graph Graph::from_edges(int num_nodes, std::span<const std::pair<int, int>> edges) {
  Graph g(num_nodes);
  for (const auto& [u, v] : edges) g.set_edge(u, v, 1.0);
  return g;
}

int Graph::num_edges() const {
  int m = 0;
  for (int i = 0; i < num_nodes(); ++i) {
    for (int j = i + 1; j < num_nodes(); ++j) m += weights_(i, j) > 0.0 ? 1 : 0;
  }
  return m;
}

void Graph::set_edge(int i, int j, double w) {
  if (i == j) throw Error("Graph: self-loops are not allowed");
  if (i < 0 || j < 0 || i >= num_nodes() || j >= num_nodes()) {
    throw Error("Graph: edge endpoint out of range");
  }
  if (w < 0.0 || !std::isfinite(w)) throw Error("Graph: weights must be finite and nonnegative");
  weights_(i, j) = w;
  weights_(j, i) = w;
}

std::vector<int> Graph::neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < num_nodes(); ++j) {
    if (weights_(i, j) > 0.0) out.push_back(j);
  }
  return out;
}

int Graph::degree(int i) const {
  int d = 0;
  for (int j = 0; j < num_nodes(); ++j) d += weights_(i, j) > 0.0 ? 1 : 0;
  return d;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < num_nodes(); ++i) {
    for (int j = i + 1; j < num_nodes(); ++j) {
      if (weights_(i, j) > 0.0) out.push_back({i, j, weights_(i, j)});
    }
  }
  return out;
}

std::vector<std::vector<int>> Graph::adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_nodes()));
  for (int i = 0; i < num_nodes(); ++i) adj[static_cast<std::size_t>(i)] = neighbors(i);
  return adj;
}

bool Graph::is_simple() const {
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    const double w = weights_.data()[i];
    if (w != 0.0 && w != 1.0) return false;
  }
  return true;
}

Graph Graph::topology() const {
  Graph g;
  g.weights_ = (weights_.array() > 0.0).cast<double>().matrix();
  g.labels_ = labels_;
  return g;
}

const std::vector<int>& Graph::labels() const {
  if (!labels_) throw Error("Graph: no node labels");
  return *labels_;
}

void Graph::set_labels(std::vector<int> labels) {
  if (static_cast<int>(labels.size()) != num_nodes()) throw Error("Graph: label count != node count");
  for (int l : labels) {
    if (l < 0) throw Error("Graph: labels must be nonnegative");
  }
  labels_ = std::move(labels);
}

Graph Graph::permuted(std::span<const int> perm) const {
  const int n = num_nodes();
  if (static_cast<int>(perm.size()) != n) throw Error("Graph: permutation size mismatch");
  Graph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g.weights_(perm[i], perm[j]) = weights_(i, j);
  }
  if (labels_) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(perm[i])] = (*labels_)[static_cast<std::size_t>(i)];
    g.labels_ = std::move(labels);
  }
  return g;
}

Graph Graph::induced(std::span<const int> nodes) const {
  const int k = static_cast<int>(nodes.size());
  Graph g(k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) g.weights_(a, b) = weights_(nodes[a], nodes[b]);
  }
  if (labels_) {
    std::vector<int> labels;
    for (int v : nodes) labels.push_back((*labels_)[static_cast<std::size_t>(v)]);
    g.labels_ = std::move(labels);
  }
  return g;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.num_nodes() == b.num_nodes() && a.weights_ == b.weights_ && a.labels_ == b.labels_;
}

}  // namespace lgdc
