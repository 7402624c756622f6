#pragma once

#include "lgdc/rng.hpp"

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace lgdc {

/// Named tensor. Rank 1 tensors are stored as a single row.
struct Tensor {
  std::string name;
  int rank = 2;
  Eigen::MatrixXd value;
};

/// Ordered tensor store; order is the checkpoint order.
class ParamStore {
 public:
  Eigen::MatrixXd& add(const std::string& name, int rows, int cols, int rank = 2);
  [[nodiscard]] Eigen::MatrixXd& operator[](const std::string& name);
  [[nodiscard]] const Eigen::MatrixXd& operator[](const std::string& name) const;
  [[nodiscard]] bool contains(const std::string& name) const;
  [[nodiscard]] std::vector<Tensor>& tensors() { return tensors_; }
  [[nodiscard]] const std::vector<Tensor>& tensors() const { return tensors_; }
  [[nodiscard]] std::size_t scalar_count() const;
  /// Same names and shapes, all zeros.
  [[nodiscard]] ParamStore zeros_like() const;
  void set_zero();
  /// this += scale * other (matching layout).
  void add_scaled(const ParamStore& other, double scale);
  void scale(double factor);
  [[nodiscard]] bool all_finite() const;

 private:
  [[nodiscard]] std::size_t index_of(const std::string& name) const;
  std::vector<Tensor> tensors_;
};

/// Sizes of one message-passing network. Node inputs are dense feature rows
/// (one-hot categories, optionally followed by real-valued columns); edges
/// carry one of `edge_categories` categories, 0 meaning "no edge".
struct NetworkShape {
  int node_features = 1;
  int edge_categories = 2;
  int hidden = 64;
  int layers = 4;
  int node_classes = 0;
  int edge_classes = 0;
  bool time_conditioned = true;
};

inline constexpr int kTimeFeatures = 16;

/// sin and cos of 2^k pi u for k < count / 2.
Eigen::RowVectorXd sinusoidal_features(double u, int count);

/// 8 frequencies, sin and cos of 2^k pi t / T.
Eigen::RowVectorXd time_features(int t, int steps);

/// Inputs for one forward pass. `edge_cat` is n x n with a zero diagonal;
/// `pairs` lists the (i, j) slots that receive edge logits.
struct NetworkInput {
  Eigen::MatrixXd node_x;
  Eigen::MatrixXi edge_cat;
  std::vector<std::pair<int, int>> pairs;
  int t = 0;
  int steps = 1;
};

struct NetworkCache {
  Eigen::RowVectorXd tau;
  std::vector<Eigen::MatrixXd> h;
  std::vector<Eigen::MatrixXd> gate;
  std::vector<Eigen::MatrixXd> msg;
  std::vector<Eigen::MatrixXd> agg;
  std::vector<Eigen::MatrixXd> upd;
  Eigen::MatrixXd pair_in;
  Eigen::MatrixXd pair_hidden;
};

struct NetworkOutput {
  Eigen::MatrixXd node_logits;
  Eigen::MatrixXd edge_logits;
};

/// Edge-gated message passing:
///   h0 = X W_in + tau W_time + b
///   g_c = sigmoid(E[c] W_gate + b_gate)         per edge category c
///   a_i = (1/n) sum_{j != i} g_{c(i,j)} * (h_j W_msg)
///   h <- h + tanh(a W_upd + b_upd)
/// Node logits are h W_node + b. Edge logits for a pair (i, j) come from the
/// symmetric features [h_i * h_j, h_i + h_j, E[c(i,j)]] through one tanh layer,
/// so they are identical for (i, j) and (j, i).
class Network {
 public:
  Network() = default;
  explicit Network(const NetworkShape& shape);

  [[nodiscard]] const NetworkShape& shape() const { return shape_; }
  [[nodiscard]] ParamStore& params() { return params_; }
  [[nodiscard]] const ParamStore& params() const { return params_; }

  /// Output heads zero, inner weights uniform in +-1/sqrt(d), embeddings
  /// normal with sd 0.02.
  void initialize(Rng& rng);

  NetworkOutput forward(const NetworkInput& in, NetworkCache* cache = nullptr) const;
  /// Accumulates parameter gradients for upstream logit gradients into `grads`.
  void backward(const NetworkInput& in, const NetworkCache& cache, const NetworkOutput& upstream, ParamStore& grads) const;

 private:
  NetworkShape shape_;
  ParamStore params_;
};

/// Row-wise softmax.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

struct AdamOptions {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(const ParamStore& params, AdamOptions options);
  /// Bias-corrected update. Returns false and leaves everything untouched when
  /// a gradient entry is not finite.
  bool step(ParamStore& params, const ParamStore& grads);
  [[nodiscard]] long steps_taken() const { return t_; }
  [[nodiscard]] long skipped() const { return skipped_; }

 private:
  AdamOptions options_;
  ParamStore m_;
  ParamStore v_;
  long t_ = 0;
  long skipped_ = 0;
};

/// Text checkpoint:
///   #ckpt lgdc <version> a=<node_features> b=<edge_categories> d=<hidden> L=<layers>
///   param <name> <rank> <dims...>
///   <row values, 17 significant digits, one matrix row per line>
/// Head sizes and time conditioning are recovered from the tensors present.
inline constexpr int kCheckpointVersion = 1;
void save_checkpoint(const std::string& path, const Network& net);
Network load_checkpoint(const std::string& path);
std::string checkpoint_text(const Network& net);
Network parse_checkpoint(const std::string& text);

}  // namespace lgdc
