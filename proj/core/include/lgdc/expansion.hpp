#pragma once

#include "lgdc/candidates.hpp"
#include "lgdc/coarsening.hpp"
#include "lgdc/denoiser.hpp"
#include "lgdc/network.hpp"
#include "lgdc/rng.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace lgdc {

/// Edge categories seen by the edge predictor: 0 non-candidate, 1 intra,
/// 2 + (w - 1) for an inter candidate under a coarse edge of weight bucket w.
int candidate_category(const Candidate& c, const Graph& coarse, int buckets);

/// The two expansion predictors plus the decode-time calibration constants.
struct Expander {
  Network v_net;
  Network e_net;
  int v_max = 8;
  int buckets = 4;
  /// Mean positive-class weight used in training; decode subtracts its log
  /// from the edge logit so probabilities describe the unweighted data.
  double positive_weight = 1.0;
  /// Mean fine edges per fine node in training, for the density warning.
  double edges_per_node = 0.0;
};

Expander make_expander(int v_max, int buckets, int hidden, int layers, Rng& rng);

/// Input for the size predictor: one-hot coarse labels, weight-bucket edges.
NetworkInput v_input(const Graph& coarse, int v_max, int buckets);

/// Columns used to embed each node's symmetry-breaking scalar.
inline constexpr int kNoiseFeatures = 16;

/// Input for the edge predictor over the expanded skeleton. Node rows are a
/// one-hot cluster-size bucket followed by sinusoidal_features(noise(i));
/// candidate pairs are queried in canonical order.
NetworkInput e_input(const Graph& coarse, const CandidateSet& cands, int v_max, int buckets,
                     const Eigen::VectorXd& noise);

/// Temperature 0 takes the argmax; otherwise samples softmax(logits / T).
std::vector<int> predict_v(const Expander& model, const Graph& coarse, Rng& rng, double temperature = 1.0);

/// Per-candidate edge probabilities after calibration.
Eigen::VectorXd edge_probabilities(const Expander& model, const Graph& coarse, const CandidateSet& cands,
                                   const Eigen::VectorXd& noise, double temperature = 1.0);

/// Bernoulli mask (temperature 0 thresholds at 1/2). Draws fresh uniform
/// node noise unless `noise` is given.
std::vector<std::uint8_t> predict_e(const Expander& model, const Graph& coarse, const CandidateSet& cands, Rng& rng,
                                    double temperature = 1.0, const Eigen::VectorXd* noise = nullptr);

struct DecodeResult {
  Graph graph;
  std::vector<int> v;
  std::size_t candidates = 0;
  bool dense_warning = false;
};

/// v ~ predict_v, expand, e ~ predict_e, refine.
DecodeResult decode(const Expander& model, const Graph& latent, Rng& rng, double temperature = 1.0);

/// One supervision pair as used by the expander.
struct ExpansionExample {
  Graph coarse;
  std::vector<int> v_star;
  std::vector<std::uint8_t> e_star;
};

ExpansionExample to_example(const CoarseningResult& result);

struct ExpanderLoss {
  double v_loss = 0.0;
  double e_loss = 0.0;
  double positive_weight = 1.0;
  [[nodiscard]] double total() const { return v_loss + e_loss; }
};

/// Size CE (mean over coarse nodes) plus class-weighted edge BCE (sum of
/// weighted terms over |E~|), positives weighted |E~| / (2 |positives|).
/// Edge supervision is teacher-forced on v_star.
ExpanderLoss expander_loss(const Expander& model, const ExpansionExample& ex, const Eigen::VectorXd& noise,
                           ParamStore* v_grads, ParamStore* e_grads);

struct ExpanderTrainOptions {
  int iterations = 2000;
  int batch = 16;
  double lr = 3e-4;
  std::uint64_t seed = 0;
};

/// Joint training of both predictors; returns the mean total loss per
/// iteration. Also sets positive_weight and edges_per_node from the data.
std::vector<double> train_expander(Expander& model, const std::vector<ExpansionExample>& data,
                                   const ExpanderTrainOptions& options, const TrainCallback& callback = nullptr);

}  // namespace lgdc
