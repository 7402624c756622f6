#pragma once

#include "lgdc/graph.hpp"
#include "lgdc/rng.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace lgdc {

enum class NoiseKind { uniform, marginal };
std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& text);

/// Cosine schedule normalized so alpha_bar[0] = 1, with entries clamped below
/// at kMinAlphaBar so every transition keeps a nonzero diagonal.
inline constexpr double kMinAlphaBar = 1e-5;
std::vector<double> cosine_alpha_bar(int steps, double s = 0.008);

/// Immutable forward process. Index t of the step and cumulative tables runs
/// over [0, T]; entry 0 is the identity.
struct NoiseProcess {
  int steps = 0;
  NoiseKind kind = NoiseKind::marginal;
  std::vector<double> alpha_bar;
  Eigen::VectorXd m_x;
  Eigen::VectorXd m_e;
  std::vector<Eigen::MatrixXd> qx_step;
  std::vector<Eigen::MatrixXd> qe_step;
  std::vector<Eigen::MatrixXd> qx_cum;
  std::vector<Eigen::MatrixXd> qe_cum;

  [[nodiscard]] int a() const { return static_cast<int>(m_x.size()); }
  [[nodiscard]] int b() const { return static_cast<int>(m_e.size()); }
};

/// Q_step[t] = a_t I + (1 - a_t) 1 m^T with a_t = alpha_bar[t] / alpha_bar[t-1];
/// m is the given marginal (marginal kind) or uniform (uniform kind).
/// Throws unless both marginals are simplices.
NoiseProcess build_noise(int steps, NoiseKind kind, const Eigen::VectorXd& m_x, const Eigen::VectorXd& m_e);

/// Categorical latent graph. Categories are stored as indices, which is the
/// one-hot encoding in compressed form; e is symmetric with a zero diagonal
/// (category 0 is "no edge").
struct LatentState {
  int t = 0;
  std::vector<int> x;
  Eigen::MatrixXi e;

  [[nodiscard]] int num_nodes() const { return static_cast<int>(x.size()); }
  /// Throws unless categories are in range, e is symmetric and the diagonal is 0.
  void validate(int a, int b) const;
};

/// x from node labels, e from weight buckets.
LatentState encode_latent(const Graph& coarse, int a, int b);
/// Graph with weight = edge category and labels = node categories.
Graph decode_latent(const LatentState& state);

/// Empirical node and edge (i < j slots) category frequencies of coarse
/// graphs. Categories that never occur receive no mass.
Eigen::VectorXd node_marginal(const std::vector<LatentState>& states, int a);
Eigen::VectorXd edge_marginal(const std::vector<LatentState>& states, int b);

LatentState forward_sample(const LatentState& state0, int t, const NoiseProcess& np, Rng& rng);

/// Mixture over clean categories c of q(x_{t-1} | x_0 = c, x_t), weighted by
/// x0_prob. Components with q(x_t | x_0 = c) = 0 are dropped and the mixture
/// renormalized; throws when nothing remains.
Eigen::VectorXd reverse_posterior(const Eigen::VectorXd& x0_prob, int xt, int t, const std::vector<Eigen::MatrixXd>& step,
                                  const std::vector<Eigen::MatrixXd>& cum);

/// Clean-state distribution predicted from a noisy state. Edge probabilities
/// are stored with row i * n + j.
struct CleanPrediction {
  Eigen::MatrixXd node_probs;
  Eigen::MatrixXd edge_probs;
};

class CleanPredictor {
 public:
  virtual ~CleanPredictor() = default;
  virtual CleanPrediction predict(const LatentState& state, int t) const = 0;
  /// Pair slots processed per call, n^2 for a dense predictor.
  virtual std::int64_t slots(int n) const { return static_cast<std::int64_t>(n) * n; }
};

struct SamplingStats {
  std::int64_t predictor_calls = 0;
  std::int64_t slot_work = 0;
};

/// Draws the prior from (m_x, m_e) and runs the reverse chain T..1.
LatentState sample_latent(int n, const NoiseProcess& np, const CleanPredictor& predictor, Rng& rng,
                          SamplingStats* stats = nullptr);

}  // namespace lgdc
