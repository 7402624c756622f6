#include "lgdc/denoiser.hpp"

#include "lgdc/error.hpp"
#include "lgdc/parallel.hpp"

#include <spdlog/spdlog.h>

#include <cmath>

namespace lgdc {

NetworkShape denoiser_shape(int a, int b, int hidden, int layers) {
  NetworkShape s;
  s.node_features = a;
  s.edge_categories = b;
  s.hidden = hidden;
  s.layers = layers;
  s.node_classes = a;
  s.edge_classes = b;
  s.time_conditioned = true;
  return s;
}

NetworkInput latent_input(const LatentState& state, int a, int steps) {
  const int n = state.num_nodes();
  NetworkInput in;
  in.node_x = Eigen::MatrixXd::Zero(n, a);
  for (int i = 0; i < n; ++i) in.node_x(i, state.x[static_cast<std::size_t>(i)]) = 1.0;
  in.edge_cat = state.e;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) in.pairs.emplace_back(i, j);
  }
  in.t = state.t;
  in.steps = steps;
  return in;
}

CleanPrediction to_prediction(const NetworkOutput& out, const NetworkInput& in, int b) {
  const auto n = in.node_x.rows();
  CleanPrediction p;
  p.node_probs = softmax_rows(out.node_logits);
  p.edge_probs = Eigen::MatrixXd::Zero(n * n, b);
  for (Eigen::Index i = 0; i < n; ++i) p.edge_probs(i * n + i, 0) = 1.0;
  const Eigen::MatrixXd probs = softmax_rows(out.edge_logits);
  for (std::size_t k = 0; k < in.pairs.size(); ++k) {
    const auto [i, j] = in.pairs[k];
    p.edge_probs.row(i * n + j) = probs.row(static_cast<Eigen::Index>(k));
    p.edge_probs.row(j * n + i) = probs.row(static_cast<Eigen::Index>(k));
  }
  return p;
}

CleanPrediction NetworkPredictor::predict(const LatentState& state, int t) const {
  LatentState s = state;
  s.t = t;
  const NetworkInput in = latent_input(s, net_.shape().node_features, steps_);
  return to_prediction(net_.forward(in), in, net_.shape().edge_classes);
}

namespace {

/// Mean cross-entropy of rows of `logits` against `targets`; writes
/// d(scale * mean CE)/d logits into `dlogits`.
double cross_entropy(const Eigen::MatrixXd& logits, const std::vector<int>& targets, double scale,
                     Eigen::MatrixXd* dlogits) {
  const auto rows = logits.rows();
  if (rows == 0) {
    if (dlogits != nullptr) *dlogits = Eigen::MatrixXd::Zero(0, logits.cols());
    return 0.0;
  }
  const Eigen::MatrixXd probs = softmax_rows(logits);
  double total = 0.0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double lmax = logits.row(r).maxCoeff();
    const double lse = lmax + std::log((logits.row(r).array() - lmax).exp().sum());
    total += lse - logits(r, targets[static_cast<std::size_t>(r)]);
  }
  if (dlogits != nullptr) {
    *dlogits = probs;
    for (Eigen::Index r = 0; r < rows; ++r) (*dlogits)(r, targets[static_cast<std::size_t>(r)]) -= 1.0;
    *dlogits *= scale / static_cast<double>(rows);
  }
  return total / static_cast<double>(rows);
}

}  // namespace

DiffusionLoss denoising_loss(const Network& net, const LatentState& noisy, const LatentState& clean, int steps,
                             double lambda_e, ParamStore* grads) {
  if (noisy.num_nodes() != clean.num_nodes()) throw Error("denoising_loss: state sizes differ");
  const NetworkInput in = latent_input(noisy, net.shape().node_features, steps);
  NetworkCache cache;
  const NetworkOutput out = net.forward(in, grads != nullptr ? &cache : nullptr);

  std::vector<int> edge_targets;
  edge_targets.reserve(in.pairs.size());
  for (const auto& [i, j] : in.pairs) edge_targets.push_back(clean.e(i, j));

  NetworkOutput upstream;
  DiffusionLoss loss;
  loss.node_loss = cross_entropy(out.node_logits, clean.x, 1.0, grads != nullptr ? &upstream.node_logits : nullptr);
  loss.edge_loss = cross_entropy(out.edge_logits, edge_targets, lambda_e, grads != nullptr ? &upstream.edge_logits : nullptr);
  loss.loss = loss.node_loss + lambda_e * loss.edge_loss;
  if (grads != nullptr) net.backward(in, cache, upstream, *grads);
  return loss;
}

DiffusionLoss diffusion_loss(const Network& net, const LatentState& clean, int t, const NoiseProcess& np,
                             double lambda_e, Rng& rng, ParamStore* grads) {
  const LatentState noisy = forward_sample(clean, t, np, rng);
  return denoising_loss(net, noisy, clean, np.steps, lambda_e, grads);
}

std::vector<double> train_diffusion(Network& net, const std::vector<LatentState>& data, const NoiseProcess& np,
                                    const TrainOptions& options, const TrainCallback& callback) {
  if (data.empty()) throw Error("train_diffusion: no training states");
  if (options.batch < 1 || options.iterations < 0) throw Error("train_diffusion: invalid batch or iteration count");
  Adam adam(net.params(), {.lr = options.lr});
  const Rng root(options.seed);
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(options.iterations));
  const auto batch = static_cast<std::size_t>(options.batch);
  std::vector<ParamStore> grads(batch, net.params().zeros_like());
  std::vector<double> losses(batch);

  for (int it = 0; it < options.iterations; ++it) {
    const Rng step_rng = root.split(static_cast<std::uint64_t>(it));
    parallel_for(batch, [&](std::size_t k) {
      Rng rng = step_rng.split(k);
      const auto& clean = data[static_cast<std::size_t>(rng.below(data.size()))];
      const int t = rng.range(1, np.steps);
      grads[k].set_zero();
      losses[k] = diffusion_loss(net, clean, t, np, options.lambda_e, rng, &grads[k]).loss;
    });
    ParamStore total = grads[0];
    double mean = losses[0];
    for (std::size_t k = 1; k < batch; ++k) {
      total.add_scaled(grads[k], 1.0);
      mean += losses[k];
    }
    total.scale(1.0 / static_cast<double>(batch));
    mean /= static_cast<double>(batch);
    if (!adam.step(net.params(), total)) spdlog::warn("diffusion step {}: non-finite gradient, update skipped", it);
    curve.push_back(mean);
    if (callback) callback(it, mean);
  }
  return curve;
}

}  // namespace lgdc
