#pragma once

#include "lgdc/diffusion.hpp"
#include "lgdc/network.hpp"
#include "lgdc/rng.hpp"

#include <functional>
#include <vector>

namespace lgdc {

/// Network layout for the latent denoiser: one-hot node categories in, time
/// conditioning on, node and edge heads over the same alphabets.
NetworkShape denoiser_shape(int a, int b, int hidden, int layers);

/// Network input for a latent state: all i < j pairs receive edge logits.
NetworkInput latent_input(const LatentState& state, int a, int steps);

/// Softmax heads expanded to a dense prediction. Edge rows i * n + j and
/// j * n + i are equal; diagonal rows are the point mass on "no edge".
CleanPrediction to_prediction(const NetworkOutput& out, const NetworkInput& in, int b);

class NetworkPredictor : public CleanPredictor {
 public:
  NetworkPredictor(const Network& net, int steps) : net_(net), steps_(steps) {}
  CleanPrediction predict(const LatentState& state, int t) const override;

 private:
  const Network& net_;
  int steps_;
};

struct DiffusionLoss {
  double loss = 0.0;
  double node_loss = 0.0;
  double edge_loss = 0.0;
};

/// Cross-entropy of the clean state given the corrupted one: mean node CE plus
/// lambda_e times mean edge CE over i < j slots. Accumulates gradients into
/// `grads` when non-null.
DiffusionLoss denoising_loss(const Network& net, const LatentState& noisy, const LatentState& clean, int steps,
                             double lambda_e, ParamStore* grads);

/// Corrupts `clean` to step t with the forward process, then scores it.
DiffusionLoss diffusion_loss(const Network& net, const LatentState& clean, int t, const NoiseProcess& np,
                             double lambda_e, Rng& rng, ParamStore* grads);

struct TrainOptions {
  int iterations = 2000;
  int batch = 16;
  double lr = 3e-4;
  double lambda_e = 5.0;
  std::uint64_t seed = 0;
};

/// Per-iteration progress: iteration index and mean batch loss.
using TrainCallback = std::function<void(int, double)>;

/// Adam on minibatches with one uniform t in [1, T] per graph. Per-graph
/// gradients are computed in parallel and summed in batch order.
std::vector<double> train_diffusion(Network& net, const std::vector<LatentState>& data, const NoiseProcess& np,
                                    const TrainOptions& options, const TrainCallback& callback = nullptr);

}  // namespace lgdc
