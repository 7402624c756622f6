#include "lgdc/expansion.hpp"

#include "lgdc/error.hpp"
#include "lgdc/parallel.hpp"

#include <spdlog/spdlog.h>

#include <cmath>

namespace lgdc {

namespace {

NetworkShape v_shape(int v_max, int buckets, int hidden, int layers) {
  NetworkShape s;
  s.node_features = v_max;
  s.edge_categories = buckets;
  s.hidden = hidden;
  s.layers = layers;
  s.node_classes = v_max;
  s.time_conditioned = false;
  return s;
}

NetworkShape e_shape(int v_max, int buckets, int hidden, int layers) {
  NetworkShape s;
  s.node_features = v_max + kNoiseFeatures;
  s.edge_categories = buckets + 1;
  s.hidden = hidden;
  s.layers = layers;
  s.edge_classes = 2;
  s.time_conditioned = false;
  return s;
}

Eigen::VectorXd uniform_noise(int n, Rng& rng) {
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u(i) = rng.uniform();
  return u;
}

double log_sum_exp(const Eigen::RowVectorXd& row) {
  const double m = row.maxCoeff();
  return m + std::log((row.array() - m).exp().sum());
}

double positive_weight_of(const std::vector<std::uint8_t>& mask) {
  std::size_t positives = 0;
  for (auto b : mask) positives += b;
  if (positives == 0) return 1.0;
  return static_cast<double>(mask.size()) / (2.0 * static_cast<double>(positives));
}

}  // namespace

int candidate_category(const Candidate& c, const Graph& coarse, int buckets) {
  if (c.intra()) return 1;
  return 1 + weight_bucket(coarse.weight(c.cluster_u, c.cluster_v), buckets);
}

Expander make_expander(int v_max, int buckets, int hidden, int layers, Rng& rng) {
  Expander m;
  m.v_max = v_max;
  m.buckets = buckets;
  m.v_net = Network(v_shape(v_max, buckets, hidden, layers));
  m.e_net = Network(e_shape(v_max, buckets, hidden, layers));
  Rng v_rng = rng.split(0);
  Rng e_rng = rng.split(1);
  m.v_net.initialize(v_rng);
  m.e_net.initialize(e_rng);
  return m;
}

NetworkInput v_input(const Graph& coarse, int v_max, int buckets) {
  const int n = coarse.num_nodes();
  NetworkInput in;
  in.node_x = Eigen::MatrixXd::Zero(n, v_max);
  for (int i = 0; i < n; ++i) {
    const int label = coarse.has_labels() ? coarse.labels()[static_cast<std::size_t>(i)] : 0;
    in.node_x(i, std::clamp(label, 0, v_max - 1)) = 1.0;
  }
  in.edge_cat = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) in.edge_cat(i, j) = weight_bucket(coarse.weight(i, j), buckets);
    }
  }
  return in;
}

NetworkInput e_input(const Graph& coarse, const CandidateSet& cands, int v_max, int buckets,
                     const Eigen::VectorXd& noise) {
  const int n = cands.num_nodes();
  if (noise.size() != n) throw Error("e_input: noise vector does not match the skeleton size");
  NetworkInput in;
  in.node_x = Eigen::MatrixXd::Zero(n, v_max + kNoiseFeatures);
  for (int i = 0; i < n; ++i) {
    const int size = cands.sizes[static_cast<std::size_t>(cands.cluster_of[static_cast<std::size_t>(i)])];
    in.node_x(i, size_label(size, v_max)) = 1.0;
    in.node_x.block(i, v_max, 1, kNoiseFeatures) = sinusoidal_features(noise(i), kNoiseFeatures);
  }
  in.edge_cat = Eigen::MatrixXi::Zero(n, n);
  in.pairs.reserve(cands.size());
  for (const Candidate& c : cands.edges) {
    const int cat = candidate_category(c, coarse, buckets);
    in.edge_cat(c.u, c.v) = cat;
    in.edge_cat(c.v, c.u) = cat;
    in.pairs.emplace_back(c.u, c.v);
  }
  return in;
}

std::vector<int> predict_v(const Expander& model, const Graph& coarse, Rng& rng, double temperature) {
  const NetworkInput in = v_input(coarse, model.v_max, model.buckets);
  const Eigen::MatrixXd logits = model.v_net.forward(in).node_logits;
  std::vector<int> v(static_cast<std::size_t>(coarse.num_nodes()));
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index best = 0;
    if (temperature <= 0.0) {
      logits.row(i).maxCoeff(&best);
    } else {
      const Eigen::MatrixXd p = softmax_rows(logits.row(i) / temperature);
      best = static_cast<Eigen::Index>(rng.categorical(std::span<const double>(p.data(), static_cast<std::size_t>(p.size()))));
    }
    v[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
  }
  return v;
}

Eigen::VectorXd edge_probabilities(const Expander& model, const Graph& coarse, const CandidateSet& cands,
                                   const Eigen::VectorXd& noise, double temperature) {
  const NetworkInput in = e_input(coarse, cands, model.v_max, model.buckets, noise);
  const Eigen::MatrixXd logits = model.e_net.forward(in).edge_logits;
  const double shift = std::log(model.positive_weight);
  Eigen::VectorXd p(logits.rows());
  for (Eigen::Index k = 0; k < logits.rows(); ++k) {
    const double z = logits(k, 1) - logits(k, 0) - shift;
    if (temperature <= 0.0) {
      p(k) = z > 0.0 ? 1.0 : (z < 0.0 ? 0.0 : 0.5);
    } else {
      p(k) = 1.0 / (1.0 + std::exp(-z / temperature));
    }
  }
  return p;
}

std::vector<std::uint8_t> predict_e(const Expander& model, const Graph& coarse, const CandidateSet& cands, Rng& rng,
                                    double temperature, const Eigen::VectorXd* noise) {
  const Eigen::VectorXd u = noise != nullptr ? *noise : uniform_noise(cands.num_nodes(), rng);
  const Eigen::VectorXd p = edge_probabilities(model, coarse, cands, u, temperature);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(p.size()));
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    mask[static_cast<std::size_t>(k)] = temperature <= 0.0 ? (p(k) > 0.5 ? 1 : 0) : (rng.bernoulli(p(k)) ? 1 : 0);
  }
  return mask;
}

DecodeResult decode(const Expander& model, const Graph& latent, Rng& rng, double temperature) {
  DecodeResult out;
  out.v = predict_v(model, latent, rng, temperature);
  const CandidateSet cands = expand(latent, out.v);
  out.candidates = cands.size();
  const double expected_m = model.edges_per_node * cands.num_nodes();
  if (expected_m > 0.0 && static_cast<double>(cands.size()) > 4.0 * expected_m) {
    out.dense_warning = true;
    spdlog::warn("decode: {} candidate edges for {} nodes exceeds 4x the expected {:.1f} edges", cands.size(),
                 cands.num_nodes(), expected_m);
  }
  out.graph = refine(cands, predict_e(model, latent, cands, rng, temperature));
  return out;
}

ExpansionExample to_example(const CoarseningResult& result) { return {result.coarse, result.v_star, result.e_star}; }

ExpanderLoss expander_loss(const Expander& model, const ExpansionExample& ex, const Eigen::VectorXd& noise,
                           ParamStore* v_grads, ParamStore* e_grads) {
  ExpanderLoss loss;
  const int n_c = ex.coarse.num_nodes();
  for (int s : ex.v_star) {
    if (s < 1 || s > model.v_max) {
      throw Error("expander_loss: cluster size " + std::to_string(s) + " outside [1, v_max=" + std::to_string(model.v_max) + "]");
    }
  }

  {
    const NetworkInput in = v_input(ex.coarse, model.v_max, model.buckets);
    NetworkCache cache;
    const NetworkOutput out = model.v_net.forward(in, v_grads != nullptr ? &cache : nullptr);
    NetworkOutput up;
    up.node_logits = softmax_rows(out.node_logits);
    for (int i = 0; i < n_c; ++i) {
      const int target = ex.v_star[static_cast<std::size_t>(i)] - 1;
      loss.v_loss += log_sum_exp(out.node_logits.row(i)) - out.node_logits(i, target);
      up.node_logits(i, target) -= 1.0;
    }
    if (n_c > 0) {
      loss.v_loss /= n_c;
      up.node_logits /= n_c;
    }
    if (v_grads != nullptr) model.v_net.backward(in, cache, up, *v_grads);
  }

  const CandidateSet cands = expand(ex.coarse, ex.v_star);
  if (cands.size() != ex.e_star.size()) throw Error("expander_loss: e_star does not match the candidate set");
  if (cands.size() == 0) return loss;
  loss.positive_weight = positive_weight_of(ex.e_star);
  const NetworkInput in = e_input(ex.coarse, cands, model.v_max, model.buckets, noise);
  NetworkCache cache;
  const NetworkOutput out = model.e_net.forward(in, e_grads != nullptr ? &cache : nullptr);
  NetworkOutput up;
  up.edge_logits = softmax_rows(out.edge_logits);
  const double denom = static_cast<double>(cands.size());
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    const int target = ex.e_star[k];
    const double w = target ? loss.positive_weight : 1.0;
    loss.e_loss += w * (log_sum_exp(out.edge_logits.row(row)) - out.edge_logits(row, target));
    up.edge_logits(row, target) -= 1.0;
    up.edge_logits.row(row) *= w / denom;
  }
  loss.e_loss /= denom;
  if (e_grads != nullptr) model.e_net.backward(in, cache, up, *e_grads);
  return loss;
}

std::vector<double> train_expander(Expander& model, const std::vector<ExpansionExample>& data,
                                   const ExpanderTrainOptions& options, const TrainCallback& callback) {
  if (data.empty()) throw Error("train_expander: no supervision pairs");
  if (options.batch < 1 || options.iterations < 0) throw Error("train_expander: invalid batch or iteration count");

  double weight_sum = 0.0;
  double edges = 0.0;
  double nodes = 0.0;
  for (const auto& ex : data) {
    weight_sum += positive_weight_of(ex.e_star);
    for (auto b : ex.e_star) edges += b;
    for (int s : ex.v_star) nodes += s;
  }
  model.positive_weight = weight_sum / static_cast<double>(data.size());
  model.edges_per_node = nodes > 0.0 ? edges / nodes : 0.0;

  Adam v_adam(model.v_net.params(), {.lr = options.lr});
  Adam e_adam(model.e_net.params(), {.lr = options.lr});
  const Rng root(options.seed);
  const auto batch = static_cast<std::size_t>(options.batch);
  std::vector<ParamStore> vg(batch, model.v_net.params().zeros_like());
  std::vector<ParamStore> eg(batch, model.e_net.params().zeros_like());
  std::vector<double> losses(batch);
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(options.iterations));

  for (int it = 0; it < options.iterations; ++it) {
    const Rng step_rng = root.split(static_cast<std::uint64_t>(it));
    parallel_for(batch, [&](std::size_t k) {
      Rng rng = step_rng.split(k);
      const auto& ex = data[static_cast<std::size_t>(rng.below(data.size()))];
      int n = 0;
      for (int s : ex.v_star) n += s;
      const Eigen::VectorXd noise = uniform_noise(n, rng);
      vg[k].set_zero();
      eg[k].set_zero();
      losses[k] = expander_loss(model, ex, noise, &vg[k], &eg[k]).total();
    });
    ParamStore v_total = vg[0];
    ParamStore e_total = eg[0];
    double mean = losses[0];
    for (std::size_t k = 1; k < batch; ++k) {
      v_total.add_scaled(vg[k], 1.0);
      e_total.add_scaled(eg[k], 1.0);
      mean += losses[k];
    }
    v_total.scale(1.0 / static_cast<double>(batch));
    e_total.scale(1.0 / static_cast<double>(batch));
    mean /= static_cast<double>(batch);
    if (!v_adam.step(model.v_net.params(), v_total)) spdlog::warn("expander step {}: non-finite size gradient, update skipped", it);
    if (!e_adam.step(model.e_net.params(), e_total)) spdlog::warn("expander step {}: non-finite edge gradient, update skipped", it);
    curve.push_back(mean);
    if (callback) callback(it, mean);
  }
  return curve;
}

}  // namespace lgdc
