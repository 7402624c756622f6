#include "lgdc/network.hpp"

#include "lgdc/error.hpp"

#include <cmath>
#include <numbers>

namespace lgdc {

Eigen::MatrixXd& ParamStore::add(const std::string& name, int rows, int cols, int rank) {
  if (contains(name)) throw Error("ParamStore: duplicate tensor '" + name + "'");
  tensors_.push_back({name, rank, Eigen::MatrixXd::Zero(rows, cols)});
  return tensors_.back().value;
}

std::size_t ParamStore::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    if (tensors_[i].name == name) return i;
  }
  throw Error("ParamStore: no tensor named '" + name + "'");
}

Eigen::MatrixXd& ParamStore::operator[](const std::string& name) { return tensors_[index_of(name)].value; }
const Eigen::MatrixXd& ParamStore::operator[](const std::string& name) const { return tensors_[index_of(name)].value; }

bool ParamStore::contains(const std::string& name) const {
  for (const auto& t : tensors_) {
    if (t.name == name) return true;
  }
  return false;
}

std::size_t ParamStore::scalar_count() const {
  std::size_t total = 0;
  for (const auto& t : tensors_) total += static_cast<std::size_t>(t.value.size());
  return total;
}

ParamStore ParamStore::zeros_like() const {
  ParamStore out;
  for (const auto& t : tensors_) out.tensors_.push_back({t.name, t.rank, Eigen::MatrixXd::Zero(t.value.rows(), t.value.cols())});
  return out;
}

void ParamStore::set_zero() {
  for (auto& t : tensors_) t.value.setZero();
}

void ParamStore::add_scaled(const ParamStore& other, double scale) {
  if (other.tensors_.size() != tensors_.size()) throw Error("ParamStore: layout mismatch");
  for (std::size_t i = 0; i < tensors_.size(); ++i) tensors_[i].value += scale * other.tensors_[i].value;
}

void ParamStore::scale(double factor) {
  for (auto& t : tensors_) t.value *= factor;
}

bool ParamStore::all_finite() const {
  for (const auto& t : tensors_) {
    if (!t.value.allFinite()) return false;
  }
  return true;
}

Eigen::RowVectorXd sinusoidal_features(double u, int count) {
  Eigen::RowVectorXd f(count);
  for (int k = 0; k < count / 2; ++k) {
    const double angle = std::ldexp(1.0, k) * std::numbers::pi * u;
    f(2 * k) = std::sin(angle);
    f(2 * k + 1) = std::cos(angle);
  }
  return f;
}

Eigen::RowVectorXd time_features(int t, int steps) {
  return sinusoidal_features(steps > 0 ? static_cast<double>(t) / steps : 0.0, kTimeFeatures);
}

namespace {

std::string layer_name(int l, const char* part) { return "layer" + std::to_string(l) + "." + part; }

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) { return (1.0 + (-z.array()).exp()).inverse().matrix(); }

/// S_c: indicator of off-diagonal slots carrying category c.
Eigen::MatrixXd category_mask(const Eigen::MatrixXi& cat, int c) {
  Eigen::MatrixXd s = (cat.array() == c).cast<double>().matrix();
  s.diagonal().setZero();
  return s;
}

}  // namespace

Network::Network(const NetworkShape& shape) : shape_(shape) {
  if (shape.node_features < 1 || shape.edge_categories < 1 || shape.hidden < 1 || shape.layers < 0) {
    throw Error("Network: invalid shape");
  }
  const int d = shape.hidden;
  params_.add("node_in", shape.node_features, d);
  if (shape.time_conditioned) params_.add("time_in", kTimeFeatures, d);
  params_.add("in_bias", 1, d, 1);
  params_.add("edge_embed", shape.edge_categories, d);
  for (int l = 0; l < shape.layers; ++l) {
    params_.add(layer_name(l, "msg"), d, d);
    params_.add(layer_name(l, "gate"), d, d);
    params_.add(layer_name(l, "gate_bias"), 1, d, 1);
    params_.add(layer_name(l, "upd"), d, d);
    params_.add(layer_name(l, "upd_bias"), 1, d, 1);
  }
  if (shape.node_classes > 0) {
    params_.add("node_out", d, shape.node_classes);
    params_.add("node_out_bias", 1, shape.node_classes, 1);
  }
  if (shape.edge_classes > 0) {
    params_.add("edge_hidden", 3 * d, d);
    params_.add("edge_hidden_bias", 1, d, 1);
    params_.add("edge_out", d, shape.edge_classes);
    params_.add("edge_out_bias", 1, shape.edge_classes, 1);
  }
}

void Network::initialize(Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(shape_.hidden));
  for (auto& t : params_.tensors()) {
    const bool head = t.name.rfind("node_out", 0) == 0 || t.name.rfind("edge_out", 0) == 0;
    const bool bias = t.rank == 1;
    const bool embedding = t.name == "node_in" || t.name == "edge_embed";
    for (Eigen::Index i = 0; i < t.value.size(); ++i) {
      double v = 0.0;
      if (head || bias) {
        v = 0.0;
      } else if (embedding) {
        v = rng.normal(0.0, 0.02);
      } else {
        v = (2.0 * rng.uniform() - 1.0) * bound;
      }
      t.value.data()[i] = v;
    }
  }
}

NetworkOutput Network::forward(const NetworkInput& in, NetworkCache* cache) const {
  const auto n = in.node_x.rows();
  if (in.node_x.cols() != shape_.node_features) throw Error("Network: node feature width does not match the checkpoint");
  if (in.edge_cat.rows() != n || in.edge_cat.cols() != n) throw Error("Network: edge matrix shape mismatch");
  if (n > 0 && (in.edge_cat.minCoeff() < 0 || in.edge_cat.maxCoeff() >= shape_.edge_categories)) {
    throw Error("Network: edge category out of range");
  }
  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
  const auto& embed = params_["edge_embed"];

  Eigen::MatrixXd h = in.node_x * params_["node_in"];
  Eigen::RowVectorXd tau;
  Eigen::RowVectorXd bias = params_["in_bias"];
  if (shape_.time_conditioned) {
    tau = time_features(in.t, in.steps);
    bias += tau * params_["time_in"];
  }
  h.rowwise() += bias;
  if (cache != nullptr) {
    *cache = NetworkCache{};
    cache->tau = tau;
    cache->h.push_back(h);
  }

  std::vector<Eigen::MatrixXd> masks;
  for (int c = 0; c < shape_.edge_categories; ++c) masks.push_back(category_mask(in.edge_cat, c));

  for (int l = 0; l < shape_.layers; ++l) {
    Eigen::MatrixXd pre_gate = embed * params_[layer_name(l, "gate")];
    pre_gate.rowwise() += params_[layer_name(l, "gate_bias")].row(0);
    const Eigen::MatrixXd gate = sigmoid(pre_gate);
    const Eigen::MatrixXd msg = h * params_[layer_name(l, "msg")];
    Eigen::MatrixXd agg = Eigen::MatrixXd::Zero(n, shape_.hidden);
    for (int c = 0; c < shape_.edge_categories; ++c) {
      agg.noalias() += ((masks[static_cast<std::size_t>(c)] * msg).array().rowwise() * gate.row(c).array()).matrix();
    }
    agg *= inv_n;
    Eigen::MatrixXd z = agg * params_[layer_name(l, "upd")];
    z.rowwise() += params_[layer_name(l, "upd_bias")].row(0);
    const Eigen::MatrixXd upd = z.array().tanh().matrix();
    h += upd;
    if (cache != nullptr) {
      cache->gate.push_back(gate);
      cache->msg.push_back(msg);
      cache->agg.push_back(agg);
      cache->upd.push_back(upd);
      cache->h.push_back(h);
    }
  }

  NetworkOutput out;
  if (shape_.node_classes > 0) {
    out.node_logits = h * params_["node_out"];
    out.node_logits.rowwise() += params_["node_out_bias"].row(0);
  }
  if (shape_.edge_classes > 0) {
    const int d = shape_.hidden;
    const auto p = static_cast<Eigen::Index>(in.pairs.size());
    Eigen::MatrixXd pair_in(p, 3 * d);
    for (Eigen::Index k = 0; k < p; ++k) {
      const auto [i, j] = in.pairs[static_cast<std::size_t>(k)];
      pair_in.block(k, 0, 1, d) = h.row(i).cwiseProduct(h.row(j));
      pair_in.block(k, d, 1, d) = h.row(i) + h.row(j);
      pair_in.block(k, 2 * d, 1, d) = embed.row(in.edge_cat(i, j));
    }
    Eigen::MatrixXd q = pair_in * params_["edge_hidden"];
    q.rowwise() += params_["edge_hidden_bias"].row(0);
    Eigen::MatrixXd r = q.array().tanh().matrix();
    out.edge_logits = r * params_["edge_out"];
    out.edge_logits.rowwise() += params_["edge_out_bias"].row(0);
    if (cache != nullptr) {
      cache->pair_in = std::move(pair_in);
      cache->pair_hidden = std::move(r);
    }
  }
  return out;
}

void Network::backward(const NetworkInput& in, const NetworkCache& cache, const NetworkOutput& upstream,
                       ParamStore& grads) const {
  const auto n = in.node_x.rows();
  const int d = shape_.hidden;
  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
  const auto& embed = params_["edge_embed"];
  const Eigen::MatrixXd& h_last = cache.h.back();
  Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(n, d);

  if (shape_.node_classes > 0 && upstream.node_logits.size() > 0) {
    grads["node_out"].noalias() += h_last.transpose() * upstream.node_logits;
    grads["node_out_bias"] += upstream.node_logits.colwise().sum();
    dh.noalias() += upstream.node_logits * params_["node_out"].transpose();
  }
  if (shape_.edge_classes > 0 && upstream.edge_logits.size() > 0) {
    const Eigen::MatrixXd& r = cache.pair_hidden;
    grads["edge_out"].noalias() += r.transpose() * upstream.edge_logits;
    grads["edge_out_bias"] += upstream.edge_logits.colwise().sum();
    const Eigen::MatrixXd dr = upstream.edge_logits * params_["edge_out"].transpose();
    const Eigen::MatrixXd dq = (dr.array() * (1.0 - r.array().square())).matrix();
    grads["edge_hidden"].noalias() += cache.pair_in.transpose() * dq;
    grads["edge_hidden_bias"] += dq.colwise().sum();
    const Eigen::MatrixXd ds = dq * params_["edge_hidden"].transpose();
    auto& dembed = grads["edge_embed"];
    for (std::size_t k = 0; k < in.pairs.size(); ++k) {
      const auto [i, j] = in.pairs[k];
      const auto row = static_cast<Eigen::Index>(k);
      const Eigen::RowVectorXd dprod = ds.block(row, 0, 1, d);
      const Eigen::RowVectorXd dsum = ds.block(row, d, 1, d);
      const Eigen::RowVectorXd hi = h_last.row(i);
      const Eigen::RowVectorXd hj = h_last.row(j);
      dh.row(i) += dprod.cwiseProduct(hj) + dsum;
      dh.row(j) += dprod.cwiseProduct(hi) + dsum;
      dembed.row(in.edge_cat(i, j)) += ds.block(row, 2 * d, 1, d);
    }
  }

  std::vector<Eigen::MatrixXd> masks;
  for (int c = 0; c < shape_.edge_categories; ++c) masks.push_back(category_mask(in.edge_cat, c));

  for (int l = shape_.layers - 1; l >= 0; --l) {
    const auto ul = static_cast<std::size_t>(l);
    const Eigen::MatrixXd& upd = cache.upd[ul];
    const Eigen::MatrixXd& agg = cache.agg[ul];
    const Eigen::MatrixXd& msg = cache.msg[ul];
    const Eigen::MatrixXd& gate = cache.gate[ul];
    const Eigen::MatrixXd& h_in = cache.h[ul];

    const Eigen::MatrixXd dz = (dh.array() * (1.0 - upd.array().square())).matrix();
    grads[layer_name(l, "upd")].noalias() += agg.transpose() * dz;
    grads[layer_name(l, "upd_bias")] += dz.colwise().sum();
    const Eigen::MatrixXd dagg = inv_n * (dz * params_[layer_name(l, "upd")].transpose());

    Eigen::MatrixXd dmsg = Eigen::MatrixXd::Zero(n, d);
    Eigen::MatrixXd dgate(shape_.edge_categories, d);
    for (int c = 0; c < shape_.edge_categories; ++c) {
      const auto& s = masks[static_cast<std::size_t>(c)];
      dgate.row(c) = (dagg.array() * (s * msg).array()).colwise().sum();
      dmsg.noalias() += s.transpose() * (dagg.array().rowwise() * gate.row(c).array()).matrix();
    }
    const Eigen::MatrixXd dpre = (dgate.array() * gate.array() * (1.0 - gate.array())).matrix();
    grads[layer_name(l, "gate")].noalias() += embed.transpose() * dpre;
    grads[layer_name(l, "gate_bias")] += dpre.colwise().sum();
    grads["edge_embed"].noalias() += dpre * params_[layer_name(l, "gate")].transpose();

    grads[layer_name(l, "msg")].noalias() += h_in.transpose() * dmsg;
    dh.noalias() += dmsg * params_[layer_name(l, "msg")].transpose();
  }

  grads["node_in"].noalias() += in.node_x.transpose() * dh;
  const Eigen::RowVectorXd dbias = dh.colwise().sum();
  grads["in_bias"] += dbias;
  if (shape_.time_conditioned) grads["time_in"].noalias() += cache.tau.transpose() * dbias;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const Eigen::ArrayXd e = (logits.row(i).array() - logits.row(i).maxCoeff()).exp();
    out.row(i) = (e / e.sum()).matrix().transpose();
  }
  return out;
}

Adam::Adam(const ParamStore& params, AdamOptions options)
    : options_(options), m_(params.zeros_like()), v_(params.zeros_like()) {}

bool Adam::step(ParamStore& params, const ParamStore& grads) {
  if (!grads.all_finite()) {
    ++skipped_;
    return false;
  }
  ++t_;
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  auto& pt = params.tensors();
  const auto& gt = grads.tensors();
  auto& mt = m_.tensors();
  auto& vt = v_.tensors();
  if (pt.size() != gt.size() || pt.size() != mt.size()) throw Error("Adam: parameter layout mismatch");
  for (std::size_t k = 0; k < pt.size(); ++k) {
    const auto& g = gt[k].value.array();
    mt[k].value = (options_.beta1 * mt[k].value.array() + (1.0 - options_.beta1) * g).matrix();
    vt[k].value = (options_.beta2 * vt[k].value.array() + (1.0 - options_.beta2) * g.square()).matrix();
    pt[k].value.array() -=
        options_.lr * (mt[k].value.array() / c1) / ((vt[k].value.array() / c2).sqrt() + options_.eps);
  }
  return true;
}

}  // namespace lgdc
