#include "lgdc/diffusion.hpp"

#include "lgdc/coarsening.hpp"
#include "lgdc/error.hpp"

#include <cmath>
#include <numbers>

namespace lgdc {

namespace {

void check_simplex(const Eigen::VectorXd& m, const char* name) {
  if (m.size() < 1) throw Error(std::string("build_noise: ") + name + " is empty");
  if ((m.array() < 0.0).any() || !m.allFinite() || std::abs(m.sum() - 1.0) > 1e-9) {
    throw Error(std::string("build_noise: ") + name + " is not a probability simplex");
  }
}

Eigen::MatrixXd transition(double keep, const Eigen::VectorXd& m) {
  const auto k = m.size();
  Eigen::MatrixXd q = (1.0 - keep) * Eigen::VectorXd::Ones(k) * m.transpose();
  q.diagonal().array() += keep;
  return q;
}

int draw(const Eigen::VectorXd& probs, Rng& rng) {
  return static_cast<int>(rng.categorical(std::span<const double>(probs.data(), static_cast<std::size_t>(probs.size()))));
}

}  // namespace

std::string to_string(NoiseKind kind) { return kind == NoiseKind::uniform ? "uniform" : "marginal"; }

NoiseKind parse_noise_kind(const std::string& text) {
  if (text == "uniform") return NoiseKind::uniform;
  if (text == "marginal") return NoiseKind::marginal;
  throw Error("unknown noise kind '" + text + "' (expected uniform or marginal)");
}

std::vector<double> cosine_alpha_bar(int steps, double s) {
  if (steps < 1) throw Error("cosine_alpha_bar: need at least one step");
  auto f = [&](int t) {
    const double c = std::cos(std::numbers::pi / 2.0 * (static_cast<double>(t) / steps + s) / (1.0 + s));
    return c * c;
  };
  const double f0 = f(0);
  std::vector<double> out(static_cast<std::size_t>(steps) + 1);
  for (int t = 0; t <= steps; ++t) out[static_cast<std::size_t>(t)] = std::max(kMinAlphaBar, f(t) / f0);
  out[0] = 1.0;
  return out;
}

NoiseProcess build_noise(int steps, NoiseKind kind, const Eigen::VectorXd& m_x, const Eigen::VectorXd& m_e) {
  check_simplex(m_x, "node marginal");
  check_simplex(m_e, "edge marginal");
  NoiseProcess np;
  np.steps = steps;
  np.kind = kind;
  np.alpha_bar = cosine_alpha_bar(steps);
  if (kind == NoiseKind::uniform) {
    np.m_x = Eigen::VectorXd::Constant(m_x.size(), 1.0 / static_cast<double>(m_x.size()));
    np.m_e = Eigen::VectorXd::Constant(m_e.size(), 1.0 / static_cast<double>(m_e.size()));
  } else {
    np.m_x = m_x;
    np.m_e = m_e;
  }
  np.qx_step.push_back(Eigen::MatrixXd::Identity(m_x.size(), m_x.size()));
  np.qe_step.push_back(Eigen::MatrixXd::Identity(m_e.size(), m_e.size()));
  np.qx_cum = np.qx_step;
  np.qe_cum = np.qe_step;
  for (int t = 1; t <= steps; ++t) {
    const double keep = np.alpha_bar[static_cast<std::size_t>(t)] / np.alpha_bar[static_cast<std::size_t>(t) - 1];
    np.qx_step.push_back(transition(keep, np.m_x));
    np.qe_step.push_back(transition(keep, np.m_e));
    np.qx_cum.push_back(np.qx_cum.back() * np.qx_step.back());
    np.qe_cum.push_back(np.qe_cum.back() * np.qe_step.back());
  }
  return np;
}

void LatentState::validate(int a, int b) const {
  const int n = num_nodes();
  if (e.rows() != n || e.cols() != n) throw Error("latent state: edge matrix has the wrong shape");
  for (int i = 0; i < n; ++i) {
    if (x[static_cast<std::size_t>(i)] < 0 || x[static_cast<std::size_t>(i)] >= a) {
      throw Error("latent state: node category out of range");
    }
    if (e(i, i) != 0) throw Error("latent state: diagonal edge slot is not 'no edge'");
    for (int j = 0; j < n; ++j) {
      if (e(i, j) < 0 || e(i, j) >= b) throw Error("latent state: edge category out of range");
      if (e(i, j) != e(j, i)) throw Error("latent state: edge matrix is not symmetric");
    }
  }
}

LatentState encode_latent(const Graph& coarse, int a, int b) {
  const int n = coarse.num_nodes();
  LatentState s;
  s.x.assign(static_cast<std::size_t>(n), 0);
  if (coarse.has_labels()) {
    for (int i = 0; i < n; ++i) s.x[static_cast<std::size_t>(i)] = std::min(coarse.labels()[static_cast<std::size_t>(i)], a - 1);
  }
  s.e = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) s.e(i, j) = weight_bucket(coarse.weight(i, j), b);
    }
  }
  return s;
}

Graph decode_latent(const LatentState& state) {
  const int n = state.num_nodes();
  Graph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (state.e(i, j) > 0) g.set_edge(i, j, state.e(i, j));
    }
  }
  g.set_labels(state.x);
  return g;
}

Eigen::VectorXd node_marginal(const std::vector<LatentState>& states, int a) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(a);
  for (const auto& s : states) {
    for (int c : s.x) m(c) += 1.0;
  }
  if (m.sum() <= 0.0) throw Error("node_marginal: no nodes");
  return m / m.sum();
}

Eigen::VectorXd edge_marginal(const std::vector<LatentState>& states, int b) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(b);
  for (const auto& s : states) {
    for (int i = 0; i < s.num_nodes(); ++i) {
      for (int j = i + 1; j < s.num_nodes(); ++j) m(s.e(i, j)) += 1.0;
    }
  }
  if (m.sum() <= 0.0) throw Error("edge_marginal: no node pairs");
  return m / m.sum();
}

LatentState forward_sample(const LatentState& state0, int t, const NoiseProcess& np, Rng& rng) {
  if (t < 0 || t > np.steps) throw Error("forward_sample: timestep out of range");
  LatentState out = state0;
  out.t = t;
  if (t == 0) return out;
  const auto& qx = np.qx_cum[static_cast<std::size_t>(t)];
  const auto& qe = np.qe_cum[static_cast<std::size_t>(t)];
  const int n = state0.num_nodes();
  for (int i = 0; i < n; ++i) out.x[static_cast<std::size_t>(i)] = draw(qx.row(state0.x[static_cast<std::size_t>(i)]).transpose(), rng);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int c = draw(qe.row(state0.e(i, j)).transpose(), rng);
      out.e(i, j) = c;
      out.e(j, i) = c;
    }
  }
  return out;
}

Eigen::VectorXd reverse_posterior(const Eigen::VectorXd& x0_prob, int xt, int t, const std::vector<Eigen::MatrixXd>& step,
                                  const std::vector<Eigen::MatrixXd>& cum) {
  if (t < 1 || t >= static_cast<int>(step.size())) throw Error("reverse_posterior: timestep out of range");
  const auto& qs = step[static_cast<std::size_t>(t)];
  const auto& qprev = cum[static_cast<std::size_t>(t) - 1];
  const auto& qt = cum[static_cast<std::size_t>(t)];
  const Eigen::Index k = qs.rows();
  if (x0_prob.size() != k || xt < 0 || xt >= k) throw Error("reverse_posterior: category mismatch");

  // likelihood(k') = q(x_t | x_{t-1} = k')
  const Eigen::VectorXd likelihood = qs.col(xt);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(k);
  double mass = 0.0;
  for (Eigen::Index c = 0; c < k; ++c) {
    const double norm = qt(c, xt);
    if (x0_prob(c) <= 0.0 || norm <= 0.0) continue;
    out += x0_prob(c) * (likelihood.array() * qprev.row(c).transpose().array()).matrix() / norm;
    mass += x0_prob(c);
  }
  if (mass <= 0.0) throw Error("reverse_posterior: x_t is unreachable from every predicted clean category");
  return out / out.sum();
}

LatentState sample_latent(int n, const NoiseProcess& np, const CleanPredictor& predictor, Rng& rng, SamplingStats* stats) {
  if (n < 1) throw Error("sample_latent: need at least one node");
  LatentState s;
  s.t = np.steps;
  s.x.resize(static_cast<std::size_t>(n));
  s.e = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) s.x[static_cast<std::size_t>(i)] = draw(np.m_x, rng);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      s.e(i, j) = draw(np.m_e, rng);
      s.e(j, i) = s.e(i, j);
    }
  }
  for (int t = np.steps; t >= 1; --t) {
    const CleanPrediction pred = predictor.predict(s, t);
    if (stats != nullptr) {
      ++stats->predictor_calls;
      stats->slot_work += predictor.slots(n);
    }
    LatentState next = s;
    next.t = t - 1;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd post = reverse_posterior(pred.node_probs.row(i).transpose(), s.x[static_cast<std::size_t>(i)], t,
                                                     np.qx_step, np.qx_cum);
      next.x[static_cast<std::size_t>(i)] = draw(post, rng);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Eigen::VectorXd post =
            reverse_posterior(pred.edge_probs.row(i * n + j).transpose(), s.e(i, j), t, np.qe_step, np.qe_cum);
        const int c = draw(post, rng);
        next.e(i, j) = c;
        next.e(j, i) = c;
      }
    }
    s = std::move(next);
  }
  return s;
}

}  // namespace lgdc
