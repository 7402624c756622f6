#include "lgdc/coarsening.hpp"

#include "lgdc/candidates.hpp"
#include "lgdc/error.hpp"
#include "lgdc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lgdc {

Projection Projection::identity(int n) {
  Projection p;
  p.assignment.resize(static_cast<std::size_t>(n));
  std::iota(p.assignment.begin(), p.assignment.end(), 0);
  p.num_coarse = n;
  return p;
}

Eigen::MatrixXd Projection::matrix() const {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(num_coarse, num_fine());
  for (int u = 0; u < num_fine(); ++u) c(assignment[static_cast<std::size_t>(u)], u) = 1.0;
  return c;
}

Projection Projection::then(const Projection& next) const {
  if (next.num_fine() != num_coarse) throw Error("Projection::then: size mismatch");
  Projection out;
  out.num_coarse = next.num_coarse;
  out.assignment.reserve(assignment.size());
  for (int a : assignment) out.assignment.push_back(next.assignment[static_cast<std::size_t>(a)]);
  return out;
}

std::vector<int> Projection::cluster_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(num_coarse), 0);
  for (int a : assignment) ++sizes[static_cast<std::size_t>(a)];
  return sizes;
}

void Projection::validate() const {
  std::vector<char> hit(static_cast<std::size_t>(num_coarse), 0);
  for (int a : assignment) {
    if (a < 0 || a >= num_coarse) throw Error("projection: coarse index " + std::to_string(a) + " out of range");
    hit[static_cast<std::size_t>(a)] = 1;
  }
  for (int a = 0; a < num_coarse; ++a) {
    if (!hit[static_cast<std::size_t>(a)]) throw Error("projection: coarse node " + std::to_string(a) + " is empty");
  }
}

Graph project_graph(const Graph& fine, const Projection& proj) {
  if (proj.num_fine() != fine.num_nodes()) throw Error("project_graph: projection does not match graph size");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(proj.num_coarse, proj.num_coarse);
  for (const Edge& e : fine.edges()) {
    const int a = proj.assignment[static_cast<std::size_t>(e.u)];
    const int b = proj.assignment[static_cast<std::size_t>(e.v)];
    if (a == b) continue;
    w(a, b) += e.weight;
    w(b, a) += e.weight;
  }
  return Graph::from_weights(std::move(w));
}

Contraction contract_edge(const Graph& g, int i, int j) {
  const int n = g.num_nodes();
  if (i < 0 || j < 0 || i >= n || j >= n) throw Error("contract_edge: node out of range");
  if (i == j) throw Error("contract_edge: cannot contract a node with itself");
  if (!g.has_edge(i, j)) {
    throw Error("contract_edge: no edge between " + std::to_string(i) + " and " + std::to_string(j));
  }
  const int keep = std::min(i, j);
  const int drop = std::max(i, j);
  Projection p;
  p.num_coarse = n - 1;
  p.assignment.resize(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    p.assignment[static_cast<std::size_t>(u)] = u == drop ? keep : (u > drop ? u - 1 : u);
  }
  return {project_graph(g, p), std::move(p)};
}

Contraction rec_pass(const Graph& g, Rng& rng, const RecOptions& options) {
  const int n = g.num_nodes();
  struct Cand {
    int u, v;
    double w;
    bool alive;
  };
  std::vector<Cand> cands;
  double phi = 0.0;
  for (const Edge& e : g.edges()) {
    if (options.size_cap > 0 && options.sizes != nullptr &&
        (*options.sizes)[static_cast<std::size_t>(e.u)] + (*options.sizes)[static_cast<std::size_t>(e.v)] >
            options.size_cap) {
      continue;
    }
    cands.push_back({e.u, e.v, e.weight, true});
    phi += e.weight;
  }

  std::vector<int> partner(static_cast<std::size_t>(n), -1);
  const long limit = options.iteration_limit > 0 ? options.iteration_limit : 10L * n;
  std::size_t alive = cands.size();
  int contractions = 0;
  for (long t = 0; t < limit && alive > 0; ++t) {
    if (options.node_floor > 0 && n - contractions <= options.node_floor) break;
    const double r = rng.uniform() * phi;
    double acc = 0.0;
    Cand* hit = nullptr;
    for (Cand& c : cands) {
      if (!c.alive) continue;
      acc += c.w;
      if (r < acc) {
        hit = &c;
        break;
      }
    }
    if (hit == nullptr) continue;
    const int u = hit->u;
    const int v = hit->v;
    partner[static_cast<std::size_t>(u)] = v;
    partner[static_cast<std::size_t>(v)] = u;
    ++contractions;
    for (Cand& c : cands) {
      if (c.alive && (c.u == u || c.v == u || c.u == v || c.v == v)) {
        c.alive = false;
        --alive;
      }
    }
  }

  Projection p;
  p.assignment.assign(static_cast<std::size_t>(n), -1);
  for (int u = 0; u < n; ++u) {
    if (p.assignment[static_cast<std::size_t>(u)] >= 0) continue;
    p.assignment[static_cast<std::size_t>(u)] = p.num_coarse;
    const int v = partner[static_cast<std::size_t>(u)];
    if (v >= 0) p.assignment[static_cast<std::size_t>(v)] = p.num_coarse;
    ++p.num_coarse;
  }
  if (contractions == 0) return {g, std::move(p)};
  return {project_graph(g, p), std::move(p)};
}

int weight_bucket(double w, int buckets) {
  if (w <= 0.0) return 0;
  const long rounded = std::lround(w);
  return static_cast<int>(std::clamp<long>(rounded, 1, buckets - 1));
}

int size_label(int size, int v_max) { return std::min(size, v_max) - 1; }

double spectral_epsilon(const Graph& fine, const Projection& proj, int k, bool normalized_projection) {
  if (proj.num_fine() != fine.num_nodes()) throw Error("spectral_epsilon: projection does not match graph size");
  if (k > proj.num_coarse) throw Error("spectral_epsilon: k exceeds the coarse node count");
  const Eigen::MatrixXd l = laplacian(fine);
  Eigen::MatrixXd c = proj.matrix();
  if (normalized_projection) {
    const auto sizes = proj.cluster_sizes();
    for (int a = 0; a < proj.num_coarse; ++a) c.row(a) /= std::sqrt(static_cast<double>(sizes[static_cast<std::size_t>(a)]));
  }
  const Eigen::MatrixXd lc = c * l * c.transpose();
  const auto spec = eig_sym(l);
  const double scale = std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
  double eps = 0.0;
  int used = 0;
  for (Eigen::Index idx = 0; idx < spec.eigenvalues.size() && used < k; ++idx) {
    const Eigen::VectorXd x = spec.eigenvectors.col(idx);
    const double fine_q = x.dot(l * x);
    if (fine_q <= 1e-8 * scale) continue;
    const Eigen::VectorXd xc = c * x;
    eps = std::max(eps, std::abs(xc.dot(lc * xc) / fine_q - 1.0));
    ++used;
  }
  return eps;
}

std::vector<int> expansion_positions(const Projection& proj) {
  const int n = proj.num_fine();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return proj.assignment[static_cast<std::size_t>(a)] < proj.assignment[static_cast<std::size_t>(b)];
  });
  std::vector<int> position(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) position[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] = p;
  return position;
}

CoarseningResult make_result(const Graph& fine, const Projection& proj, int v_max, int k_eig,
                             bool normalized_projection) {
  proj.validate();
  CoarseningResult out;
  out.proj = proj;
  out.v_star = proj.cluster_sizes();
  out.coarse = project_graph(fine, proj);
  std::vector<int> labels;
  labels.reserve(out.v_star.size());
  for (int s : out.v_star) {
    if (s > v_max) throw Error("cluster of size " + std::to_string(s) + " exceeds v_max=" + std::to_string(v_max));
    labels.push_back(size_label(s, v_max));
  }
  out.coarse.set_labels(std::move(labels));

  const int n = fine.num_nodes();
  out.position = expansion_positions(proj);

  const CandidateSet cands = expand(out.coarse, out.v_star);
  const auto index = cands.index_matrix();
  out.e_star.assign(cands.size(), 0);
  for (const Edge& e : fine.edges()) {
    const auto pu = static_cast<std::size_t>(out.position[static_cast<std::size_t>(e.u)]);
    const auto pv = static_cast<std::size_t>(out.position[static_cast<std::size_t>(e.v)]);
    const int k = index[pu * static_cast<std::size_t>(n) + pv];
    if (k < 0) throw Error("make_result: fine edge missing from the candidate set");
    out.e_star[static_cast<std::size_t>(k)] = 1;
  }
  out.epsilon = spectral_epsilon(fine, proj, std::min(k_eig, proj.num_coarse), normalized_projection);
  return out;
}

CoarseningResult coarsen_to_ratio(const Graph& g, const CoarseningOptions& options, Rng& rng) {
  if (!(options.target_ratio > 0.0 && options.target_ratio <= 1.0)) {
    throw Error("coarsen_to_ratio: target_ratio must lie in (0, 1]");
  }
  if (options.v_max < 1) throw Error("coarsen_to_ratio: v_max must be positive");
  const int n = g.num_nodes();
  const int target = std::max(1, static_cast<int>(std::ceil(options.target_ratio * n - 1e-9)));
  if (target >= n) return make_result(g, Projection::identity(n), options.v_max, options.k_eig, options.normalized_projection);

  int best = n;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    Rng attempt_rng = rng.split(static_cast<std::uint64_t>(attempt));
    Graph current = g;
    Projection proj = Projection::identity(n);
    std::vector<int> sizes(static_cast<std::size_t>(n), 1);
    while (current.num_nodes() > target) {
      RecOptions rec;
      rec.iteration_limit = options.iteration_limit;
      rec.node_floor = target;
      rec.size_cap = options.v_max;
      rec.sizes = &sizes;
      Contraction step = rec_pass(current, attempt_rng, rec);
      if (step.proj.num_coarse == current.num_nodes()) break;
      proj = proj.then(step.proj);
      current = std::move(step.graph);
      sizes = proj.cluster_sizes();
    }
    best = std::min(best, current.num_nodes());
    if (current.num_nodes() <= target) {
      auto result = make_result(g, proj, options.v_max, options.k_eig, options.normalized_projection);
      result.attempts = attempt + 1;
      return result;
    }
  }
  throw Error("coarsen_to_ratio: v_max=" + std::to_string(options.v_max) + " blocks reaching n_c <= " +
              std::to_string(target) + " (best " + std::to_string(best) + " of " + std::to_string(n) + " nodes after " +
              std::to_string(options.max_attempts) + " attempts)");
}

}  // namespace lgdc
