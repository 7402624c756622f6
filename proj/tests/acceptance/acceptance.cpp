// Acceptance run: one PASS/FAIL line per criterion. Exits non-zero when any
// criterion fails.

#include "lgdc/algorithms.hpp"
#include "lgdc/candidates.hpp"
#include "lgdc/coarsening.hpp"
#include "lgdc/config.hpp"
#include "lgdc/datasets.hpp"
#include "lgdc/denoiser.hpp"
#include "lgdc/diffusion.hpp"
#include "lgdc/expansion.hpp"
#include "lgdc/flops.hpp"
#include "lgdc/graphlets.hpp"
#include "lgdc/metrics.hpp"
#include "lgdc/network.hpp"
#include "lgdc/pipeline.hpp"
#include "lgdc/spectral.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <unistd.h>

namespace lgdc {
namespace {

namespace fs = std::filesystem;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << what << " (" << detail << ")"
            << std::endl;
}

std::string fmt_double(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

constexpr Family kFamilies[] = {Family::tree, Family::planar, Family::community20};

struct FamilyData {
  RunConfig config;
  std::vector<Graph> graphs;
  std::vector<PairRecord> pairs;
  double first_hundred_seconds = 0.0;
};

std::vector<FamilyData> build_family_data() {
  std::vector<FamilyData> out;
  for (Family f : kFamilies) {
    FamilyData d;
    d.config = RunConfig::defaults(f);
    d.graphs = generate_dataset(d.config.dataset_spec());
    const auto options = d.config.coarsening_options();
    const Rng base = Rng(d.config.seed).split(2);
    const auto start = Clock::now();
    for (std::size_t i = 0; i < d.graphs.size(); ++i) {
      if (i == 100) d.first_hundred_seconds = seconds_since(start);
      Rng rng = base.split(i);
      d.pairs.push_back({d.graphs[i], coarsen_to_ratio(d.graphs[i], options, rng)});
    }
    if (d.graphs.size() <= 100) d.first_hundred_seconds = seconds_since(start);
    out.push_back(std::move(d));
  }
  return out;
}

void criterion1(const std::vector<FamilyData>& data) {
  long checked = 0;
  long passed = 0;
  double worst_residual = 0.0;
  double seconds = 0.0;
  for (const auto& d : data) {
    seconds += d.first_hundred_seconds;
    for (std::size_t i = 0; i < 100 && i < d.pairs.size(); ++i) {
      const auto& fine = d.pairs[i].fine;
      const auto& r = d.pairs[i].result;
      const Eigen::MatrixXd c = r.proj.matrix();
      const Eigen::MatrixXd lc = laplacian(r.coarse);
      const double residual = (lc - c * laplacian(fine) * c.transpose()).cwiseAbs().maxCoeff();
      worst_residual = std::max(worst_residual, residual);
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(lc).eigenvalues();
      long sum_v = 0;
      for (int v : r.v_star) sum_v += v;
      const bool ok = residual <= 1e-12 && ev.minCoeff() >= -1e-9 &&
                      (!is_connected(fine) || is_connected(r.coarse)) && sum_v == fine.num_nodes();
      ++checked;
      if (ok) ++passed;
    }
  }
  report(1, passed == checked && checked == 300 && seconds < 30.0, "coarsening correctness",
         std::to_string(passed) + "/" + std::to_string(checked) + " graphs, max |L_c - C L C^T| " +
             fmt_double(worst_residual) + ", " + fmt_double(seconds) + " s");
}

bool reconstructs(const PairRecord& pair) {
  const auto& r = pair.result;
  const auto cands = expand(r.coarse, r.v_star);
  const Graph rebuilt = refine(cands, r.e_star);
  const Graph& fine = pair.fine;
  if (rebuilt.num_nodes() != fine.num_nodes() || rebuilt.num_edges() != fine.num_edges()) return false;
  for (const auto& e : fine.edges()) {
    if (!rebuilt.has_edge(r.position[e.u], r.position[e.v])) return false;
  }
  return true;
}

void criterion2(const std::vector<FamilyData>& data) {
  long checked = 0;
  long passed = 0;
  for (const auto& d : data) {
    for (const auto& pair : d.pairs) {
      ++checked;
      if (reconstructs(pair)) ++passed;
    }
    // The same check through the written artifact format.
    std::stringstream file;
    write_pairs(file, d.pairs, {});
    for (const auto& pair : read_pairs(file)) {
      ++checked;
      if (reconstructs(pair)) ++passed;
    }
  }
  report(2, passed == checked, "round-trip reconstruction",
         std::to_string(passed) + "/" + std::to_string(checked) + " pairs incl. re-read artifacts");
}

void criterion3() {
  // Full latent state on two nodes: (x_0, x_1, e_01), each in {0, 1}.
  constexpr int kSteps = 3;
  constexpr int kStates = 8;
  double chain_error = 0.0;
  double bayes_error = 0.0;
  double row_error = 0.0;
  for (NoiseKind kind : {NoiseKind::uniform, NoiseKind::marginal}) {
    Eigen::VectorXd mx(2), me(2);
    mx << 0.7, 0.3;
    me << 0.8, 0.2;
    const auto np = build_noise(kSteps, kind, mx, me);
    auto slot = [](int s, int k) { return (s >> k) & 1; };
    auto joint = [&](const std::vector<Eigen::MatrixXd>& qx, const std::vector<Eigen::MatrixXd>& qe, int t, int from,
                     int to) {
      return qx[t](slot(from, 0), slot(to, 0)) * qx[t](slot(from, 1), slot(to, 1)) * qe[t](slot(from, 2), slot(to, 2));
    };
    for (int t = 0; t <= kSteps; ++t) {
      for (const auto* m : {&np.qx_step[t], &np.qe_step[t], &np.qx_cum[t], &np.qe_cum[t]}) {
        row_error = std::max(row_error, (m->rowwise().sum().array() - 1.0).abs().maxCoeff());
      }
    }
    // reach[t][x0][s]: probability of state s at step t, summed over every path.
    std::vector<std::array<std::array<double, kStates>, kStates>> reach(kSteps + 1);
    for (int x0 = 0; x0 < kStates; ++x0) {
      for (int t = 1; t <= kSteps; ++t) {
        std::array<double, kStates> acc{};
        long paths = 1;
        for (int s = 0; s < t; ++s) paths *= kStates;
        for (long path = 0; path < paths; ++path) {
          double p = 1.0;
          int prev = x0;
          long code = path;
          for (int s = 1; s <= t; ++s) {
            const int next = static_cast<int>(code % kStates);
            code /= kStates;
            p *= joint(np.qx_step, np.qe_step, s, prev, next);
            prev = next;
          }
          acc[prev] += p;
        }
        reach[t][x0] = acc;
        for (int s = 0; s < kStates; ++s) {
          chain_error = std::max(chain_error, std::abs(acc[s] - joint(np.qx_cum, np.qe_cum, t, x0, s)));
        }
      }
    }
    for (int x0 = 0; x0 < kStates; ++x0) reach[0][x0] = {}, reach[0][x0][x0] = 1.0;
    // Bayes oracle q(x_{t-1} | x_t, x_0) from the enumerated chain, against the
    // per-slot posterior with a point-mass x0 prediction.
    Rng rng(11);
    for (int t = 1; t <= kSteps; ++t) {
      for (int xt = 0; xt < kStates; ++xt) {
        std::array<Eigen::VectorXd, 3> mix_prob;
        for (auto& p : mix_prob) {
          p = Eigen::VectorXd(2);
          p(0) = rng.uniform();
          p(1) = 1.0 - p(0);
        }
        std::array<double, kStates> mixture{};
        for (int x0 = 0; x0 < kStates; ++x0) {
          const double evidence = reach[t][x0][xt];
          std::array<double, kStates> oracle{};
          for (int prev = 0; prev < kStates; ++prev) {
            oracle[prev] = reach[t - 1][x0][prev] * joint(np.qx_step, np.qe_step, t, prev, xt) / evidence;
          }
          std::array<Eigen::VectorXd, 3> post;
          for (int k = 0; k < 3; ++k) {
            const auto& step = k < 2 ? np.qx_step : np.qe_step;
            const auto& cum = k < 2 ? np.qx_cum : np.qe_cum;
            post[k] = reverse_posterior(Eigen::VectorXd::Unit(2, slot(x0, k)), slot(xt, k), t, step, cum);
            row_error = std::max(row_error, std::abs(post[k].sum() - 1.0));
          }
          const double weight = mix_prob[0](slot(x0, 0)) * mix_prob[1](slot(x0, 1)) * mix_prob[2](slot(x0, 2));
          for (int prev = 0; prev < kStates; ++prev) {
            const double mine = post[0](slot(prev, 0)) * post[1](slot(prev, 1)) * post[2](slot(prev, 2));
            bayes_error = std::max(bayes_error, std::abs(mine - oracle[prev]));
            mixture[prev] += weight * oracle[prev];
          }
        }
        std::array<Eigen::VectorXd, 3> post;
        for (int k = 0; k < 3; ++k) {
          const auto& step = k < 2 ? np.qx_step : np.qe_step;
          const auto& cum = k < 2 ? np.qx_cum : np.qe_cum;
          post[k] = reverse_posterior(mix_prob[k], slot(xt, k), t, step, cum);
          row_error = std::max(row_error, std::abs(post[k].sum() - 1.0));
        }
        for (int prev = 0; prev < kStates; ++prev) {
          const double mine = post[0](slot(prev, 0)) * post[1](slot(prev, 1)) * post[2](slot(prev, 2));
          bayes_error = std::max(bayes_error, std::abs(mine - mixture[prev]));
        }
      }
    }
  }
  report(3, chain_error <= 1e-15 && bayes_error <= 1e-12 && row_error <= 1e-9, "diffusion exactness at micro scale",
         "chain " + fmt_double(chain_error) + ", posterior " + fmt_double(bayes_error) + ", row sums " +
             fmt_double(row_error));
}

struct GradientRun {
  testing::GradCheck worst;
  double seconds = 0.0;
};

// Checks the denoiser and both expander networks on `probes` random (state, t)
// probes. `samples` = 0 checks every scalar; otherwise that many per network.
GradientRun gradient_run(int hidden, int layers, int probes, int samples, std::uint64_t seed) {
  const auto start = Clock::now();
  const RunConfig cfg = RunConfig::defaults(Family::community20);
  const int a = cfg.v_max;
  const int b = cfg.edge_buckets;
  Rng rng(seed);
  // Every tensor is perturbed at the fan-in scale so heads and biases carry
  // nonzero gradients without saturating tanh.
  const double sd = 1.0 / std::sqrt(static_cast<double>(hidden));
  Network denoiser(denoiser_shape(a, b, hidden, layers));
  testing::randomize(denoiser.params(), rng, sd);
  Expander expander = make_expander(cfg.v_max, b, hidden, layers, rng);
  testing::randomize(expander.v_net.params(), rng, sd);
  testing::randomize(expander.e_net.params(), rng, sd);

  const Eigen::VectorXd mx = Eigen::VectorXd::Constant(a, 1.0 / a);
  const Eigen::VectorXd me = Eigen::VectorXd::Constant(b, 1.0 / b);
  const auto np = build_noise(cfg.steps, cfg.noise_kind, mx, me);

  auto spec = cfg.dataset_spec();
  spec.count = probes;
  spec.seed = seed;
  const auto pairs = coarsen_dataset(generate_dataset(spec), cfg.coarsening_options(), seed, 2);

  auto check = [&](ParamStore& params, const ParamStore& grads, const auto& loss) {
    return samples == 0 ? testing::check_gradients(params, grads, loss)
                        : testing::check_sampled_gradients(params, grads, loss, samples, rng);
  };
  GradientRun out;
  for (int probe = 0; probe < probes; ++probe) {
    const LatentState clean = encode_latent(pairs[probe].result.coarse, a, b);
    const int t = rng.range(1, cfg.steps);
    const LatentState noisy = forward_sample(clean, t, np, rng);
    ParamStore grads = denoiser.params().zeros_like();
    denoising_loss(denoiser, noisy, clean, cfg.steps, cfg.lambda_e, &grads);
    const auto d = check(denoiser.params(), grads, [&] {
      return denoising_loss(denoiser, noisy, clean, cfg.steps, cfg.lambda_e, nullptr).loss;
    });

    const ExpansionExample ex = to_example(pairs[probe].result);
    Eigen::VectorXd noise(pairs[probe].fine.num_nodes());
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = rng.uniform();
    ParamStore vg = expander.v_net.params().zeros_like();
    ParamStore eg = expander.e_net.params().zeros_like();
    expander_loss(expander, ex, noise, &vg, &eg);
    auto loss = [&] { return expander_loss(expander, ex, noise, nullptr, nullptr).total(); };
    const auto v = check(expander.v_net.params(), vg, loss);
    const auto e = check(expander.e_net.params(), eg, loss);
    for (const auto* r : {&d, &v, &e}) {
      out.worst.checked += r->checked;
      if (r->max_rel_error > out.worst.max_rel_error) {
        out.worst.max_rel_error = r->max_rel_error;
        out.worst.worst = r->worst;
      }
    }
  }
  out.seconds = seconds_since(start);
  return out;
}

void criterion4() {
  // Every scalar at a reduced width (a full check of the default 64 x 4 networks
  // needs about 4 x 180k forward passes per probe), plus a sampled check at the
  // default width.
  const auto full = gradient_run(16, 3, 10, 0, 21);
  const RunConfig cfg = RunConfig::defaults(Family::community20);
  const auto sampled = gradient_run(cfg.hidden, cfg.layers, 2, 500, 22);
  const double seconds = full.seconds + sampled.seconds;
  const double worst = std::max(full.worst.max_rel_error, sampled.worst.max_rel_error);
  const std::string where = full.worst.max_rel_error >= sampled.worst.max_rel_error ? full.worst.worst : sampled.worst.worst;
  report(4, worst < 1e-4 && seconds < 300.0, "gradient fidelity",
         std::to_string(full.worst.checked) + " scalars (all, hidden 16, 3 layers, 10 probes) + " +
             std::to_string(sampled.worst.checked) + " sampled at hidden " + std::to_string(cfg.hidden) + ", " +
             std::to_string(cfg.layers) + " layers; max rel error " + fmt_double(worst) +
             (where.empty() ? "" : " at " + where) + ", " + fmt_double(seconds) + " s");
}

void criterion5() {
  bool ok = flops_autoregressive(3, 2) == 14.0 && flops_autoregressive_times_6t(3, 2) == 6 * 2 * 14;
  Rng rng(5);
  int exact = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::int64_t steps = rng.range(1, 200);
    const std::int64_t n = 1 + steps * rng.range(1, 50);
    Int128 direct = 0;
    for (std::int64_t t = 0; t <= steps; ++t) {
      const Int128 size_times_t = steps + t * (n - 1);
      direct += size_times_t * size_times_t;
    }
    if (steps * flops_autoregressive_times_6t(n, steps) == 6 * direct) ++exact;
  }
  ok = ok && exact == 50;
  double min_speedup = 1e300;
  bool monotone = true;
  for (std::int64_t n = 4; n <= 256; ++n) {
    for (std::int64_t n_c = 1; 3 * n_c <= n; ++n_c) {
      double prev = 0.0;
      for (std::int64_t steps : {n, n + 1, 2 * n, 5 * n, 10 * n, 100 * n}) {
        const double s = static_cast<double>(flops_oneshot(n, steps)) / static_cast<double>(flops_lgdc(n, n_c, steps));
        min_speedup = std::min(min_speedup, s);
        if (s < prev) monotone = false;
        prev = s;
      }
    }
  }
  ok = ok && min_speedup >= 3.0 && monotone;
  const double small = static_cast<double>(flops_oneshot(3, 3)) / static_cast<double>(flops_lgdc(3, 1, 3));
  report(5, ok, "complexity formulas",
         "worked case 14, " + std::to_string(exact) + "/50 exact, min speedup " + fmt_double(min_speedup) +
             " over n=4..256 with n_c <= n/3 and T >= n; n=3, T=3 gives " + fmt_double(small) + "x");
}

bool graphlets_match(const Graph& g) {
  const auto oracle = testing::brute_force_graphlets(g);
  return orbit_counts(g) == oracle.orbits && motif_counts(g) == oracle.motifs;
}

void criterion6() {
  long checked = 0;
  long matched = 0;
  for (int n = 1; n <= 7; ++n) {
    const std::uint64_t codes = std::uint64_t{1} << (n * (n - 1) / 2);
    for (std::uint64_t code = 0; code < codes; ++code) {
      ++checked;
      if (graphlets_match(testing::graph_from_code(n, code))) ++matched;
    }
  }
  Rng rng(6);
  for (int n = 8; n <= 10; ++n) {
    for (int k = 0; k < 5000; ++k) {
      ++checked;
      if (graphlets_match(testing::random_graph(n, rng.uniform(), rng))) ++matched;
    }
  }

  bool self_zero = true;
  for (Family f : kFamilies) {
    auto spec = DatasetSpec::defaults(f);
    spec.count = 12;
    spec.seed = 60;
    const auto graphs = generate_dataset(spec);
    for (StatKind kind : kAllStats) {
      if (mmd(kind, graphs, graphs) != 0.0) self_zero = false;
    }
  }

  const RunConfig tree = RunConfig::defaults(Family::tree);
  const auto all = generate_dataset(tree.dataset_spec());
  const std::vector<Graph> train(all.begin(), all.begin() + tree.train_count);
  const std::vector<Graph> test(all.begin() + tree.train_count, all.end());
  const double degree = mmd(StatKind::degree, train, test);
  const bool in_band = degree >= 0.0002 / 10.0 && degree <= 0.0002 * 10.0;

  report(6, matched == checked && self_zero && in_band, "metric oracles",
         std::to_string(matched) + "/" + std::to_string(checked) +
             " graphlet checks (all graphs n<=7, random n=8..10), self-MMD " + (self_zero ? "0" : "nonzero") +
             ", tree degree MMD " + fmt_double(degree));
}

Graph subdivided_kuratowski(bool k5, Rng& rng) {
  Graph base = k5 ? Graph(5) : Graph(6);
  if (k5) {
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) base.set_edge(i, j, 1.0);
  } else {
    for (int i = 0; i < 3; ++i)
      for (int j = 3; j < 6; ++j) base.set_edge(i, j, 1.0);
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : base.edges()) edges.emplace_back(e.u, e.v);
  int n = base.num_nodes();
  const int splits = rng.range(1, 12);
  for (int s = 0; s < splits; ++s) {
    const auto k = static_cast<std::size_t>(rng.below(edges.size()));
    const auto [u, v] = edges[k];
    edges[k] = {u, n};
    edges.emplace_back(n, v);
    ++n;
  }
  const auto perm = testing::random_permutation(n, rng);
  Graph g(n);
  for (const auto& [u, v] : edges) g.set_edge(perm[u], perm[v], 1.0);
  return g;
}

void criterion7() {
  Rng rng(7);
  int trees_ok = 0;
  int extra_rejected = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = k < 500 ? 64 : rng.range(3, 64);
    Graph t = gen_tree(n, rng);
    if (is_tree(t)) ++trees_ok;
    int u = 0, v = 0;
    do {
      u = rng.range(0, n - 1);
      v = rng.range(0, n - 1);
    } while (u == v || t.has_edge(u, v));
    t.set_edge(std::min(u, v), std::max(u, v), 1.0);
    if (!is_tree(t)) ++extra_rejected;
  }
  int delaunay_ok = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = k < 500 ? 64 : rng.range(3, 128);
    if (is_planar(gen_planar(n, rng))) ++delaunay_ok;
  }
  int kuratowski_rejected = 0;
  Graph k5(5), k33(6);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) k5.set_edge(i, j, 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) k33.set_edge(i, j, 1.0);
  const bool base_rejected = !is_planar(k5) && !is_planar(k33);
  for (int k = 0; k < 20; ++k) {
    if (!is_planar(subdivided_kuratowski(k % 2 == 0, rng))) ++kuratowski_rejected;
  }
  report(7, trees_ok == 1000 && extra_rejected == 1000 && delaunay_ok == 1000 && base_rejected && kuratowski_rejected == 20,
         "validity checkers",
         "trees " + std::to_string(trees_ok) + "/1000, tree+edge rejected " + std::to_string(extra_rejected) +
             "/1000, Delaunay planar " + std::to_string(delaunay_ok) + "/1000, K5/K3,3 " +
             (base_rejected ? "rejected" : "accepted") + ", subdivisions rejected " +
             std::to_string(kuratowski_rejected) + "/20");
}

std::map<std::string, std::string> read_kv(const fs::path& p) {
  std::map<std::string, std::string> kv;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

fs::path e2e_dir;

void criterion8() {
  const auto start = Clock::now();
  const RunConfig cfg = RunConfig::defaults(Family::community20);
  e2e_dir = fs::temp_directory_path() / ("lgdc_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(e2e_dir);
  bool completed = true;
  std::string error;
  try {
    Pipeline p(cfg, e2e_dir);
    for (const char* c : {"gen-data", "coarsen", "train", "sample", "eval"}) p.run(c);
  } catch (const std::exception& e) {
    completed = false;
    error = e.what();
  }
  const double seconds = seconds_since(start);
  if (!completed) {
    report(8, false, "desk-scale end-to-end", "pipeline failed: " + error);
    return;
  }
  const auto kv = read_kv(e2e_dir / "report.kv");
  auto number = [&](const std::string& key) {
    auto it = kv.find(key);
    return it == kv.end() ? std::nan("") : parse_real(it->second);
  };
  bool both_columns = true;
  for (const char* column : {"diffusion", "expansion"}) {
    for (StatKind kind : kAllStats) {
      if (std::isnan(number(std::string(column) + ".mmd." + to_string(kind)))) both_columns = false;
    }
    if (std::isnan(number(std::string(column) + ".vun.unique"))) both_columns = false;
  }
  const double degree = number("expansion.mmd.degree");
  const double reference = number("expansion.reference.degree");
  const double unique = number("expansion.vun.unique");
  const bool ok = degree < 10.0 * reference && unique >= 90.0 && both_columns && seconds <= 1800.0;
  report(8, ok, "desk-scale end-to-end",
         "Community-20, degree MMD " + fmt_double(degree) + " vs reference " + fmt_double(reference) + " (" +
             fmt_double(degree / reference) + "x), unique " + fmt_double(unique) + "%, both columns " +
             (both_columns ? "present" : "missing") + ", " + fmt_double(seconds) + " s");
}

void criterion9() {
  bool identical = true;
  std::string mismatch;
  const fs::path root = fs::temp_directory_path() / ("lgdc_determinism_" + std::to_string(::getpid()));
  for (Family f : kFamilies) {
    const RunConfig cfg = RunConfig::defaults(f);
    std::map<std::string, std::string> first;
    for (int run = 0; run < 2; ++run) {
      const fs::path dir = root / (to_string(f) + std::to_string(run));
      Pipeline p(cfg, dir);
      p.gen_data();
      p.coarsen();
      for (const char* name : {"train.graphs", "test.graphs", "coarse_train.pairs", "coarse_test.pairs"}) {
        const std::string bytes = slurp(dir / name);
        if (run == 0) {
          first[name] = bytes;
        } else if (bytes != first[name] || bytes.empty()) {
          identical = false;
          mismatch += " " + to_string(f) + "/" + name;
        }
      }
    }
  }
  fs::remove_all(root);

  int checkpoints = 0;
  int stable = 0;
  for (const char* name : {"denoiser.ckpt", "expander_v.ckpt", "expander_e.ckpt"}) {
    const fs::path src = e2e_dir / name;
    if (!fs::exists(src)) continue;
    ++checkpoints;
    const fs::path copy = e2e_dir / (std::string(name) + ".resaved");
    save_checkpoint(copy.string(), load_checkpoint(src.string()));
    if (slurp(copy) == slurp(src)) ++stable;
  }
  report(9, identical && checkpoints == 3 && stable == 3, "determinism",
         std::string("gen-data + coarsen artifacts ") + (identical ? "byte-identical" : "differ:" + mismatch) +
             " for 3 families, checkpoints re-saved identically " + std::to_string(stable) + "/" +
             std::to_string(checkpoints));
}

}  // namespace
}  // namespace lgdc

int main() {
  using namespace lgdc;
  spdlog::set_level(spdlog::level::err);
  try {
    const auto data = build_family_data();
    criterion1(data);
    criterion2(data);
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
  } catch (const std::exception& e) {
    std::cout << "[FAIL] acceptance aborted: " << e.what() << std::endl;
    return 1;
  }
  if (!e2e_dir.empty()) std::filesystem::remove_all(e2e_dir);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
