#include "lgdc/datasets.hpp"

#include "lgdc/algorithms.hpp"
#include "lgdc/delaunay.hpp"
#include "lgdc/error.hpp"
#include "lgdc/metrics.hpp"
#include "lgdc/parallel.hpp"

#include <functional>
#include <queue>

namespace lgdc {

std::string to_string(Family family) {
  switch (family) {
    case Family::tree: return "tree";
    case Family::planar: return "planar";
    case Family::community20: return "community20";
  }
  return "unknown";
}

Family parse_family(const std::string& text) {
  if (text == "tree") return Family::tree;
  if (text == "planar") return Family::planar;
  if (text == "community20" || text == "community" || text == "sbm") return Family::community20;
  throw ConfigError("unknown dataset family '" + text + "' (expected tree, planar or community20)");
}

DatasetSpec DatasetSpec::defaults(Family family) {
  DatasetSpec spec;
  spec.family = family;
  if (family == Family::community20) {
    spec.n_min = 12;
    spec.n_max = 20;
  } else {
    spec.n_min = 64;
    spec.n_max = 64;
  }
  return spec;
}

void DatasetSpec::validate() const {
  if (n_min < 1 || n_min > n_max) throw ConfigError("dataset sizes need 1 <= n_min <= n_max");
  if (count < 1) throw ConfigError("dataset count must be >= 1");
  if (family == Family::planar && n_min < 3) throw ConfigError("planar graphs need n >= 3");
  if (family == Family::community20) {
    if (sbm.communities < 1 || sbm.communities > n_min) throw ConfigError("community count must be in [1, n_min]");
    if (!(sbm.p_in >= 0.0 && sbm.p_in <= 1.0 && sbm.p_out >= 0.0 && sbm.p_out <= 1.0)) {
      throw ConfigError("SBM probabilities must lie in [0, 1]");
    }
  }
}

std::map<std::string, std::string> DatasetSpec::header_params() const {
  std::map<std::string, std::string> params{{"n_min", std::to_string(n_min)}, {"n_max", std::to_string(n_max)}};
  if (family == Family::community20) {
    params["communities"] = std::to_string(sbm.communities);
    params["p_in"] = format_real(sbm.p_in);
    params["p_out"] = format_real(sbm.p_out);
  }
  return params;
}

Graph tree_from_pruefer(int n, const std::vector<int>& sequence) {
  if (n < 1) throw Error("tree_from_pruefer: n must be >= 1");
  if (n == 1) return Graph(1);
  if (static_cast<int>(sequence.size()) != n - 2) throw Error("tree_from_pruefer: sequence length must be n - 2");
  std::vector<int> degree(static_cast<std::size_t>(n), 1);
  for (int s : sequence) {
    if (s < 0 || s >= n) throw Error("tree_from_pruefer: symbol out of range");
    ++degree[static_cast<std::size_t>(s)];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int v = 0; v < n; ++v) {
    if (degree[static_cast<std::size_t>(v)] == 1) leaves.push(v);
  }
  Graph g(n);
  for (int s : sequence) {
    const int leaf = leaves.top();
    leaves.pop();
    g.set_edge(leaf, s);
    if (--degree[static_cast<std::size_t>(s)] == 1) leaves.push(s);
  }
  const int a = leaves.top();
  leaves.pop();
  const int b = leaves.top();
  g.set_edge(a, b);
  return g;
}

Graph gen_tree(int n, Rng& rng) {
  if (n < 1) throw Error("gen_tree: n must be >= 1");
  std::vector<int> sequence(static_cast<std::size_t>(std::max(0, n - 2)));
  for (auto& s : sequence) s = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  return tree_from_pruefer(n, sequence);
}

Graph gen_planar(int n, Rng& rng) {
  if (n < 3) throw Error("gen_planar: n must be >= 3");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Point> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) {
      p.x = rng.uniform();
      p.y = rng.uniform();
    }
    if (auto edges = delaunay_edges(pts)) return Graph::from_edges(n, *edges);
  }
  throw Error("gen_planar: could not sample a non-degenerate point set");
}

std::vector<int> sbm_communities(int n, int communities) {
  std::vector<int> block(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) block[static_cast<std::size_t>(i)] = static_cast<int>(static_cast<long long>(i) * communities / n);
  return block;
}

Graph gen_sbm(int n, const SbmParams& params, Rng& rng) {
  if (params.communities < 1 || params.communities > n) throw Error("gen_sbm: community sizes must be >= 1");
  const auto block = sbm_communities(n, params.communities);
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Graph g(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double p = block[static_cast<std::size_t>(i)] == block[static_cast<std::size_t>(j)] ? params.p_in : params.p_out;
        if (rng.bernoulli(p)) g.set_edge(i, j);
      }
    }
    if (is_connected(g)) return g;
  }
  throw Error("gen_sbm: no connected sample in 100 attempts (p_in=" + format_real(params.p_in) +
              ", p_out=" + format_real(params.p_out) + ")");
}

Graph gen_sbm(const DatasetSpec& spec, Rng& rng) {
  const int n = rng.range(spec.n_min, spec.n_max);
  return gen_sbm(n, spec.sbm, rng);
}

Graph generate_graph(const DatasetSpec& spec, std::uint64_t index) {
  Rng rng = Rng::for_item(spec.seed, index);
  switch (spec.family) {
    case Family::tree: return gen_tree(rng.range(spec.n_min, spec.n_max), rng);
    case Family::planar: return gen_planar(rng.range(spec.n_min, spec.n_max), rng);
    case Family::community20: return gen_sbm(spec, rng);
  }
  throw Error("generate_graph: unknown family");
}

std::vector<Graph> generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  std::vector<Graph> graphs(static_cast<std::size_t>(spec.count));
  parallel_for(graphs.size(), [&](std::size_t i) { graphs[i] = generate_graph(spec, i); });
  return graphs;
}

std::map<std::string, double> dataset_reference_stats(const std::vector<Graph>& train, const std::vector<Graph>& test) {
  if (train.empty() || test.empty()) throw Error("dataset_reference_stats: both sets must be nonempty");
  std::map<std::string, double> out;
  for (StatKind kind : {StatKind::degree, StatKind::orbit, StatKind::motif, StatKind::clustering, StatKind::spectre,
                        StatKind::components, StatKind::edge_conn, StatKind::aspl, StatKind::diameter}) {
    out[to_string(kind)] = mmd(kind, train, test);
  }
  return out;
}

}  // namespace lgdc
