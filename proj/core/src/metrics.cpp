#include "lgdc/metrics.hpp"

#include "lgdc/algorithms.hpp"
#include "lgdc/error.hpp"
#include "lgdc/graph_io.hpp"
#include "lgdc/graphlets.hpp"
#include "lgdc/isomorphism.hpp"
#include "lgdc/parallel.hpp"
#include "lgdc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace lgdc {

namespace {

constexpr double kSigma = 1.0;
constexpr int kClusteringBins = 100;
constexpr int kSpectreBins = 200;
constexpr int kWaveletBins = 100;
constexpr double kHeatScales[] = {0.5, 1.0, 2.0, 5.0};

std::size_t bin_of(double value, double lo, double hi, int bins) {
  const double t = (value - lo) / (hi - lo);
  const int b = static_cast<int>(std::floor(t * bins));
  return static_cast<std::size_t>(std::clamp(b, 0, bins - 1));
}

std::vector<double> degree_histogram(const Graph& g) {
  std::vector<double> hist;
  for (int i = 0; i < g.num_nodes(); ++i) {
    const auto d = static_cast<std::size_t>(g.degree(i));
    if (hist.size() <= d) hist.resize(d + 1, 0.0);
    hist[d] += 1.0;
  }
  return hist;
}

std::vector<double> clustering_histogram(const Graph& g) {
  std::vector<double> hist(kClusteringBins, 0.0);
  const auto adj = g.adjacency();
  for (int i = 0; i < g.num_nodes(); ++i) {
    const auto& nb = adj[static_cast<std::size_t>(i)];
    double c = 0.0;
    if (nb.size() >= 2) {
      int links = 0;
      for (std::size_t a = 0; a < nb.size(); ++a) {
        for (std::size_t b = a + 1; b < nb.size(); ++b) links += g.has_edge(nb[a], nb[b]) ? 1 : 0;
      }
      c = 2.0 * links / (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
    }
    hist[bin_of(c, 0.0, 1.0, kClusteringBins)] += 1.0;
  }
  return hist;
}

std::vector<double> orbit_descriptor(const Graph& g) {
  std::vector<double> mean(kOrbitCount, 0.0);
  if (g.num_nodes() == 0) return mean;
  for (const auto& counts : orbit_counts(g)) {
    for (int k = 0; k < kOrbitCount; ++k) mean[static_cast<std::size_t>(k)] += static_cast<double>(counts[static_cast<std::size_t>(k)]);
  }
  for (auto& m : mean) m /= g.num_nodes();
  return mean;
}

std::vector<double> spectre_histogram(const Graph& g) {
  std::vector<double> hist(kSpectreBins, 0.0);
  if (g.num_nodes() == 0) return hist;
  const auto spec = eig_sym(normalized_laplacian(g));
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    hist[bin_of(spec.eigenvalues(k), 0.0, 2.0, kSpectreBins)] += 1.0;
  }
  return hist;
}

std::vector<double> wavelet_histogram(const Graph& g) {
  std::vector<double> hist(std::size(kHeatScales) * kWaveletBins, 0.0);
  if (g.num_nodes() == 0) return hist;
  const auto spec = eig_sym(normalized_laplacian(g));
  const Eigen::MatrixXd sq = spec.eigenvectors.array().square();
  for (std::size_t s = 0; s < std::size(kHeatScales); ++s) {
    const Eigen::VectorXd decay = (-kHeatScales[s] * spec.eigenvalues.array()).exp();
    const Eigen::VectorXd hks = sq * decay;
    for (Eigen::Index i = 0; i < hks.size(); ++i) {
      hist[s * kWaveletBins + bin_of(hks(i), 0.0, 1.0, kWaveletBins)] += 1.0;
    }
  }
  return hist;
}

std::vector<double> normalized(const std::vector<double>& h) {
  double total = 0.0;
  for (double v : h) total += v;
  std::vector<double> out(h);
  if (total > 0.0) {
    for (auto& v : out) v /= total;
  }
  return out;
}

std::vector<std::vector<double>> descriptors(StatKind kind, const std::vector<Graph>& graphs) {
  std::vector<std::vector<double>> out(graphs.size());
  parallel_for(graphs.size(), [&](std::size_t i) {
    auto d = graph_statistic(kind, graphs[i]);
    out[i] = is_scalar(kind) ? std::move(d) : normalized(d);
  });
  return out;
}

double mean_kernel(StatKind kind, const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  double total = 0.0;
  for (const auto& x : a) {
    for (const auto& y : b) total += stat_kernel(kind, x, y);
  }
  return total / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace

std::string to_string(StatKind kind) {
  switch (kind) {
    case StatKind::degree: return "degree";
    case StatKind::clustering: return "clustering";
    case StatKind::orbit: return "orbit";
    case StatKind::motif: return "motif";
    case StatKind::spectre: return "spectre";
    case StatKind::wavelet: return "wavelet";
    case StatKind::components: return "components";
    case StatKind::edge_conn: return "edge_conn";
    case StatKind::diameter: return "diameter";
    case StatKind::aspl: return "aspl";
  }
  return "unknown";
}

StatKind parse_stat_kind(const std::string& text) {
  for (StatKind k : kAllStats) {
    if (to_string(k) == text) return k;
  }
  throw Error("unknown statistic '" + text + "'");
}

StatGroup group_of(StatKind kind) {
  switch (kind) {
    case StatKind::degree:
    case StatKind::clustering:
    case StatKind::orbit:
    case StatKind::motif: return StatGroup::local;
    case StatKind::wavelet: return StatGroup::local_global;
    default: return StatGroup::global;
  }
}

bool is_scalar(StatKind kind) {
  return kind == StatKind::components || kind == StatKind::edge_conn || kind == StatKind::diameter ||
         kind == StatKind::aspl;
}

std::vector<double> graph_statistic(StatKind kind, const Graph& g) {
  switch (kind) {
    case StatKind::degree: return degree_histogram(g);
    case StatKind::clustering: return clustering_histogram(g);
    case StatKind::orbit: return orbit_descriptor(g);
    case StatKind::motif: {
      const auto counts = motif_counts(g);
      return std::vector<double>(counts.begin(), counts.end());
    }
    case StatKind::spectre: return spectre_histogram(g);
    case StatKind::wavelet: return wavelet_histogram(g);
    case StatKind::components: return {static_cast<double>(component_count(g))};
    case StatKind::edge_conn: return {g.num_nodes() < 2 ? 0.0 : static_cast<double>(edge_connectivity(g))};
    case StatKind::diameter: return {static_cast<double>(shortest_path_stats(g).diameter)};
    case StatKind::aspl: return {shortest_path_stats(g).aspl};
  }
  throw Error("graph_statistic: unknown kind");
}

double stat_kernel(StatKind kind, const std::vector<double>& x, const std::vector<double>& y) {
  double dist = 0.0;
  if (is_scalar(kind)) {
    dist = std::abs(x.at(0) - y.at(0));
  } else {
    const std::size_t len = std::max(x.size(), y.size());
    for (std::size_t i = 0; i < len; ++i) {
      const double xi = i < x.size() ? x[i] : 0.0;
      const double yi = i < y.size() ? y[i] : 0.0;
      dist += std::abs(xi - yi);
    }
    dist *= 0.5;
  }
  return std::exp(-dist * dist / (2.0 * kSigma * kSigma));
}

constexpr double kMmdRoundingFloor = 1e-12;

double mmd_from_descriptors(StatKind kind, const std::vector<std::vector<double>>& a,
                            const std::vector<std::vector<double>>& b) {
  if (a.empty() || b.empty()) throw Error("mmd: both sets must be nonempty");
  const double value = mean_kernel(kind, a, a) + mean_kernel(kind, b, b) - 2.0 * mean_kernel(kind, a, b);
  // The TV-Gaussian kernel is not guaranteed PSD; tiny negatives are rounding,
  // and so is anything below the cancellation error of three O(1) means.
  return value < kMmdRoundingFloor ? 0.0 : value;
}

double mmd(StatKind kind, const std::vector<Graph>& a, const std::vector<Graph>& b) {
  return mmd_from_descriptors(kind, descriptors(kind, a), descriptors(kind, b));
}

VunResult vun(const std::vector<Graph>& samples, const std::vector<Graph>& train, const ValidityPredicate& validity) {
  if (samples.empty()) throw Error("vun: no samples");
  const auto n = samples.size();
  std::vector<char> valid(n, 1), unique(n, 1), novel(n, 1);

  if (validity) {
    parallel_for(n, [&](std::size_t i) { valid[i] = validity(samples[i]) ? 1 : 0; });
  }
  std::vector<std::uint64_t> sample_hash(n);
  parallel_for(n, [&](std::size_t i) { sample_hash[i] = canonical_hash(samples[i]); });

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> train_buckets;
  for (std::size_t j = 0; j < train.size(); ++j) train_buckets[canonical_hash(train[j])].push_back(j);

  parallel_for(n, [&](std::size_t i) {
    auto it = train_buckets.find(sample_hash[i]);
    if (it == train_buckets.end()) return;
    for (std::size_t j : it->second) {
      if (are_isomorphic(samples[i], train[j])) {
        novel[i] = 0;
        return;
      }
    }
  });
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (sample_hash[j] == sample_hash[i] && are_isomorphic(samples[i], samples[j])) {
        unique[i] = 0;
        return;
      }
    }
  });

  auto pct = [&](auto pred) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += pred(i) ? 1 : 0;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(n);
  };
  VunResult out;
  out.unique = pct([&](std::size_t i) { return unique[i] != 0; });
  out.novel = pct([&](std::size_t i) { return novel[i] != 0; });
  if (validity) {
    out.valid = pct([&](std::size_t i) { return valid[i] != 0; });
    out.combined = pct([&](std::size_t i) { return valid[i] && unique[i] && novel[i]; });
  }
  return out;
}

RatioSummary ratio_summary(const std::map<StatKind, double>& sample_mmd, const std::map<StatKind, double>& reference_mmd) {
  RatioSummary out;
  double local = 0.0, global = 0.0, all = 0.0;
  int n_local = 0, n_global = 0, n_all = 0;
  for (const auto& [kind, value] : sample_mmd) {
    auto ref = reference_mmd.find(kind);
    if (ref == reference_mmd.end() || !(ref->second > 0.0)) {
      out.excluded.push_back(kind);
      continue;
    }
    const double r = value / ref->second;
    out.ratios[kind] = r;
    all += r;
    ++n_all;
    if (group_of(kind) == StatGroup::local) {
      local += r;
      ++n_local;
    } else if (group_of(kind) == StatGroup::global) {
      global += r;
      ++n_global;
    }
  }
  if (n_all == 0) throw Error("ratio_summary: every reference MMD is zero");
  out.local_ratio = n_local ? local / n_local : 0.0;
  out.global_ratio = n_global ? global / n_global : 0.0;
  out.avg_ratio = all / n_all;
  return out;
}

MetricReport evaluate(const std::string& title, const std::vector<Graph>& samples, const std::vector<Graph>& test,
                      const std::vector<Graph>& train, const ValidityPredicate& validity,
                      const std::vector<StatKind>& kinds) {
  MetricReport report;
  report.title = title;
  for (StatKind kind : kinds) {
    const auto test_desc = descriptors(kind, test);
    report.mmd[kind] = mmd_from_descriptors(kind, descriptors(kind, samples), test_desc);
    if (!train.empty()) report.reference_mmd[kind] = mmd_from_descriptors(kind, descriptors(kind, train), test_desc);
  }
  if (!train.empty()) {
    bool any_positive = false;
    for (const auto& [k, v] : report.reference_mmd) any_positive = any_positive || v > 0.0;
    if (any_positive) report.ratios = ratio_summary(report.mmd, report.reference_mmd);
  }
  report.vun = vun(samples, train, validity);
  return report;
}

std::pair<MetricReport, MetricReport> table4_protocol(const std::vector<Graph>& latent_samples,
                                                      const std::vector<Graph>& decoded_samples,
                                                      const std::vector<Graph>& coarse_test,
                                                      const std::vector<Graph>& fine_test,
                                                      const std::vector<Graph>& coarse_train,
                                                      const std::vector<Graph>& fine_train,
                                                      const ValidityPredicate& fine_validity) {
  // Latent graphs are weighted; validity predicates are defined for the fine
  // families only, so the latent column reports uniqueness and novelty.
  auto latent = evaluate("Diffusion", latent_samples, coarse_test, coarse_train, nullptr);
  auto decoded = evaluate("Expansion", decoded_samples, fine_test, fine_train, fine_validity);
  return {std::move(latent), std::move(decoded)};
}

namespace {

std::string fixed(double v, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

std::string slug(const std::string& title) {
  std::string out;
  for (char c : title) out += (std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_');
  return out;
}

}  // namespace

std::string format_reports_text(const std::vector<MetricReport>& reports) {
  std::ostringstream out;
  constexpr int kLabel = 14;
  constexpr int kCol = 14;
  out << std::left << std::setw(kLabel) << "Metric";
  for (const auto& r : reports) out << std::right << std::setw(kCol) << r.title;
  out << '\n';
  auto row = [&](const std::string& label, auto value_of) {
    out << std::left << std::setw(kLabel) << label;
    for (const auto& r : reports) out << std::right << std::setw(kCol) << value_of(r);
    out << '\n';
  };
  auto metric_rows = [&](StatGroup group) {
    for (StatKind k : kAllStats) {
      if (group_of(k) != group) continue;
      bool present = false;
      for (const auto& r : reports) present = present || r.mmd.count(k);
      if (!present) continue;
      row(to_string(k), [&](const MetricReport& r) { return r.mmd.count(k) ? fixed(r.mmd.at(k)) : std::string("-"); });
    }
  };
  auto ratio_text = [](const MetricReport& r, double RatioSummary::*field) {
    return r.ratios ? fixed((*r.ratios).*field, 2) : std::string("-");
  };
  out << "Local\n";
  metric_rows(StatGroup::local);
  row("L. Ratio", [&](const MetricReport& r) { return ratio_text(r, &RatioSummary::local_ratio); });
  out << "Global\n";
  metric_rows(StatGroup::global);
  row("G. Ratio", [&](const MetricReport& r) { return ratio_text(r, &RatioSummary::global_ratio); });
  out << "Local+Global\n";
  metric_rows(StatGroup::local_global);
  row("A. Ratio", [&](const MetricReport& r) { return ratio_text(r, &RatioSummary::avg_ratio); });
  row("VUN", [](const MetricReport& r) {
    return r.vun && r.vun->combined ? fixed(*r.vun->combined, 1) : std::string("---");
  });
  row("Unique %", [](const MetricReport& r) { return r.vun ? fixed(r.vun->unique, 1) : std::string("-"); });
  row("Novel %", [](const MetricReport& r) { return r.vun ? fixed(r.vun->novel, 1) : std::string("-"); });
  for (const auto& r : reports) {
    if (r.ratios && !r.ratios->excluded.empty()) {
      out << r.title << ": ratios exclude";
      for (StatKind k : r.ratios->excluded) out << ' ' << to_string(k);
      out << " (zero reference MMD)\n";
    }
  }
  return out.str();
}

std::string format_reports_kv(const std::vector<MetricReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    const std::string p = slug(r.title);
    for (const auto& [k, v] : r.mmd) out << p << ".mmd." << to_string(k) << '=' << format_real(v) << '\n';
    for (const auto& [k, v] : r.reference_mmd) out << p << ".reference." << to_string(k) << '=' << format_real(v) << '\n';
    if (r.ratios) {
      for (const auto& [k, v] : r.ratios->ratios) out << p << ".ratio." << to_string(k) << '=' << format_real(v) << '\n';
      out << p << ".local_ratio=" << format_real(r.ratios->local_ratio) << '\n';
      out << p << ".global_ratio=" << format_real(r.ratios->global_ratio) << '\n';
      out << p << ".avg_ratio=" << format_real(r.ratios->avg_ratio) << '\n';
      std::string excluded;
      for (StatKind k : r.ratios->excluded) excluded += (excluded.empty() ? "" : ",") + to_string(k);
      out << p << ".ratio_excluded=" << excluded << '\n';
    }
    if (r.vun) {
      if (r.vun->valid) out << p << ".vun.valid=" << format_real(*r.vun->valid) << '\n';
      out << p << ".vun.unique=" << format_real(r.vun->unique) << '\n';
      out << p << ".vun.novel=" << format_real(r.vun->novel) << '\n';
      out << p << ".vun.combined=" << (r.vun->combined ? format_real(*r.vun->combined) : std::string("---")) << '\n';
    }
  }
  return out.str();
}

}  // namespace lgdc
