#pragma once

#include "lgdc/graph.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lgdc {

enum class StatKind { degree, clustering, orbit, motif, spectre, wavelet, components, edge_conn, diameter, aspl };

inline constexpr StatKind kAllStats[] = {StatKind::degree,  StatKind::clustering, StatKind::orbit,
                                         StatKind::motif,   StatKind::spectre,    StatKind::wavelet,
                                         StatKind::components, StatKind::edge_conn, StatKind::diameter,
                                         StatKind::aspl};

std::string to_string(StatKind kind);
StatKind parse_stat_kind(const std::string& text);

enum class StatGroup { local, global, local_global };
StatGroup group_of(StatKind kind);
/// Scalar statistics are compared with an absolute-difference kernel; all
/// others are histograms compared by total variation after normalization.
bool is_scalar(StatKind kind);

/// Raw per-graph descriptor. Histogram kinds return unnormalized bin counts
/// (degree histogram; 100 clustering bins on [0,1]; 15 mean orbit counts;
/// 6 motif counts; 200 normalized-Laplacian eigenvalue bins on [0,2]; 4 x 100
/// heat-kernel-signature bins at scales 0.5, 1, 2, 5). Scalar kinds return one
/// value. Combinatorial statistics use the unweighted topology; the spectral
/// ones use edge weights.
std::vector<double> graph_statistic(StatKind kind, const Graph& g);

/// Kernel between two descriptors of the same kind (sigma = 1).
double stat_kernel(StatKind kind, const std::vector<double>& x, const std::vector<double>& y);

/// Biased squared MMD: E_aa + E_bb - 2 E_ab, diagonal terms included.
double mmd(StatKind kind, const std::vector<Graph>& a, const std::vector<Graph>& b);
double mmd_from_descriptors(StatKind kind, const std::vector<std::vector<double>>& a,
                            const std::vector<std::vector<double>>& b);

using ValidityPredicate = std::function<bool(const Graph&)>;

/// Percentages in [0, 100]. `valid` and `combined` are absent when no
/// validity predicate applies (Community-20).
struct VunResult {
  std::optional<double> valid;
  double unique = 0.0;
  double novel = 0.0;
  std::optional<double> combined;
};

VunResult vun(const std::vector<Graph>& samples, const std::vector<Graph>& train,
              const ValidityPredicate& validity = nullptr);

struct RatioSummary {
  std::map<StatKind, double> ratios;
  /// Metrics skipped because their reference MMD is zero.
  std::vector<StatKind> excluded;
  double local_ratio = 0.0;
  double global_ratio = 0.0;
  double avg_ratio = 0.0;
};

/// ratio = MMD(samples, test) / MMD(train, test) per metric; group means over
/// the metrics that have a positive reference. Throws if every reference is 0.
RatioSummary ratio_summary(const std::map<StatKind, double>& sample_mmd,
                           const std::map<StatKind, double>& reference_mmd);

struct MetricReport {
  std::string title;
  std::map<StatKind, double> mmd;
  std::map<StatKind, double> reference_mmd;
  std::optional<RatioSummary> ratios;
  std::optional<VunResult> vun;
};

/// Full battery for `samples` against `test`, with `train` supplying the
/// reference MMD(train, test) for ratios and the novelty set for V.U.N.
MetricReport evaluate(const std::string& title, const std::vector<Graph>& samples, const std::vector<Graph>& test,
                      const std::vector<Graph>& train, const ValidityPredicate& validity = nullptr,
                      const std::vector<StatKind>& kinds = {std::begin(kAllStats), std::end(kAllStats)});

/// Two reports: latent samples against the coarsened references ("Diffusion")
/// and decoded samples against the fine references ("Expansion").
std::pair<MetricReport, MetricReport> table4_protocol(const std::vector<Graph>& latent_samples,
                                                      const std::vector<Graph>& decoded_samples,
                                                      const std::vector<Graph>& coarse_test,
                                                      const std::vector<Graph>& fine_test,
                                                      const std::vector<Graph>& coarse_train,
                                                      const std::vector<Graph>& fine_train,
                                                      const ValidityPredicate& fine_validity = nullptr);

/// Aligned human-readable table with one column per report, grouped
/// Local / Global / Local+Global.
std::string format_reports_text(const std::vector<MetricReport>& reports);
/// `<prefix>.<metric>=<value>` lines, one per value.
std::string format_reports_kv(const std::vector<MetricReport>& reports);

}  // namespace lgdc
