#pragma once

#include "lgdc/coarsening.hpp"
#include "lgdc/config.hpp"
#include "lgdc/diffusion.hpp"
#include "lgdc/expansion.hpp"
#include "lgdc/metrics.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace lgdc {

/// A fine graph with its coarsening supervision.
struct PairRecord {
  Graph fine;
  CoarseningResult result;
};

/// Paired supervision file:
///   #coarsening <count> <key=value...>
///   #pair <index>
///   #graph fine-<index> ...        fine graph
///   #assignment a_0 ... a_{n-1}
///   #graph coarse-<index> ...      coarse graph with size labels
///   #vstar v_0 ... v_{n_c-1}
///   #estar <|E~|> k_1 k_2 ...      indices of ones in canonical candidate order
///   #epsilon <value>
void write_pairs(std::ostream& out, const std::vector<PairRecord>& pairs,
                 const std::map<std::string, std::string>& header);
std::vector<PairRecord> read_pairs(std::istream& in, std::map<std::string, std::string>* header = nullptr,
                                   int v_max = 64);

/// Coarsens every graph; graph i draws from Rng(seed).split(stream).split(i).
std::vector<PairRecord> coarsen_dataset(const std::vector<Graph>& graphs, const CoarseningOptions& options,
                                        std::uint64_t seed, std::uint64_t stream);

/// Everything sampling needs besides the checkpoints.
struct ModelMeta {
  std::string config_hash;
  std::uint64_t seed = 0;
  int a = 8;
  int b = 4;
  int steps = 100;
  NoiseKind noise_kind = NoiseKind::marginal;
  Eigen::VectorXd m_x;
  Eigen::VectorXd m_e;
  /// Coarse sizes of the training graphs; sampling draws n_c uniformly from this list.
  std::vector<int> latent_sizes;
  double positive_weight = 1.0;
  double edges_per_node = 0.0;
  double final_diffusion_loss = 0.0;
  double final_expander_loss = 0.0;
};

void write_meta(std::ostream& out, const ModelMeta& meta);
ModelMeta read_meta(std::istream& in);

/// Validity predicate for decoded graphs of a family; empty for Community-20.
ValidityPredicate family_validity(Family family);

/// Commands of the `lgdc` tool. Each reads its inputs from and writes its
/// artifacts to `out`; a missing input raises MissingArtifactError naming the
/// command that produces it.
class Pipeline {
 public:
  Pipeline(RunConfig config, std::filesystem::path out);

  void gen_data();
  void coarsen();
  void train();
  void sample(bool teacher_force = false);
  void eval();
  void flops();
  void export_dot();
  void run(const std::string& command, bool teacher_force = false);

  [[nodiscard]] std::filesystem::path path(const std::string& name) const { return out_ / name; }
  [[nodiscard]] const RunConfig& config() const { return config_; }

  static const std::vector<std::string>& commands();

 private:
  [[nodiscard]] std::map<std::string, std::string> provenance() const;
  [[nodiscard]] DatasetFile load_required(const std::string& name, const std::string& producer) const;
  [[nodiscard]] std::vector<PairRecord> load_pairs(const std::string& name) const;

  RunConfig config_;
  std::filesystem::path out_;
};

}  // namespace lgdc
