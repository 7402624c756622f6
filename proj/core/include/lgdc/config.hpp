#pragma once

#include "lgdc/coarsening.hpp"
#include "lgdc/datasets.hpp"
#include "lgdc/diffusion.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace lgdc {

/// Every knob of a run. Parsed from flat `key = value` lines with `#`
/// comments; unknown keys and out-of-range values raise ConfigError.
/// Dataset sizes default per family (see DatasetSpec::defaults).
struct RunConfig {
  Family family = Family::community20;
  int train_count = 100;
  int test_count = 40;
  int n_min = 12;
  int n_max = 20;
  std::uint64_t seed = 0;
  SbmParams sbm;

  double target_ratio = 0.2;
  int v_max = 8;
  int k_eig = 8;
  long rec_iterations = 0;
  int coarsen_attempts = 20;
  /// Opaque latent-size constant carried for bookkeeping only; n_c follows
  /// target_ratio.
  int latent_m = 0;
  bool normalized_epsilon = false;

  int steps = 100;
  NoiseKind noise_kind = NoiseKind::marginal;
  double lambda_e = 5.0;
  int edge_buckets = 4;
  int hidden = 64;
  int layers = 4;

  int train_iterations = 3000;
  int expander_iterations = 3000;
  int batch = 16;
  double lr = 3e-4;

  int sample_count = 64;
  double temperature = 1.0;

  static RunConfig defaults(Family family);
  [[nodiscard]] DatasetSpec dataset_spec() const;
  [[nodiscard]] CoarseningOptions coarsening_options() const;
  /// Effective key=value lines in key order (seed excluded).
  [[nodiscard]] std::map<std::string, std::string> entries() const;
  [[nodiscard]] std::string canonical_text() const;
  /// FNV-1a over canonical_text(), as 16 hex digits.
  [[nodiscard]] std::string hash() const;
  void validate() const;
};

RunConfig parse_config(const std::string& text);
/// Throws ConfigError when the file cannot be read.
RunConfig load_config(const std::string& path);

std::uint64_t fnv1a(const std::string& text);

}  // namespace lgdc
