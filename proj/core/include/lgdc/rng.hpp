#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lgdc {

/// Counter-based, splittable pseudo-random generator.
///
/// Each output is a SplitMix64 finalization of (key, counter), so a stream is
/// fully described by its 64-bit key and position. `split(k)` derives an
/// independent child stream; parallel workers that split by item index see
/// exactly the numbers a serial loop would. All distributions are implemented
/// here rather than through <random> so results are identical across standard
/// libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  /// Child stream for `stream` (e.g. a graph index). Does not advance this stream.
  [[nodiscard]] Rng split(std::uint64_t stream) const;

  /// Stream for item `index` of a dataset generated from `seed` (seed XOR index).
  [[nodiscard]] static Rng for_item(std::uint64_t seed, std::uint64_t index) {
    return Rng(seed ^ index);
  }

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform integer in [lo, hi].
  int range(int lo, int hi);
  bool bernoulli(double p) { return uniform() < p; }
  double normal(double mean = 0.0, double stddev = 1.0);
  /// Index drawn proportionally to nonnegative `weights` (need not be normalized).
  std::size_t categorical(std::span<const double> weights);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  [[nodiscard]] std::uint64_t key() const { return key_; }
  [[nodiscard]] std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix(std::uint64_t z);

 private:
  Rng(std::uint64_t key, std::uint64_t counter, int) : key_(key), counter_(counter) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace lgdc
