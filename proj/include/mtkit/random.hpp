#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace mtkit {

/// Portable pseudo-random stream: std::mt19937_64 (bit-exact by the C++ standard)
/// with rejection-sampled bounded integers, so outputs do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  /// Recorded in manifests; bump the suffix if the sampling procedure changes.
  static constexpr std::string_view kAlgorithm = "mt19937_64+rejection/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// k distinct indices from [0, population), in sampling order.
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t k, Rng& rng);

/// Independent sub-seed for a named stream (e.g. one per language pair).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace mtkit
