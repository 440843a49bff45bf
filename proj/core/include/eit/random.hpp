#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace eit {

/// SplitMix64 finalizer. Used as a stateless counter-based generator.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Maps 64 random bits to a double in [0, 1) using the top 53 bits.
constexpr double bits_to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Seeded random stream. The engine is std::mt19937_64, whose output sequence
/// is fixed by the C++ standard; every derived quantity (uniform doubles,
/// bounded integers, normals, shuffles) is computed here rather than through
/// <random> distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform() { return bits_to_unit(engine_()); }

  /// Uniform integer in [0, bound). Rejection sampling, so unbiased.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Draws `count` distinct indices with probability proportional to their
/// integer weights, renormalizing after every draw. Indices with zero weight
/// are drawn only after every positive-weight index is exhausted, uniformly.
std::vector<std::size_t> weighted_sample_without_replacement(std::span<const std::uint64_t> weights,
                                                             std::size_t count, Rng& rng);

/// `count` distinct indices of [0, n), uniformly, in draw order.
std::vector<std::size_t> uniform_sample_without_replacement(std::size_t n, std::size_t count, Rng& rng);

}  // namespace eit
