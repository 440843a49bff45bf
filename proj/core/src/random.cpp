#include "eit/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "eit/error.hpp"

namespace eit {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("Rng::below: bound must be positive");
  // Largest multiple of bound representable; values at or above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::vector<std::size_t> weighted_sample_without_replacement(std::span<const std::uint64_t> weights,
                                                             std::size_t count, Rng& rng) {
  const std::size_t n = weights.size();
  if (count > n) throw InvalidArgument("weighted sample larger than population");
  std::vector<std::uint64_t> w(weights.begin(), weights.end());
  std::vector<bool> taken(n, false);
  std::uint64_t total = 0;
  for (auto x : w) total += x;

  std::vector<std::size_t> out;
  out.reserve(count);
  while (out.size() < count) {
    if (total == 0) {
      // Only zero-weight items remain: uniform over them.
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i)
        if (!taken[i]) rest.push_back(i);
      const auto pick = rest[static_cast<std::size_t>(rng.below(rest.size()))];
      taken[pick] = true;
      out.push_back(pick);
      continue;
    }
    std::uint64_t target = rng.below(total);
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i] || w[i] == 0) continue;
      if (target < w[i]) {
        pick = i;
        break;
      }
      target -= w[i];
    }
    taken[pick] = true;
    total -= w[pick];
    w[pick] = 0;
    out.push_back(pick);
  }
  return out;
}

std::vector<std::size_t> uniform_sample_without_replacement(std::size_t n, std::size_t count, Rng& rng) {
  if (count > n) throw InvalidArgument("uniform sample larger than population");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace eit
