#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eit/features.hpp"

namespace eit {

struct SamplerConfig {
  double tail_fraction = 0.20;
  double per_metric_fraction = 0.20;
  std::size_t target_n = 200;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument when a fraction is outside (0, 1] or target_n < 1.
  void validate() const;
};

/// What one metric's weighted draw looked like.
struct MetricDraw {
  Metric metric = Metric::centroid_distance;
  std::vector<std::size_t> tail;   // row indices of the non-earnest tail T
  std::uint64_t tail_weight = 0;   // per-item weight of T (= |R|)
  std::uint64_t rest_weight = 0;   // per-item weight of R (= |T|)
  std::vector<std::size_t> drawn;  // row indices in draw order
};

struct SampledItem {
  std::string normalized_text;
  std::vector<Metric> metrics;  // metrics whose draw selected this text
};

struct SampleResult {
  std::vector<SampledItem> items;  // final sample, in union (first-drawn) order
  std::array<MetricDraw, 4> draws;
  std::size_t union_size = 0;
};

/// Imbalance-aware sample of unique responses for annotation.
///
/// For each metric, the top ceil(tail_fraction * U) rows in non-earnest order
/// form the tail T and the rest R. Members of T get weight |R| and members of
/// R weight |T|, so both groups carry equal total mass, and
/// ceil(per_metric_fraction * U) rows are drawn without replacement. The
/// union of the four draws (in first-drawn order) is returned whole when it
/// fits in target_n, otherwise a uniform subsample of target_n taken from the
/// same random stream. All randomness comes from one Rng seeded with `seed`.
SampleResult rule_based_sample(std::span<const FeatureRow> rows, const SamplerConfig& config);

/// Delimited two-column sample file: normalized_text, metrics (`;`-joined).
void write_sample_file(std::ostream& out, const SampleResult& sample);

}  // namespace eit
