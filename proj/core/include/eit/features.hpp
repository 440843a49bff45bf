#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eit/corpus.hpp"
#include "eit/embedding.hpp"
#include "eit/matrix.hpp"

namespace eit {

/// Levenshtein distance over code points with unit insert/delete/substitute costs.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a_utf8, std::string_view b_utf8);

struct FeatureRow {
  std::string normalized_text;
  double centroid_distance = 0.0;
  std::size_t frequency = 0;
  std::size_t edit_distance_to_mode = 0;
  std::size_t char_length = 0;

  bool operator==(const FeatureRow&) const = default;
};

/// The four non-earnestness indicators, in the order the sampler visits them.
enum class Metric { centroid_distance, frequency, edit_distance_to_mode, char_length };
inline constexpr std::array<Metric, 4> kAllMetrics = {Metric::centroid_distance, Metric::frequency,
                                                      Metric::edit_distance_to_mode, Metric::char_length};

std::string_view to_string(Metric m) noexcept;
std::optional<Metric> parse_metric(std::string_view s) noexcept;

/// One row per unique response. `uniques` must be ordered as returned by
/// Corpus::unique_responses (the first entry is the mode) and `vectors` row i
/// must embed uniques[i].normalized_text. The centroid is the mean of the
/// unique-response vectors.
std::vector<FeatureRow> compute_features(std::span<const UniqueResponse> uniques, const Matrix& vectors,
                                         const std::string& provider_id);

/// Embeds the question's unique responses and computes their features.
/// Throws NotFound for an unknown question and InvalidArgument when it has no responses.
std::vector<FeatureRow> compute_features(const Corpus& corpus, std::string_view question_id,
                                         const EmbeddingProvider& provider, EmbeddingCache* cache = nullptr);

/// Orders rows most-non-earnest first: distance descending, frequency
/// ascending, edit distance descending, length ascending; ties by text.
std::vector<FeatureRow> non_earnest_rank(Metric metric, std::span<const FeatureRow> rows);

/// Same ordering, as a permutation of row indices.
std::vector<std::size_t> non_earnest_order(Metric metric, std::span<const FeatureRow> rows);

}  // namespace eit
