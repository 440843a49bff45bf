#include "eit/features.hpp"

#include <algorithm>
#include <numeric>

#include "eit/error.hpp"
#include "eit/text.hpp"

namespace eit {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t levenshtein(std::string_view a_utf8, std::string_view b_utf8) {
  return levenshtein(to_code_points(a_utf8), to_code_points(b_utf8));
}

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::centroid_distance: return "centroid_distance";
    case Metric::frequency: return "frequency";
    case Metric::edit_distance_to_mode: return "edit_distance_to_mode";
    case Metric::char_length: return "char_length";
  }
  return "centroid_distance";
}

std::optional<Metric> parse_metric(std::string_view s) noexcept {
  for (auto m : kAllMetrics)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::vector<FeatureRow> compute_features(std::span<const UniqueResponse> uniques, const Matrix& vectors,
                                         const std::string& provider_id) {
  if (uniques.empty()) throw InvalidArgument("compute_features: question has no responses");
  if (vectors.rows() != uniques.size()) throw InvalidArgument("compute_features: one vector per unique response required");

  std::vector<EmbeddingVector> embedded;
  embedded.reserve(uniques.size());
  for (std::size_t i = 0; i < uniques.size(); ++i) {
    const auto row = vectors.row(i);
    embedded.push_back({{row.begin(), row.end()}, provider_id, text_hash(uniques[i].normalized_text)});
  }
  const auto center = centroid(embedded);
  const auto mode = to_code_points(uniques.front().normalized_text);

  std::vector<FeatureRow> rows;
  rows.reserve(uniques.size());
  for (std::size_t i = 0; i < uniques.size(); ++i) {
    const auto cps = to_code_points(uniques[i].normalized_text);
    FeatureRow f;
    f.normalized_text = uniques[i].normalized_text;
    f.centroid_distance = euclidean(vectors.row(i), center);
    f.frequency = uniques[i].count;
    f.edit_distance_to_mode = levenshtein(cps, mode);
    f.char_length = cps.size();
    rows.push_back(std::move(f));
  }
  return rows;
}

std::vector<FeatureRow> compute_features(const Corpus& corpus, std::string_view question_id,
                                         const EmbeddingProvider& provider, EmbeddingCache* cache) {
  const auto uniques = corpus.unique_responses(question_id);
  if (uniques.empty()) throw InvalidArgument("question " + std::string(question_id) + " has no responses");
  std::vector<std::string> texts;
  texts.reserve(uniques.size());
  for (const auto& u : uniques) texts.push_back(u.normalized_text);
  return compute_features(uniques, embed_batch(texts, provider, cache), provider.id());
}

std::vector<std::size_t> non_earnest_order(Metric metric, std::span<const FeatureRow> rows) {
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto more_extreme = [&](const FeatureRow& a, const FeatureRow& b) -> int {
    switch (metric) {
      case Metric::centroid_distance:
        return a.centroid_distance > b.centroid_distance ? -1 : (a.centroid_distance < b.centroid_distance ? 1 : 0);
      case Metric::frequency:
        return a.frequency < b.frequency ? -1 : (a.frequency > b.frequency ? 1 : 0);
      case Metric::edit_distance_to_mode:
        return a.edit_distance_to_mode > b.edit_distance_to_mode
                   ? -1
                   : (a.edit_distance_to_mode < b.edit_distance_to_mode ? 1 : 0);
      case Metric::char_length:
        return a.char_length < b.char_length ? -1 : (a.char_length > b.char_length ? 1 : 0);
    }
    return 0;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const int c = more_extreme(rows[i], rows[j]);
    if (c != 0) return c < 0;
    return rows[i].normalized_text < rows[j].normalized_text;
  });
  return order;
}

std::vector<FeatureRow> non_earnest_rank(Metric metric, std::span<const FeatureRow> rows) {
  std::vector<FeatureRow> out;
  out.reserve(rows.size());
  for (auto i : non_earnest_order(metric, rows)) out.push_back(rows[i]);
  return out;
}

}  // namespace eit
