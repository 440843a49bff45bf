#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "eit/corpus.hpp"

namespace eit {

/// Three-way earnestness class; the classifier only ever predicts the outer two.
enum class EarnestClass { non_earnest, neutral, earnest };

std::string_view to_string(EarnestClass c) noexcept;
std::optional<EarnestClass> parse_class(std::string_view s) noexcept;

/// Rubric score 1..5 to class: 1-2 non-earnest, 3 neutral, 4-5 earnest.
EarnestClass class_of_score(int score);

/// Class of a mean of `n` integer scores summing to `sum`, decided exactly by
/// comparing `sum` with 3n.
EarnestClass class_of_sum(long long sum, std::size_t n);

inline constexpr int kMinScore = 1;
inline constexpr int kMaxScore = 5;

struct EarnestnessLabel {
  std::string annotator_id;
  std::string question_id;
  std::string normalized_text;
  int score = 0;
  Timestamp labeled_at{};

  bool operator==(const EarnestnessLabel&) const = default;
};

struct AggregatedLabel {
  std::string question_id;
  std::string normalized_text;
  double mean_score = 0.0;
  long long score_sum = 0;
  std::size_t n_annotators = 0;
  EarnestClass cls = EarnestClass::neutral;
};

struct Agreement {
  double pairwise_percent = 0.0;
  double fleiss_kappa = 0.0;
  std::size_t annotator_pairs = 0;  // pairs sharing at least one item
  std::size_t items = 0;            // items with two or more annotators
};

struct LabelImportReport {
  std::size_t imported = 0;
  std::vector<std::pair<std::size_t, std::string>> rejected;  // (line, reason)
};

/// Upsert store of rubric scores keyed by (annotator, question, text).
class LabelStore {
 public:
  using Key = std::tuple<std::string, std::string, std::string>;

  /// Validates the score (1..5) and, when `corpus` is given, that the question
  /// exists. Overwrites any previous score by the same annotator; the
  /// superseded record is kept in audit(). Returns the stored label.
  const EarnestnessLabel& record(EarnestnessLabel label, const Corpus* corpus = nullptr);

  const std::map<Key, EarnestnessLabel>& labels() const noexcept { return labels_; }
  const std::vector<EarnestnessLabel>& audit() const noexcept { return audit_; }
  /// Restores a persisted audit trail (used when reloading a store).
  void replace_audit(std::vector<EarnestnessLabel> audit) { audit_ = std::move(audit); }
  std::size_t size() const noexcept { return labels_.size(); }

  std::vector<EarnestnessLabel> for_question(std::string_view question_id) const;

  /// Throws NotFound when the item has no labels.
  AggregatedLabel aggregate(std::string_view question_id, std::string_view normalized_text) const;

  /// Every labeled item, ordered by (question, text).
  std::vector<AggregatedLabel> aggregate_all() const;

  /// Agreement on 3-class labels, optionally restricted to one question.
  /// Throws InvalidArgument when fewer than two annotators share an item.
  Agreement agreement(std::optional<std::string_view> question_id = std::nullopt) const;

 private:
  std::map<Key, EarnestnessLabel> labels_;
  std::vector<EarnestnessLabel> audit_;
};

/// Label file: CSV with header `annotator_id,question_id,normalized_text,score,labeled_at`.
void export_labels(std::ostream& out, const LabelStore& store);
/// Malformed rows are reported with their line number and skipped.
LabelImportReport import_labels(std::istream& in, LabelStore& store, const Corpus* corpus = nullptr);

/// Mean pairwise agreement and Fleiss' kappa over per-item class ratings.
/// `ratings[item]` maps annotator -> class. Exposed for testing.
Agreement compute_agreement(const std::map<std::pair<std::string, std::string>,
                                           std::map<std::string, EarnestClass>>& ratings);

}  // namespace eit
