#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eit/annotation.hpp"
#include "eit/corpus.hpp"
#include "eit/embedding.hpp"
#include "eit/matrix.hpp"
#include "eit/projection.hpp"

namespace eit {

enum class DistanceMetric { euclidean, cosine };
enum class FeatureSpace { embedding, projected_2d };

std::string_view to_string(DistanceMetric d) noexcept;
std::string_view to_string(FeatureSpace s) noexcept;
std::optional<DistanceMetric> parse_distance(std::string_view s) noexcept;
std::optional<FeatureSpace> parse_space(std::string_view s) noexcept;

double distance(DistanceMetric metric, std::span<const double> a, std::span<const double> b) noexcept;

/// Vectors with binary classes. Row order is insertion order and is the
/// distance tie-break in knn_predict.
struct LabeledSet {
  Matrix vectors;
  std::vector<EarnestClass> classes;
  std::vector<std::uint64_t> text_hashes;
  std::vector<std::string> texts;

  std::size_t size() const noexcept { return classes.size(); }
  bool empty() const noexcept { return classes.empty(); }
  void add(std::span<const double> vector, EarnestClass cls, std::uint64_t hash = 0, std::string text = {});
  LabeledSet subset(std::span<const std::size_t> rows) const;
  std::size_t count(EarnestClass cls) const noexcept;
};

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
  EarnestClass cls = EarnestClass::earnest;

  bool operator==(const Neighbor&) const = default;
};

struct Prediction {
  EarnestClass cls = EarnestClass::earnest;
  std::vector<Neighbor> neighbors;  // nearest first
  std::size_t non_earnest_votes = 0;
  std::size_t earnest_votes = 0;
};

/// Majority vote of the k nearest training rows. Equal distances prefer the
/// lower training index; a tied vote goes to non_earnest. Throws
/// InvalidArgument when k is 0 or exceeds the training size, or on a
/// dimension mismatch.
Prediction knn_predict(const LabeledSet& train, std::span<const double> query, std::size_t k,
                       DistanceMetric metric = DistanceMetric::euclidean);

/// Binary confusion counts with non_earnest as the positive class.
struct Confusion {
  std::size_t tp = 0;  // non_earnest predicted non_earnest
  std::size_t fn = 0;  // non_earnest predicted earnest
  std::size_t fp = 0;  // earnest predicted non_earnest
  std::size_t tn = 0;  // earnest predicted earnest

  std::size_t total() const noexcept { return tp + fn + fp + tn; }
  void add(EarnestClass actual, EarnestClass predicted);
  Confusion& operator+=(const Confusion& o) noexcept;
  bool operator==(const Confusion&) const = default;
};

struct EvalMetrics {
  double accuracy = 0.0;
  double recall = 0.0;  // 0 when there are no non_earnest items
  Confusion confusion;
  std::size_t n = 0;

  static EvalMetrics from_confusion(const Confusion& c);
};

struct CrossValidation {
  EvalMetrics pooled;  // from the confusion summed over folds
  std::vector<EvalMetrics> per_fold;
  double mean_accuracy = 0.0;
  double mean_recall = 0.0;
  std::vector<std::size_t> fold_of;  // fold index per row
};

/// Each class is shuffled with the seeded Rng and dealt round-robin to the folds.
std::vector<std::size_t> stratified_folds(std::span<const EarnestClass> classes, std::size_t folds,
                                          std::uint64_t seed);

/// Throws InvalidArgument when a present class has fewer than `folds` members,
/// when `folds` < 2, or when either binary class is missing.
CrossValidation cross_validate(const LabeledSet& labeled, std::size_t k, std::size_t folds, std::uint64_t seed,
                               DistanceMetric metric = DistanceMetric::euclidean);

struct TrainingSetConfig {
  double non_earnest_fraction = 0.50;
  std::size_t earnest_seed_count = 20;
  std::string target_question_id;
  std::uint64_t seed = 0;
  FeatureSpace space = FeatureSpace::embedding;
  std::size_t k = 5;
  DistanceMetric distance = DistanceMetric::euclidean;
  TsneConfig tsne;  // used when space == projected_2d

  void validate() const;
};

struct PoolEntry {
  std::string source_question_id;
  std::string normalized_text;

  bool operator==(const PoolEntry&) const = default;
};

/// Cross-question non-earnest responses, ordered by (question, text).
struct NonEarnestPool {
  std::vector<PoolEntry> entries;

  /// Every aggregated label whose class is non_earnest.
  static NonEarnestPool from_labels(const LabelStore& labels);
  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }
};

/// ceil(fraction * n), clamped to [0, n].
std::size_t fraction_count(double fraction, std::size_t n);

/// Negatives: a seeded uniform sample of ceil(fraction * |pool|) pool rows,
/// kept in pool order. Positives: the first earnest_seed_count rows of
/// `frequent` (which must already be ordered most frequent first), relabeled
/// earnest. Negatives precede positives.
LabeledSet build_training_set(const TrainingSetConfig& config, const LabeledSet& pool, const LabeledSet& frequent);

LabeledSet embed_pool(const NonEarnestPool& pool, const EmbeddingProvider& provider, EmbeddingCache* cache);
/// The question's unique responses, most frequent first, labeled earnest.
LabeledSet embed_frequent(const Corpus& corpus, std::string_view question_id, const EmbeddingProvider& provider,
                          EmbeddingCache* cache);

LabeledSet build_training_set(const Corpus& corpus, const TrainingSetConfig& config, const NonEarnestPool& pool,
                              const EmbeddingProvider& provider, EmbeddingCache* cache = nullptr);

/// Re-expresses training and query rows in the configured space. For
/// projected_2d both sets are embedded jointly with t-SNE (training rows
/// first) using config.tsne with config.seed.
void to_feature_space(const TrainingSetConfig& config, Matrix& train, Matrix& queries);

/// One evaluation target: the ranked frequent responses supplying earnest
/// seeds and the labeled items to score.
struct AblationTask {
  std::string question_id;
  LabeledSet frequent;
  LabeledSet eval_set;
};

struct AblationCell {
  double non_earnest_fraction = 0.0;
  std::size_t earnest_seed_count = 0;
  EvalMetrics metrics;
};

inline constexpr double kDefaultFractions[] = {0.10, 0.25, 0.50};
inline constexpr std::size_t kDefaultSeedCounts[] = {5, 10, 20};

/// Trains each (fraction, seed count) cell per task, drops eval items whose
/// text hash is in that cell's training set, and sums the confusion over tasks.
/// Rows are sorted by (fraction, seed count). Throws InvalidArgument on an empty grid.
std::vector<AblationCell> ablation_grid(std::span<const double> fractions, std::span<const std::size_t> seed_counts,
                                        std::span<const AblationTask> tasks, const LabeledSet& pool,
                                        const TrainingSetConfig& base);

struct RunEntry {
  std::string normalized_text;
  std::size_t count = 0;
  EarnestClass cls = EarnestClass::earnest;
  std::size_t non_earnest_votes = 0;
  std::size_t earnest_votes = 0;
  std::vector<Neighbor> neighbors;  // indices into ClassificationRun::training_texts
};

struct ClassificationRun {
  std::string run_id;
  std::uint64_t sequence = 0;
  std::string question_id;
  TrainingSetConfig config;
  std::string provider_id;
  std::string fingerprint;
  Timestamp created_at{};
  std::vector<std::string> training_texts;
  std::vector<EarnestClass> training_classes;
  std::vector<RunEntry> entries;  // one per unique response, corpus order

  /// Class of a normalized text of this question, if it was classified.
  std::optional<EarnestClass> class_of(std::string_view normalized_text) const;
};

/// Classifies every unique response of the question. run_id, sequence and
/// created_at are left for the store to assign; the fingerprint covers the
/// configuration, provider, training set and predictions.
ClassificationRun classify_question(const Corpus& corpus, const TrainingSetConfig& config, const NonEarnestPool& pool,
                                    const EmbeddingProvider& provider, EmbeddingCache* cache = nullptr);

}  // namespace eit
