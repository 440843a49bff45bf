#pragma once

// Question-level workflows shared by the command line and the HTTP service,
// so both produce identical results for identical inputs.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "eit/annotation.hpp"
#include "eit/classifier.hpp"
#include "eit/corpus.hpp"
#include "eit/embedding.hpp"
#include "eit/features.hpp"
#include "eit/projection.hpp"
#include "eit/sampling.hpp"

namespace eit {

struct QuestionSample {
  std::vector<FeatureRow> features;  // corpus unique-response order
  SampleResult sample;
};

/// Features plus the rule-based sample for one word-cloud question.
/// Throws InvalidArgument for a multiple-choice question.
QuestionSample sample_question(const Corpus& corpus, std::string_view question_id, const SamplerConfig& config,
                               const EmbeddingProvider& provider, EmbeddingCache* cache = nullptr);

/// One task per question that has non-neutral aggregated labels in `eval_labels`.
std::vector<AblationTask> ablation_tasks(const Corpus& corpus, const LabelStore& eval_labels,
                                         const EmbeddingProvider& provider, EmbeddingCache* cache = nullptr);

struct AblationGrid {
  std::vector<double> fractions{std::begin(kDefaultFractions), std::end(kDefaultFractions)};
  std::vector<std::size_t> seed_counts{std::begin(kDefaultSeedCounts), std::end(kDefaultSeedCounts)};

  /// "default", or "<fractions>:<seed counts>" such as "0.1,0.5:5,20".
  static AblationGrid parse(std::string_view spec);
};

/// Labeled-fraction ablation: pool from `pool_labels`, evaluation items from `eval_labels`.
std::vector<AblationCell> ablate(const Corpus& corpus, const LabelStore& pool_labels, const LabelStore& eval_labels,
                                 const AblationGrid& grid, const TrainingSetConfig& base,
                                 const EmbeddingProvider& provider, EmbeddingCache* cache = nullptr);

struct QuestionProjection {
  std::vector<ProjectedPoint> points;  // one per unique response
  std::vector<double> kl_trace;
  double perplexity = 0.0;
};

/// t-SNE of the question's unique responses; points carry the aggregated label class when one exists.
QuestionProjection project_question(const Corpus& corpus, const LabelStore& labels, std::string_view question_id,
                                    const TsneConfig& config, const EmbeddingProvider& provider,
                                    EmbeddingCache* cache = nullptr);

}  // namespace eit
