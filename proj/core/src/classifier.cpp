#include "eit/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "eit/error.hpp"
#include "eit/json.hpp"
#include "eit/random.hpp"
#include "eit/text.hpp"

namespace eit {

std::string_view to_string(DistanceMetric d) noexcept { return d == DistanceMetric::euclidean ? "euclidean" : "cosine"; }
std::string_view to_string(FeatureSpace s) noexcept { return s == FeatureSpace::embedding ? "embedding" : "2d"; }

std::optional<DistanceMetric> parse_distance(std::string_view s) noexcept {
  if (s == "euclidean") return DistanceMetric::euclidean;
  if (s == "cosine") return DistanceMetric::cosine;
  return std::nullopt;
}

std::optional<FeatureSpace> parse_space(std::string_view s) noexcept {
  if (s == "embedding") return FeatureSpace::embedding;
  if (s == "2d" || s == "projected_2d") return FeatureSpace::projected_2d;
  return std::nullopt;
}

double distance(DistanceMetric metric, std::span<const double> a, std::span<const double> b) noexcept {
  return metric == DistanceMetric::euclidean ? euclidean(a, b) : cosine_distance(a, b);
}

void LabeledSet::add(std::span<const double> vector, EarnestClass cls, std::uint64_t hash, std::string text) {
  vectors.push_row(vector);
  classes.push_back(cls);
  text_hashes.push_back(hash);
  texts.push_back(std::move(text));
}

LabeledSet LabeledSet::subset(std::span<const std::size_t> rows) const {
  LabeledSet out;
  for (auto r : rows) out.add(vectors.row(r), classes[r], text_hashes[r], texts[r]);
  if (rows.empty()) out.vectors = Matrix(0, vectors.cols());
  return out;
}

std::size_t LabeledSet::count(EarnestClass cls) const noexcept {
  return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), cls));
}

Prediction knn_predict(const LabeledSet& train, std::span<const double> query, std::size_t k, DistanceMetric metric) {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  if (k > train.size())
    throw InvalidArgument("k = " + std::to_string(k) + " exceeds training size " + std::to_string(train.size()));
  if (query.size() != train.vectors.cols()) throw InvalidArgument("query dimension does not match training vectors");

  std::vector<Neighbor> all(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train.classes[i] == EarnestClass::neutral) throw InvalidArgument("training set contains a neutral item");
    all[i] = {i, distance(metric, train.vectors.row(i), query), train.classes[i]};
  }
  const auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), closer);
  all.resize(k);

  Prediction p;
  for (const auto& nb : all) (nb.cls == EarnestClass::non_earnest ? p.non_earnest_votes : p.earnest_votes)++;
  // A tied vote favors recall.
  p.cls = p.non_earnest_votes >= p.earnest_votes ? EarnestClass::non_earnest : EarnestClass::earnest;
  p.neighbors = std::move(all);
  return p;
}

void Confusion::add(EarnestClass actual, EarnestClass predicted) {
  const bool a = actual == EarnestClass::non_earnest;
  const bool p = predicted == EarnestClass::non_earnest;
  if (a && p) ++tp;
  else if (a) ++fn;
  else if (p) ++fp;
  else ++tn;
}

Confusion& Confusion::operator+=(const Confusion& o) noexcept {
  tp += o.tp, fn += o.fn, fp += o.fp, tn += o.tn;
  return *this;
}

EvalMetrics EvalMetrics::from_confusion(const Confusion& c) {
  EvalMetrics m;
  m.confusion = c;
  m.n = c.total();
  m.accuracy = m.n == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(m.n);
  m.recall = c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  return m;
}

std::vector<std::size_t> stratified_folds(std::span<const EarnestClass> classes, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("need at least 2 folds");
  Rng rng(seed);
  std::vector<std::size_t> fold_of(classes.size(), 0);
  std::size_t next = 0;
  for (auto cls : {EarnestClass::non_earnest, EarnestClass::neutral, EarnestClass::earnest}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i] == cls) members.push_back(i);
    rng.shuffle(members);
    for (auto i : members) fold_of[i] = next++ % folds;
  }
  return fold_of;
}

CrossValidation cross_validate(const LabeledSet& labeled, std::size_t k, std::size_t folds, std::uint64_t seed,
                               DistanceMetric metric) {
  if (folds < 2) throw InvalidArgument("need at least 2 folds");
  for (auto cls : {EarnestClass::non_earnest, EarnestClass::earnest}) {
    const auto c = labeled.count(cls);
    if (c < folds)
      throw InvalidArgument("class " + std::string(to_string(cls)) + " has " + std::to_string(c) +
                            " members; need at least " + std::to_string(folds));
  }
  if (labeled.count(EarnestClass::neutral) > 0) throw InvalidArgument("neutral items must be excluded before cross-validation");

  CrossValidation cv;
  cv.fold_of = stratified_folds(labeled.classes, folds, seed);
  Confusion pooled;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < labeled.size(); ++i) (cv.fold_of[i] == f ? test_rows : train_rows).push_back(i);
    const LabeledSet train = labeled.subset(train_rows);
    Confusion c;
    for (auto i : test_rows) c.add(labeled.classes[i], knn_predict(train, labeled.vectors.row(i), k, metric).cls);
    cv.per_fold.push_back(EvalMetrics::from_confusion(c));
    pooled += c;
  }
  cv.pooled = EvalMetrics::from_confusion(pooled);
  for (const auto& m : cv.per_fold) {
    cv.mean_accuracy += m.accuracy;
    cv.mean_recall += m.recall;
  }
  cv.mean_accuracy /= static_cast<double>(folds);
  cv.mean_recall /= static_cast<double>(folds);
  return cv;
}

void TrainingSetConfig::validate() const {
  if (!(non_earnest_fraction > 0.0 && non_earnest_fraction <= 1.0))
    throw InvalidArgument("non_earnest_fraction must be in (0, 1]");
  if (earnest_seed_count < 1) throw InvalidArgument("earnest_seed_count must be at least 1");
  if (k < 1) throw InvalidArgument("k must be at least 1");
}

NonEarnestPool NonEarnestPool::from_labels(const LabelStore& labels) {
  NonEarnestPool pool;
  for (const auto& a : labels.aggregate_all())
    if (a.cls == EarnestClass::non_earnest) pool.entries.push_back({a.question_id, a.normalized_text});
  return pool;
}

std::size_t fraction_count(double fraction, std::size_t n) {
  const double raw = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  if (raw <= 0.0) return 0;
  return std::min(n, static_cast<std::size_t>(raw));
}

LabeledSet build_training_set(const TrainingSetConfig& config, const LabeledSet& pool, const LabeledSet& frequent) {
  config.validate();
  if (pool.empty()) throw InvalidArgument("the non-earnest pool is empty");
  if (config.earnest_seed_count > frequent.size())
    throw InvalidArgument("earnest_seed_count " + std::to_string(config.earnest_seed_count) + " exceeds the " +
                          std::to_string(frequent.size()) + " unique responses of the target question");
  if (pool.vectors.cols() != frequent.vectors.cols()) throw InvalidArgument("pool and target dimensions differ");

  Rng rng(config.seed);
  auto negatives = uniform_sample_without_replacement(pool.size(), fraction_count(config.non_earnest_fraction, pool.size()), rng);
  std::sort(negatives.begin(), negatives.end());

  LabeledSet train;
  for (auto i : negatives) train.add(pool.vectors.row(i), EarnestClass::non_earnest, pool.text_hashes[i], pool.texts[i]);
  for (std::size_t i = 0; i < config.earnest_seed_count; ++i)
    train.add(frequent.vectors.row(i), EarnestClass::earnest, frequent.text_hashes[i], frequent.texts[i]);
  return train;
}

LabeledSet embed_pool(const NonEarnestPool& pool, const EmbeddingProvider& provider, EmbeddingCache* cache) {
  std::vector<std::string> texts;
  for (const auto& e : pool.entries) texts.push_back(e.normalized_text);
  const Matrix m = embed_batch(texts, provider, cache);
  LabeledSet out;
  out.vectors = Matrix(0, provider.dimension());
  for (std::size_t i = 0; i < texts.size(); ++i) out.add(m.row(i), EarnestClass::non_earnest, text_hash(texts[i]), texts[i]);
  return out;
}

LabeledSet embed_frequent(const Corpus& corpus, std::string_view question_id, const EmbeddingProvider& provider,
                          EmbeddingCache* cache) {
  std::vector<std::string> texts;
  for (const auto& u : corpus.unique_responses(question_id)) texts.push_back(u.normalized_text);
  const Matrix m = embed_batch(texts, provider, cache);
  LabeledSet out;
  out.vectors = Matrix(0, provider.dimension());
  for (std::size_t i = 0; i < texts.size(); ++i) out.add(m.row(i), EarnestClass::earnest, text_hash(texts[i]), texts[i]);
  return out;
}

LabeledSet build_training_set(const Corpus& corpus, const TrainingSetConfig& config, const NonEarnestPool& pool,
                              const EmbeddingProvider& provider, EmbeddingCache* cache) {
  return build_training_set(config, embed_pool(pool, provider, cache),
                            embed_frequent(corpus, config.target_question_id, provider, cache));
}

void to_feature_space(const TrainingSetConfig& config, Matrix& train, Matrix& queries) {
  if (config.space == FeatureSpace::embedding) return;
  Matrix joint(0, train.cols());
  for (std::size_t i = 0; i < train.rows(); ++i) joint.push_row(train.row(i));
  for (std::size_t i = 0; i < queries.rows(); ++i) joint.push_row(queries.row(i));
  TsneConfig tc = config.tsne;
  tc.seed = config.seed;
  const Matrix coords = tsne(joint, tc).coordinates;
  Matrix t(train.rows(), 2), q(queries.rows(), 2);
  for (std::size_t i = 0; i < train.rows(); ++i) std::copy_n(coords.row(i).begin(), 2, t.row(i).begin());
  for (std::size_t i = 0; i < queries.rows(); ++i) std::copy_n(coords.row(train.rows() + i).begin(), 2, q.row(i).begin());
  train = std::move(t);
  queries = std::move(q);
}

std::vector<AblationCell> ablation_grid(std::span<const double> fractions, std::span<const std::size_t> seed_counts,
                                        std::span<const AblationTask> tasks, const LabeledSet& pool,
                                        const TrainingSetConfig& base) {
  if (fractions.empty() || seed_counts.empty()) throw InvalidArgument("ablation grid is empty");
  if (tasks.empty()) throw InvalidArgument("ablation needs at least one evaluation task");

  std::vector<double> fs(fractions.begin(), fractions.end());
  std::vector<std::size_t> ss(seed_counts.begin(), seed_counts.end());
  std::sort(fs.begin(), fs.end());
  std::sort(ss.begin(), ss.end());

  std::vector<AblationCell> cells;
  for (double f : fs) {
    for (std::size_t s : ss) {
      TrainingSetConfig config = base;
      config.non_earnest_fraction = f;
      config.earnest_seed_count = s;
      Confusion total;
      for (const auto& task : tasks) {
        LabeledSet train = build_training_set(config, pool, task.frequent);
        const std::unordered_set<std::uint64_t> excluded(train.text_hashes.begin(), train.text_hashes.end());
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < task.eval_set.size(); ++i)
          if (!excluded.contains(task.eval_set.text_hashes[i]) && task.eval_set.classes[i] != EarnestClass::neutral)
            keep.push_back(i);
        LabeledSet eval = task.eval_set.subset(keep);
        if (eval.empty()) continue;
        to_feature_space(config, train.vectors, eval.vectors);
        for (std::size_t i = 0; i < eval.size(); ++i)
          total.add(eval.classes[i], knn_predict(train, eval.vectors.row(i), config.k, config.distance).cls);
      }
      cells.push_back({f, s, EvalMetrics::from_confusion(total)});
    }
  }
  return cells;
}

std::optional<EarnestClass> ClassificationRun::class_of(std::string_view normalized_text) const {
  for (const auto& e : entries)
    if (e.normalized_text == normalized_text) return e.cls;
  return std::nullopt;
}

ClassificationRun classify_question(const Corpus& corpus, const TrainingSetConfig& config, const NonEarnestPool& pool,
                                    const EmbeddingProvider& provider, EmbeddingCache* cache) {
  config.validate();
  corpus.question(config.target_question_id);  // NotFound for an unknown id
  const auto uniques = corpus.unique_responses(config.target_question_id);
  if (uniques.empty()) throw InvalidArgument("question " + config.target_question_id + " has no responses");

  const LabeledSet frequent = embed_frequent(corpus, config.target_question_id, provider, cache);
  LabeledSet train = build_training_set(config, embed_pool(pool, provider, cache), frequent);
  Matrix queries = frequent.vectors;
  to_feature_space(config, train.vectors, queries);

  ClassificationRun run;
  run.question_id = config.target_question_id;
  run.config = config;
  run.provider_id = provider.id();
  run.training_texts = train.texts;
  run.training_classes = train.classes;
  for (std::size_t i = 0; i < uniques.size(); ++i) {
    auto p = knn_predict(train, queries.row(i), config.k, config.distance);
    run.entries.push_back({uniques[i].normalized_text, uniques[i].count, p.cls, p.non_earnest_votes, p.earnest_votes,
                           std::move(p.neighbors)});
  }

  nlohmann::json content = {{"config", run.config},
                            {"provider_id", run.provider_id},
                            {"question_id", run.question_id},
                            {"training_texts", run.training_texts},
                            {"entries", run.entries}};
  nlohmann::json classes = nlohmann::json::array();
  for (auto c : run.training_classes) classes.push_back(to_string(c));
  content["training_classes"] = classes;
  run.fingerprint = hex64(fnv1a64(content.dump()));
  return run;
}

}  // namespace eit
