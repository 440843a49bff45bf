#include "eit/pipeline.hpp"

#include <map>
#include <string>

#include "eit/error.hpp"
#include "eit/text.hpp"

namespace eit {

namespace {

void require_word_cloud(const Corpus& corpus, std::string_view question_id) {
  if (corpus.question(question_id).poll_kind != PollKind::word_cloud)
    throw InvalidArgument("question " + std::string(question_id) + " is not a word-cloud question");
}

template <typename T>
std::vector<T> parse_list(std::string_view s) {
  std::vector<T> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string item(s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    try {
      std::size_t used = 0;
      if constexpr (std::is_same_v<T, double>) {
        out.push_back(std::stod(item, &used));
      } else {
        const long long v = std::stoll(item, &used);
        if (v < 1) throw InvalidArgument("grid seed counts must be positive");
        out.push_back(static_cast<T>(v));
      }
      if (used != item.size()) throw InvalidArgument("malformed grid value '" + item + "'");
    } catch (const std::logic_error&) {
      throw InvalidArgument("malformed grid value '" + item + "'");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

QuestionSample sample_question(const Corpus& corpus, std::string_view question_id, const SamplerConfig& config,
                               const EmbeddingProvider& provider, EmbeddingCache* cache) {
  require_word_cloud(corpus, question_id);
  QuestionSample out;
  out.features = compute_features(corpus, question_id, provider, cache);
  out.sample = rule_based_sample(out.features, config);
  return out;
}

std::vector<AblationTask> ablation_tasks(const Corpus& corpus, const LabelStore& eval_labels,
                                         const EmbeddingProvider& provider, EmbeddingCache* cache) {
  std::map<std::string, std::vector<AggregatedLabel>> by_question;
  for (auto& a : eval_labels.aggregate_all())
    if (a.cls != EarnestClass::neutral) by_question[a.question_id].push_back(std::move(a));

  std::vector<AblationTask> tasks;
  for (const auto& [qid, items] : by_question) {
    AblationTask task;
    task.question_id = qid;
    task.frequent = embed_frequent(corpus, qid, provider, cache);
    std::vector<std::string> texts;
    for (const auto& a : items) texts.push_back(a.normalized_text);
    const Matrix m = embed_batch(texts, provider, cache);
    task.eval_set.vectors = Matrix(0, provider.dimension());
    for (std::size_t i = 0; i < items.size(); ++i) task.eval_set.add(m.row(i), items[i].cls, text_hash(texts[i]), texts[i]);
    tasks.push_back(std::move(task));
  }
  return tasks;
}

AblationGrid AblationGrid::parse(std::string_view spec) {
  if (spec == "default") return {};
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("grid must be 'default' or '<fractions>:<seed counts>'");
  AblationGrid g;
  g.fractions = parse_list<double>(spec.substr(0, colon));
  g.seed_counts = parse_list<std::size_t>(spec.substr(colon + 1));
  for (double f : g.fractions)
    if (!(f > 0.0 && f <= 1.0)) throw InvalidArgument("grid fractions must be in (0, 1]");
  return g;
}

std::vector<AblationCell> ablate(const Corpus& corpus, const LabelStore& pool_labels, const LabelStore& eval_labels,
                                 const AblationGrid& grid, const TrainingSetConfig& base,
                                 const EmbeddingProvider& provider, EmbeddingCache* cache) {
  const auto pool = NonEarnestPool::from_labels(pool_labels);
  if (pool.empty()) throw InvalidArgument("no non-earnest labels to build the pool from");
  const auto tasks = ablation_tasks(corpus, eval_labels, provider, cache);
  return ablation_grid(grid.fractions, grid.seed_counts, tasks, embed_pool(pool, provider, cache), base);
}

QuestionProjection project_question(const Corpus& corpus, const LabelStore& labels, std::string_view question_id,
                                    const TsneConfig& config, const EmbeddingProvider& provider,
                                    EmbeddingCache* cache) {
  require_word_cloud(corpus, question_id);
  const auto uniques = corpus.unique_responses(question_id);
  std::vector<std::string> texts;
  for (const auto& u : uniques) texts.push_back(u.normalized_text);
  auto result = tsne(embed_batch(texts, provider, cache), config);

  std::map<std::string, EarnestClass> classes;
  for (const auto& a : labels.aggregate_all())
    if (a.question_id == question_id) classes[a.normalized_text] = a.cls;

  QuestionProjection out;
  out.kl_trace = std::move(result.kl_trace);
  out.perplexity = result.perplexity;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    ProjectedPoint p{texts[i], result.coordinates(i, 0), result.coordinates(i, 1), std::nullopt};
    if (const auto it = classes.find(texts[i]); it != classes.end()) p.class_hint = it->second;
    out.points.push_back(std::move(p));
  }
  return out;
}

}  // namespace eit
