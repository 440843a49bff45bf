#include "eit/annotation.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <set>

#include "eit/csv.hpp"
#include "eit/error.hpp"

namespace eit {

std::string_view to_string(EarnestClass c) noexcept {
  switch (c) {
    case EarnestClass::non_earnest: return "non_earnest";
    case EarnestClass::neutral: return "neutral";
    case EarnestClass::earnest: return "earnest";
  }
  return "neutral";
}

std::optional<EarnestClass> parse_class(std::string_view s) noexcept {
  for (auto c : {EarnestClass::non_earnest, EarnestClass::neutral, EarnestClass::earnest})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

EarnestClass class_of_score(int score) {
  if (score < kMinScore || score > kMaxScore) throw InvalidArgument("score must be between 1 and 5");
  return class_of_sum(score, 1);
}

EarnestClass class_of_sum(long long sum, std::size_t n) {
  if (n == 0) throw InvalidArgument("class_of_sum: no scores");
  const long long pivot = 3 * static_cast<long long>(n);
  if (sum < pivot) return EarnestClass::non_earnest;
  if (sum > pivot) return EarnestClass::earnest;
  return EarnestClass::neutral;
}

const EarnestnessLabel& LabelStore::record(EarnestnessLabel label, const Corpus* corpus) {
  if (label.score < kMinScore || label.score > kMaxScore)
    throw InvalidArgument("score: must be an integer between 1 and 5, got " + std::to_string(label.score));
  if (label.annotator_id.empty()) throw InvalidArgument("annotator: must not be empty");
  if (corpus && !corpus->find_question(label.question_id))
    throw NotFound("unknown question " + label.question_id);
  Key key{label.annotator_id, label.question_id, label.normalized_text};
  auto it = labels_.find(key);
  if (it != labels_.end()) {
    audit_.push_back(it->second);
    it->second = std::move(label);
    return it->second;
  }
  return labels_.emplace(std::move(key), std::move(label)).first->second;
}

std::vector<EarnestnessLabel> LabelStore::for_question(std::string_view question_id) const {
  std::vector<EarnestnessLabel> out;
  for (const auto& [key, label] : labels_)
    if (label.question_id == question_id) out.push_back(label);
  return out;
}

namespace {

using ItemKey = std::pair<std::string, std::string>;  // (question, text)

std::map<ItemKey, std::vector<int>> scores_by_item(const std::map<LabelStore::Key, EarnestnessLabel>& labels) {
  std::map<ItemKey, std::vector<int>> items;
  for (const auto& [key, label] : labels) items[{label.question_id, label.normalized_text}].push_back(label.score);
  return items;
}

AggregatedLabel make_aggregate(const ItemKey& item, const std::vector<int>& scores) {
  AggregatedLabel a;
  a.question_id = item.first;
  a.normalized_text = item.second;
  a.n_annotators = scores.size();
  for (int s : scores) a.score_sum += s;
  a.mean_score = static_cast<double>(a.score_sum) / static_cast<double>(a.n_annotators);
  a.cls = class_of_sum(a.score_sum, a.n_annotators);
  return a;
}

}  // namespace

AggregatedLabel LabelStore::aggregate(std::string_view question_id, std::string_view normalized_text) const {
  std::vector<int> scores;
  for (const auto& [key, label] : labels_)
    if (label.question_id == question_id && label.normalized_text == normalized_text) scores.push_back(label.score);
  if (scores.empty())
    throw NotFound("no labels for \"" + std::string(normalized_text) + "\" in question " + std::string(question_id));
  return make_aggregate({std::string(question_id), std::string(normalized_text)}, scores);
}

std::vector<AggregatedLabel> LabelStore::aggregate_all() const {
  std::vector<AggregatedLabel> out;
  for (const auto& [item, scores] : scores_by_item(labels_)) out.push_back(make_aggregate(item, scores));
  return out;
}

Agreement compute_agreement(const std::map<std::pair<std::string, std::string>,
                                           std::map<std::string, EarnestClass>>& ratings) {
  // Pairwise: for each annotator pair, the share of co-labeled items with equal class.
  std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> pairs;  // (agree, shared)
  Agreement result;
  double p_bar_sum = 0.0;
  std::array<double, 3> class_totals{};
  double rating_total = 0.0;

  for (const auto& [item, by_annotator] : ratings) {
    if (by_annotator.size() < 2) continue;
    ++result.items;
    for (auto a = by_annotator.begin(); a != by_annotator.end(); ++a) {
      for (auto b = std::next(a); b != by_annotator.end(); ++b) {
        auto& [agree, shared] = pairs[{a->first, b->first}];
        ++shared;
        if (a->second == b->second) ++agree;
      }
    }
    // Fleiss' kappa with a per-item rater count.
    std::array<double, 3> counts{};
    for (const auto& [annotator, cls] : by_annotator) counts[static_cast<std::size_t>(cls)] += 1.0;
    const double n = static_cast<double>(by_annotator.size());
    double sq = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      sq += counts[c] * counts[c];
      class_totals[c] += counts[c];
    }
    rating_total += n;
    p_bar_sum += (sq - n) / (n * (n - 1.0));
  }

  if (pairs.empty()) throw InvalidArgument("agreement needs at least two annotators sharing an item");

  double pairwise = 0.0;
  for (const auto& [names, counts] : pairs)
    pairwise += static_cast<double>(counts.first) / static_cast<double>(counts.second);
  result.annotator_pairs = pairs.size();
  result.pairwise_percent = pairwise / static_cast<double>(pairs.size());

  const double p_bar = p_bar_sum / static_cast<double>(result.items);
  double p_e = 0.0;
  for (double t : class_totals) p_e += (t / rating_total) * (t / rating_total);
  result.fleiss_kappa = p_e >= 1.0 ? 1.0 : (p_bar - p_e) / (1.0 - p_e);
  return result;
}

Agreement LabelStore::agreement(std::optional<std::string_view> question_id) const {
  std::map<std::pair<std::string, std::string>, std::map<std::string, EarnestClass>> ratings;
  for (const auto& [key, label] : labels_) {
    if (question_id && label.question_id != *question_id) continue;
    ratings[{label.question_id, label.normalized_text}][label.annotator_id] = class_of_score(label.score);
  }
  return compute_agreement(ratings);
}

namespace {
constexpr const char* kLabelHeader[] = {"annotator_id", "question_id", "normalized_text", "score", "labeled_at"};
}

void export_labels(std::ostream& out, const LabelStore& store) {
  csv::write_row(out, csv::Row(std::begin(kLabelHeader), std::end(kLabelHeader)));
  for (const auto& [key, l] : store.labels())
    csv::write_row(out, {l.annotator_id, l.question_id, l.normalized_text, std::to_string(l.score),
                         format_timestamp(l.labeled_at)});
}

LabelImportReport import_labels(std::istream& in, LabelStore& store, const Corpus* corpus) {
  csv::Reader reader(in);
  csv::Record rec;
  LabelImportReport report;
  if (!reader.next(rec)) return report;
  if (rec.fields != csv::Row(std::begin(kLabelHeader), std::end(kLabelHeader)))
    throw DataError("label file line 1: expected header annotator_id,question_id,normalized_text,score,labeled_at");
  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
    auto reject = [&](std::string why) { report.rejected.emplace_back(rec.line, std::move(why)); };
    if (rec.fields.size() != 5) {
      reject("expected 5 fields");
      continue;
    }
    EarnestnessLabel l;
    l.annotator_id = rec.fields[0];
    l.question_id = rec.fields[1];
    l.normalized_text = rec.fields[2];
    const std::string& score = rec.fields[3];
    if (score.size() != 1 || score[0] < '1' || score[0] > '5') {
      reject("score must be an integer between 1 and 5");
      continue;
    }
    l.score = score[0] - '0';
    const auto ts = parse_timestamp(rec.fields[4]);
    if (!ts) {
      reject("unparseable labeled_at");
      continue;
    }
    l.labeled_at = *ts;
    try {
      store.record(std::move(l), corpus);
      ++report.imported;
    } catch (const Error& e) {
      reject(e.what());
    }
  }
  return report;
}

}  // namespace eit
