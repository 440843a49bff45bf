#include "eit/json.hpp"

#include "eit/error.hpp"

namespace eit {

using nlohmann::json;

namespace {

template <typename Enum, typename Parse>
Enum parse_or_throw(const json& j, const char* key, Parse parse) {
  const auto s = j.at(key).get<std::string>();
  const auto v = parse(s);
  if (!v) throw DataError(std::string("invalid ") + key + ": " + s);
  return *v;
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) it->get_to(out);
}

}  // namespace

void to_json(json& j, const Question& q) {
  j = {{"question_id", q.question_id},
       {"text", q.text},
       {"category", to_string(q.category)},
       {"lecture_number", q.lecture_number},
       {"poll_kind", to_string(q.poll_kind)}};
}

void from_json(const json& j, Question& q) {
  q.question_id = j.at("question_id").get<std::string>();
  q.text = j.at("text").get<std::string>();
  q.category = parse_or_throw<QuestionCategory>(j, "category", parse_category);
  q.lecture_number = j.at("lecture_number").get<int>();
  q.poll_kind = parse_or_throw<PollKind>(j, "poll_kind", parse_poll_kind);
}

void to_json(json& j, const Response& r) {
  j = {{"response_id", r.response_id},
       {"question_id", r.question_id},
       {"student_id", r.student_id},
       {"raw_text", r.raw_text},
       {"normalized_text", r.normalized_text},
       {"mode", to_string(r.mode)},
       {"submitted_at", format_timestamp(r.submitted_at)}};
}

void from_json(const json& j, Response& r) {
  r.response_id = j.at("response_id").get<std::string>();
  r.question_id = j.at("question_id").get<std::string>();
  r.student_id = j.at("student_id").get<std::string>();
  r.raw_text = j.at("raw_text").get<std::string>();
  r.normalized_text = j.value("normalized_text", std::string{});
  r.mode = parse_or_throw<ResponseMode>(j, "mode", parse_mode);
  const auto ts = parse_timestamp(j.at("submitted_at").get<std::string>());
  if (!ts) throw DataError("invalid submitted_at");
  r.submitted_at = *ts;
}

void to_json(json& j, const UniqueResponse& u) {
  j = {{"normalized_text", u.normalized_text}, {"count", u.count}, {"member_response_ids", u.member_response_ids}};
}

void to_json(json& j, const IngestReport& r) {
  json rejected = json::array();
  for (const auto& [line, reason] : r.rejected) rejected.push_back({{"line", line}, {"reason", reason}});
  j = {{"accepted", r.accepted}, {"rejected", rejected}};
}

void to_json(json& j, const FeatureRow& f) {
  j = {{"normalized_text", f.normalized_text},
       {"centroid_distance", f.centroid_distance},
       {"frequency", f.frequency},
       {"edit_distance_to_mode", f.edit_distance_to_mode},
       {"char_length", f.char_length}};
}

void to_json(json& j, const SamplerConfig& c) {
  j = {{"tail_fraction", c.tail_fraction},
       {"per_metric_fraction", c.per_metric_fraction},
       {"target_n", c.target_n},
       {"seed", c.seed}};
}

void to_json(json& j, const SampleResult& s) {
  json items = json::array();
  for (const auto& item : s.items) {
    json metrics = json::array();
    for (auto m : item.metrics) metrics.push_back(to_string(m));
    items.push_back({{"normalized_text", item.normalized_text}, {"metrics", metrics}});
  }
  j = {{"items", items}, {"union_size", s.union_size}};
}

void to_json(json& j, const EarnestnessLabel& l) {
  j = {{"annotator_id", l.annotator_id},
       {"question_id", l.question_id},
       {"normalized_text", l.normalized_text},
       {"score", l.score},
       {"labeled_at", format_timestamp(l.labeled_at)}};
}

void to_json(json& j, const AggregatedLabel& a) {
  j = {{"question_id", a.question_id},
       {"normalized_text", a.normalized_text},
       {"mean_score", a.mean_score},
       {"n_annotators", a.n_annotators},
       {"class", to_string(a.cls)}};
}

void to_json(json& j, const Agreement& a) {
  j = {{"pairwise_percent", a.pairwise_percent},
       {"fleiss_kappa", a.fleiss_kappa},
       {"annotator_pairs", a.annotator_pairs},
       {"items", a.items}};
}

void to_json(json& j, const TsneConfig& c) {
  j = {{"perplexity", c.perplexity},
       {"iterations", c.iterations},
       {"learning_rate", c.learning_rate},
       {"early_exaggeration", c.early_exaggeration},
       {"exaggeration_iterations", c.exaggeration_iterations},
       {"initial_momentum", c.initial_momentum},
       {"final_momentum", c.final_momentum},
       {"momentum_switch_iteration", c.momentum_switch_iteration},
       {"seed", c.seed},
       {"init", c.init == TsneInit::seeded_gaussian ? "seeded_gaussian" : "first_two_principal_components"}};
}

void from_json(const json& j, TsneConfig& c) {
  get_if(j, "perplexity", c.perplexity);
  get_if(j, "iterations", c.iterations);
  get_if(j, "learning_rate", c.learning_rate);
  get_if(j, "early_exaggeration", c.early_exaggeration);
  get_if(j, "exaggeration_iterations", c.exaggeration_iterations);
  get_if(j, "initial_momentum", c.initial_momentum);
  get_if(j, "final_momentum", c.final_momentum);
  get_if(j, "momentum_switch_iteration", c.momentum_switch_iteration);
  get_if(j, "seed", c.seed);
  if (const auto it = j.find("init"); it != j.end()) {
    const auto s = it->get<std::string>();
    if (s == "seeded_gaussian") c.init = TsneInit::seeded_gaussian;
    else if (s == "first_two_principal_components" || s == "pca") c.init = TsneInit::first_two_principal_components;
    else throw InvalidArgument("init: unknown value " + s);
  }
}

void to_json(json& j, const Confusion& c) { j = {{"tp", c.tp}, {"fn", c.fn}, {"fp", c.fp}, {"tn", c.tn}}; }

void to_json(json& j, const EvalMetrics& m) {
  j = {{"accuracy", m.accuracy}, {"recall", m.recall}, {"confusion", m.confusion}, {"n", m.n}};
}

void to_json(json& j, const CrossValidation& cv) {
  j = {{"pooled", cv.pooled},
       {"per_fold", cv.per_fold},
       {"mean_accuracy", cv.mean_accuracy},
       {"mean_recall", cv.mean_recall}};
}

void to_json(json& j, const AblationCell& c) {
  j = {{"non_earnest_fraction", c.non_earnest_fraction},
       {"earnest_seed_count", c.earnest_seed_count},
       {"accuracy", c.metrics.accuracy},
       {"recall", c.metrics.recall},
       {"confusion", c.metrics.confusion},
       {"n", c.metrics.n}};
}

void to_json(json& j, const TrainingSetConfig& c) {
  j = {{"non_earnest_fraction", c.non_earnest_fraction},
       {"earnest_seed_count", c.earnest_seed_count},
       {"target_question_id", c.target_question_id},
       {"seed", c.seed},
       {"space", to_string(c.space)},
       {"k", c.k},
       {"distance", to_string(c.distance)},
       {"tsne", c.tsne}};
}

void from_json(const json& j, TrainingSetConfig& c) {
  get_if(j, "non_earnest_fraction", c.non_earnest_fraction);
  get_if(j, "earnest_seed_count", c.earnest_seed_count);
  get_if(j, "target_question_id", c.target_question_id);
  get_if(j, "seed", c.seed);
  get_if(j, "k", c.k);
  if (j.contains("space")) c.space = parse_or_throw<FeatureSpace>(j, "space", parse_space);
  if (j.contains("distance")) c.distance = parse_or_throw<DistanceMetric>(j, "distance", parse_distance);
  if (j.contains("tsne")) from_json(j.at("tsne"), c.tsne);
}

void to_json(json& j, const Neighbor& n) {
  j = {{"index", n.index}, {"distance", n.distance}, {"class", to_string(n.cls)}};
}

void from_json(const json& j, Neighbor& n) {
  n.index = j.at("index").get<std::size_t>();
  n.distance = j.at("distance").get<double>();
  n.cls = parse_or_throw<EarnestClass>(j, "class", parse_class);
}

void to_json(json& j, const RunEntry& e) {
  j = {{"normalized_text", e.normalized_text},
       {"count", e.count},
       {"class", to_string(e.cls)},
       {"non_earnest_votes", e.non_earnest_votes},
       {"earnest_votes", e.earnest_votes},
       {"neighbors", e.neighbors}};
}

void from_json(const json& j, RunEntry& e) {
  e.normalized_text = j.at("normalized_text").get<std::string>();
  e.count = j.at("count").get<std::size_t>();
  e.cls = parse_or_throw<EarnestClass>(j, "class", parse_class);
  e.non_earnest_votes = j.at("non_earnest_votes").get<std::size_t>();
  e.earnest_votes = j.at("earnest_votes").get<std::size_t>();
  e.neighbors = j.at("neighbors").get<std::vector<Neighbor>>();
}

void to_json(json& j, const ClassificationRun& r) {
  json classes = json::array();
  for (auto c : r.training_classes) classes.push_back(to_string(c));
  j = {{"run_id", r.run_id},
       {"sequence", r.sequence},
       {"question_id", r.question_id},
       {"config", r.config},
       {"provider_id", r.provider_id},
       {"fingerprint", r.fingerprint},
       {"created_at", format_timestamp(r.created_at)},
       {"training_texts", r.training_texts},
       {"training_classes", classes},
       {"entries", r.entries}};
}

void from_json(const json& j, ClassificationRun& r) {
  r.run_id = j.at("run_id").get<std::string>();
  r.sequence = j.at("sequence").get<std::uint64_t>();
  r.question_id = j.at("question_id").get<std::string>();
  from_json(j.at("config"), r.config);
  r.provider_id = j.at("provider_id").get<std::string>();
  r.fingerprint = j.at("fingerprint").get<std::string>();
  const auto ts = parse_timestamp(j.at("created_at").get<std::string>());
  if (!ts) throw DataError("invalid created_at in run " + r.run_id);
  r.created_at = *ts;
  r.training_texts = j.at("training_texts").get<std::vector<std::string>>();
  r.training_classes.clear();
  for (const auto& c : j.at("training_classes")) {
    const auto cls = parse_class(c.get<std::string>());
    if (!cls) throw DataError("invalid training class in run " + r.run_id);
    r.training_classes.push_back(*cls);
  }
  r.entries = j.at("entries").get<std::vector<RunEntry>>();
}

void to_json(json& j, const TimelineEntry& t) {
  j = {{"lecture_number", t.lecture_number},
       {"responses", t.responses},
       {"non_earnest", t.non_earnest},
       {"fraction", t.fraction ? json(*t.fraction) : json(nullptr)}};
}

void to_json(json& j, const AtRiskFlag& f) {
  j = {{"student_id", f.student_id},
       {"window_fraction", f.window_fraction},
       {"evidence",
        {{"responses", f.window_responses}, {"non_earnest", f.window_non_earnest}, {"lectures", f.window}}}};
}

void to_json(json& j, const AtRiskConfig& c) {
  j = {{"threshold", c.non_earnest_threshold}, {"window", c.window_lectures}, {"min_responses", c.min_responses}};
}

void to_json(json& j, const SemesterAttendance& a) {
  j = {{"student_id", a.student_id},
       {"credited_lectures", a.credited_lectures},
       {"total_lectures", a.total_lectures},
       {"score", a.score},
       {"course_weight", a.course_weight}};
}

}  // namespace eit
