#pragma once

// JSON encodings shared by the store, the service and `--json` output.

#include <nlohmann/json.hpp>

#include "eit/annotation.hpp"
#include "eit/classifier.hpp"
#include "eit/corpus.hpp"
#include "eit/engagement.hpp"
#include "eit/features.hpp"
#include "eit/projection.hpp"
#include "eit/sampling.hpp"

namespace eit {

void to_json(nlohmann::json& j, const Question& q);
void from_json(const nlohmann::json& j, Question& q);
void to_json(nlohmann::json& j, const Response& r);
void from_json(const nlohmann::json& j, Response& r);
void to_json(nlohmann::json& j, const UniqueResponse& u);
void to_json(nlohmann::json& j, const IngestReport& r);

void to_json(nlohmann::json& j, const FeatureRow& f);
void to_json(nlohmann::json& j, const SampleResult& s);
void to_json(nlohmann::json& j, const SamplerConfig& c);

void to_json(nlohmann::json& j, const EarnestnessLabel& l);
void to_json(nlohmann::json& j, const AggregatedLabel& a);
void to_json(nlohmann::json& j, const Agreement& a);

void to_json(nlohmann::json& j, const TsneConfig& c);
void from_json(const nlohmann::json& j, TsneConfig& c);

void to_json(nlohmann::json& j, const Confusion& c);
void to_json(nlohmann::json& j, const EvalMetrics& m);
void to_json(nlohmann::json& j, const CrossValidation& cv);
void to_json(nlohmann::json& j, const AblationCell& c);
void to_json(nlohmann::json& j, const TrainingSetConfig& c);
/// Fields absent from `j` keep their current values.
void from_json(const nlohmann::json& j, TrainingSetConfig& c);
void to_json(nlohmann::json& j, const Neighbor& n);
void from_json(const nlohmann::json& j, Neighbor& n);
void to_json(nlohmann::json& j, const RunEntry& e);
void from_json(const nlohmann::json& j, RunEntry& e);
void to_json(nlohmann::json& j, const ClassificationRun& r);
void from_json(const nlohmann::json& j, ClassificationRun& r);

void to_json(nlohmann::json& j, const TimelineEntry& t);
void to_json(nlohmann::json& j, const AtRiskFlag& f);
void to_json(nlohmann::json& j, const AtRiskConfig& c);
void to_json(nlohmann::json& j, const SemesterAttendance& a);

}  // namespace eit
