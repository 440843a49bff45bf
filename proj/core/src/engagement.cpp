#include "eit/engagement.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "eit/error.hpp"

namespace eit {

std::string_view to_string(Credit c) noexcept { return c == Credit::full ? "full" : "none"; }

Credit attendance_credit(const LectureParticipation& p) {
  if (p.answered_sync >= 1) return Credit::full;
  if (p.questions_in_lecture > 0 && p.answered_async >= p.questions_in_lecture) return Credit::full;
  return Credit::none;
}

double attendance_score(std::size_t credited, std::size_t total_lectures, std::size_t allowed_misses) {
  if (total_lectures <= allowed_misses) return 1.0;
  const double required = static_cast<double>(total_lectures - allowed_misses);
  return std::min(1.0, static_cast<double>(credited) / required);
}

std::vector<LectureParticipation> participation(const Corpus& corpus, std::string_view student_id) {
  std::map<int, LectureParticipation> by_lecture;
  for (int lecture : corpus.lecture_roster()) by_lecture[lecture] = {std::string(student_id), lecture, 0, 0, 0};
  for (const auto& q : corpus.questions()) ++by_lecture[q.lecture_number].questions_in_lecture;

  std::set<std::pair<std::string, ResponseMode>> answered;
  for (const auto& r : corpus.responses())
    if (r.student_id == student_id) answered.emplace(r.question_id, r.mode);
  for (const auto& [qid, mode] : answered) {
    auto& p = by_lecture[corpus.question(qid).lecture_number];
    (mode == ResponseMode::synchronous ? p.answered_sync : p.answered_async)++;
  }

  std::vector<LectureParticipation> out;
  for (auto& [lecture, p] : by_lecture) out.push_back(std::move(p));
  return out;
}

SemesterAttendance semester_attendance(const Corpus& corpus, std::string_view student_id,
                                       std::optional<std::size_t> total_lectures) {
  const auto roster = corpus.lecture_roster();
  if (roster.empty()) throw DataError("the lecture roster is empty");
  SemesterAttendance s;
  s.student_id = std::string(student_id);
  for (const auto& p : participation(corpus, student_id))
    if (attendance_credit(p) == Credit::full) ++s.credited_lectures;
  s.total_lectures = total_lectures.value_or(roster.size());
  s.score = attendance_score(s.credited_lectures, s.total_lectures);
  return s;
}

std::vector<const ClassificationRun*> latest_runs(std::span<const ClassificationRun> runs) {
  std::map<std::string, const ClassificationRun*> latest;
  for (const auto& r : runs) {
    auto& slot = latest[r.question_id];
    if (!slot || r.sequence > slot->sequence) slot = &r;
  }
  std::vector<const ClassificationRun*> out;
  for (const auto& [q, r] : latest) out.push_back(r);
  return out;
}

namespace {

/// question id -> (normalized text -> class) from the latest run of each question.
using ClassIndex = std::unordered_map<std::string, std::unordered_map<std::string, EarnestClass>>;

ClassIndex index_runs(std::span<const ClassificationRun> runs) {
  ClassIndex index;
  for (const auto* run : latest_runs(runs)) {
    auto& m = index[run->question_id];
    for (const auto& e : run->entries) m[e.normalized_text] = e.cls;
  }
  return index;
}

struct Tally {
  std::size_t responses = 0;
  std::size_t non_earnest = 0;
};

/// student -> lecture -> tally of classified responses.
std::map<std::string, std::map<int, Tally>> tally_all(const Corpus& corpus, const ClassIndex& index) {
  std::map<std::string, std::map<int, Tally>> out;
  for (const auto& r : corpus.responses()) {
    const auto q = index.find(r.question_id);
    if (q == index.end()) continue;
    const auto c = q->second.find(r.normalized_text);
    if (c == q->second.end()) continue;
    auto& t = out[r.student_id][corpus.question(r.question_id).lecture_number];
    ++t.responses;
    if (c->second == EarnestClass::non_earnest) ++t.non_earnest;
  }
  return out;
}

}  // namespace

std::vector<TimelineEntry> earnestness_timeline(const Corpus& corpus, std::string_view student_id,
                                                std::span<const ClassificationRun> runs) {
  if (runs.empty()) throw InvalidArgument("no classification runs");
  const auto tallies = tally_all(corpus, index_runs(runs));
  const auto student = tallies.find(std::string(student_id));
  std::vector<TimelineEntry> out;
  for (int lecture : corpus.lecture_roster()) {
    TimelineEntry e;
    e.lecture_number = lecture;
    if (student != tallies.end()) {
      if (const auto t = student->second.find(lecture); t != student->second.end()) {
        e.responses = t->second.responses;
        e.non_earnest = t->second.non_earnest;
      }
    }
    if (e.responses > 0) e.fraction = static_cast<double>(e.non_earnest) / static_cast<double>(e.responses);
    out.push_back(e);
  }
  return out;
}

void AtRiskConfig::validate() const {
  if (!(non_earnest_threshold >= 0.0 && non_earnest_threshold <= 1.0))
    throw InvalidArgument("threshold must be in [0, 1]");
  if (window_lectures < 1) throw InvalidArgument("window must be at least 1 lecture");
}

std::vector<AtRiskFlag> flag_at_risk(const Corpus& corpus, std::span<const ClassificationRun> runs,
                                     const AtRiskConfig& config) {
  config.validate();
  const auto index = index_runs(runs);
  std::set<int> classified_lectures;
  for (const auto& [qid, classes] : index) classified_lectures.insert(corpus.question(qid).lecture_number);
  std::vector<int> window(classified_lectures.begin(), classified_lectures.end());
  if (window.size() > config.window_lectures)
    window.erase(window.begin(), window.end() - static_cast<std::ptrdiff_t>(config.window_lectures));

  std::vector<AtRiskFlag> flags;
  for (const auto& [student, lectures] : tally_all(corpus, index)) {
    AtRiskFlag f;
    f.student_id = student;
    f.window = window;
    for (int lecture : window) {
      if (const auto t = lectures.find(lecture); t != lectures.end()) {
        f.window_responses += t->second.responses;
        f.window_non_earnest += t->second.non_earnest;
      }
    }
    if (f.window_responses == 0 || f.window_responses < config.min_responses) continue;
    f.window_fraction = static_cast<double>(f.window_non_earnest) / static_cast<double>(f.window_responses);
    if (f.window_fraction >= config.non_earnest_threshold) flags.push_back(std::move(f));
  }
  std::sort(flags.begin(), flags.end(), [](const AtRiskFlag& a, const AtRiskFlag& b) {
    if (a.window_fraction != b.window_fraction) return a.window_fraction > b.window_fraction;
    return a.student_id < b.student_id;
  });
  return flags;
}

}  // namespace eit
