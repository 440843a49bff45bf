#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eit/classifier.hpp"
#include "eit/corpus.hpp"

namespace eit {

struct LectureParticipation {
  std::string student_id;
  int lecture_number = 0;
  std::size_t answered_sync = 0;
  std::size_t answered_async = 0;
  std::size_t questions_in_lecture = 0;
};

enum class Credit { none, full };
std::string_view to_string(Credit c) noexcept;

/// Full credit for answering at least one question live, or for answering
/// every question of the lecture asynchronously. Credit is for completion only.
Credit attendance_credit(const LectureParticipation& p);

inline constexpr std::size_t kAllowedMisses = 3;

/// min(1, credited / (total - allowed_misses)); 1 when total <= allowed_misses.
double attendance_score(std::size_t credited, std::size_t total_lectures, std::size_t allowed_misses = kAllowedMisses);

/// Per-lecture counts of distinct questions answered, for every roster lecture.
std::vector<LectureParticipation> participation(const Corpus& corpus, std::string_view student_id);

struct SemesterAttendance {
  std::string student_id;
  std::size_t credited_lectures = 0;
  std::size_t total_lectures = 0;
  double score = 0.0;
  double course_weight = 0.05;  // share of the final grade; reported, not applied
};

/// `total_lectures` defaults to the roster size. Throws DataError when the roster is empty.
SemesterAttendance semester_attendance(const Corpus& corpus, std::string_view student_id,
                                       std::optional<std::size_t> total_lectures = std::nullopt);

struct TimelineEntry {
  int lecture_number = 0;
  std::size_t responses = 0;
  std::size_t non_earnest = 0;
  std::optional<double> fraction;  // absent when responses == 0
};

/// Latest run (highest sequence) per question.
std::vector<const ClassificationRun*> latest_runs(std::span<const ClassificationRun> runs);

/// One entry per roster lecture. Only word-cloud responses to questions with a
/// run count. Throws InvalidArgument when `runs` is empty.
std::vector<TimelineEntry> earnestness_timeline(const Corpus& corpus, std::string_view student_id,
                                                std::span<const ClassificationRun> runs);

struct AtRiskConfig {
  double non_earnest_threshold = 0.5;
  std::size_t window_lectures = 3;
  std::size_t min_responses = 3;

  void validate() const;
};

struct AtRiskFlag {
  std::string student_id;
  double window_fraction = 0.0;
  std::size_t window_responses = 0;
  std::size_t window_non_earnest = 0;
  std::vector<int> window;  // lecture numbers considered
};

/// The window is the last `window_lectures` lectures (by number) that have a
/// classified question. A student is flagged when they have at least
/// `min_responses` classified responses there and the non-earnest share is at
/// or above the threshold. Sorted by fraction descending, then student id.
std::vector<AtRiskFlag> flag_at_risk(const Corpus& corpus, std::span<const ClassificationRun> runs,
                                     const AtRiskConfig& config);

}  // namespace eit
