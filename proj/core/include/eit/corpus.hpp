#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace eit {

using Timestamp = std::chrono::sys_seconds;

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp(Timestamp t);
/// Parses `text` with a strftime-style `format` as UTC. Returns nullopt on mismatch
/// or trailing input.
std::optional<Timestamp> parse_timestamp(std::string_view text, std::string_view format = "%Y-%m-%dT%H:%M:%SZ");

enum class QuestionCategory { reflection, conceptual, coding, numerical };
enum class PollKind { word_cloud, multiple_choice };
enum class ResponseMode { synchronous, asynchronous };

std::string_view to_string(QuestionCategory c) noexcept;
std::string_view to_string(PollKind k) noexcept;
std::string_view to_string(ResponseMode m) noexcept;
std::optional<QuestionCategory> parse_category(std::string_view s) noexcept;
std::optional<PollKind> parse_poll_kind(std::string_view s) noexcept;
std::optional<ResponseMode> parse_mode(std::string_view s) noexcept;

struct Question {
  std::string question_id;
  std::string text;
  QuestionCategory category = QuestionCategory::reflection;
  int lecture_number = 1;
  PollKind poll_kind = PollKind::word_cloud;

  bool operator==(const Question&) const = default;
};

struct Response {
  std::string response_id;
  std::string question_id;
  std::string student_id;
  std::string raw_text;
  std::string normalized_text;
  ResponseMode mode = ResponseMode::synchronous;
  Timestamp submitted_at{};

  bool operator==(const Response&) const = default;
};

struct UniqueResponse {
  std::string normalized_text;
  std::size_t count = 0;
  std::vector<std::string> member_response_ids;  // sorted
};

/// Where each canonical field lives in a vendor export.
struct ColumnMapping {
  std::map<std::string, std::string> columns;       // canonical field -> source column
  std::string timestamp_format = "%Y-%m-%dT%H:%M:%SZ";
  std::map<std::string, ResponseMode> mode_values;  // source value -> mode
  char delimiter = ',';

  static constexpr std::string_view kRequired[] = {"question_id", "student_id", "raw_text", "mode",
                                                   "submitted_at"};

  /// Reads a `key = value` mapping file. Recognized keys: `column.<field>`,
  /// `timestamp_format`, `delimiter` (a single character or `tab`), and
  /// `mode.<source value>` = synchronous|asynchronous. `#` starts a comment.
  static ColumnMapping load(const std::string& path);
  static ColumnMapping parse(std::string_view text);

  /// Throws InvalidArgument naming the first unmapped required field.
  void validate() const;
};

/// In-memory corpus of questions and responses. Mutation is the caller's
/// responsibility to serialize; const access is safe from many threads.
class Corpus {
 public:
  /// Throws InvalidArgument on a duplicate id or a non-positive lecture number.
  void add_question(Question q);

  /// Returns false when an identical (student, question, raw text, time)
  /// submission already exists. Throws NotFound for an unknown question and
  /// InvalidArgument for a duplicate response_id. normalized_text is
  /// recomputed from raw_text. An empty response_id is assigned.
  bool add_response(Response r);

  const Question* find_question(std::string_view id) const;
  const Question& question(std::string_view id) const;  // throws NotFound
  const std::vector<Question>& questions() const noexcept { return questions_; }
  const std::vector<Response>& responses() const noexcept { return responses_; }

  /// Responses of one question in insertion order. Throws NotFound.
  std::vector<const Response*> responses_for(std::string_view question_id) const;

  /// Grouped by normalized text, ordered by (count desc, text asc). Throws NotFound.
  std::vector<UniqueResponse> unique_responses(std::string_view question_id) const;

  /// Distinct lecture numbers that have at least one question, ascending.
  std::vector<int> lecture_roster() const;

  /// Distinct student ids, ascending.
  std::vector<std::string> students() const;

 private:
  using DedupKey = std::tuple<std::string, std::string, std::string, std::int64_t>;

  std::vector<Question> questions_;
  std::unordered_map<std::string, std::size_t> question_index_;
  std::vector<Response> responses_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_question_;
  std::set<std::string> response_ids_;
  std::set<DedupKey> dedup_;
};

struct IngestReport {
  std::size_t accepted = 0;
  std::vector<std::pair<std::size_t, std::string>> rejected;  // (line, reason)
};

/// Appends every valid row of a delimited export to `corpus`. A missing
/// mapped column is fatal (InvalidArgument); bad rows are reported and skipped.
IngestReport ingest(Corpus& corpus, std::istream& in, const ColumnMapping& mapping);
IngestReport ingest_file(Corpus& corpus, const std::string& path, const ColumnMapping& mapping);

/// Question metadata file: header `question_id,text,category,lecture_number,poll_kind`.
/// Returns the number of questions added; malformed rows throw DataError with the line.
std::size_t load_questions(Corpus& corpus, std::istream& in, char delimiter = ',');

}  // namespace eit
