#include "eit/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "eit/csv.hpp"
#include "eit/error.hpp"
#include "eit/text.hpp"

namespace eit {

std::string format_timestamp(Timestamp t) {
  const std::time_t tt = t.time_since_epoch().count();
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text, std::string_view format) {
  std::tm tm{};
  std::istringstream in{std::string(text)};
  in >> std::get_time(&tm, std::string(format).c_str());
  if (in.fail()) return std::nullopt;
  in >> std::ws;
  if (!in.eof()) return std::nullopt;
  const std::time_t tt = timegm(&tm);
  return Timestamp{std::chrono::seconds{tt}};
}

std::string_view to_string(QuestionCategory c) noexcept {
  switch (c) {
    case QuestionCategory::reflection: return "reflection";
    case QuestionCategory::conceptual: return "conceptual";
    case QuestionCategory::coding: return "coding";
    case QuestionCategory::numerical: return "numerical";
  }
  return "reflection";
}

std::string_view to_string(PollKind k) noexcept {
  return k == PollKind::word_cloud ? "word_cloud" : "multiple_choice";
}

std::string_view to_string(ResponseMode m) noexcept {
  return m == ResponseMode::synchronous ? "synchronous" : "asynchronous";
}

std::optional<QuestionCategory> parse_category(std::string_view s) noexcept {
  for (auto c : {QuestionCategory::reflection, QuestionCategory::conceptual, QuestionCategory::coding,
                 QuestionCategory::numerical})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::optional<PollKind> parse_poll_kind(std::string_view s) noexcept {
  if (s == "word_cloud") return PollKind::word_cloud;
  if (s == "multiple_choice") return PollKind::multiple_choice;
  return std::nullopt;
}

std::optional<ResponseMode> parse_mode(std::string_view s) noexcept {
  if (s == "synchronous") return ResponseMode::synchronous;
  if (s == "asynchronous") return ResponseMode::asynchronous;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ColumnMapping ColumnMapping::parse(std::string_view text) {
  ColumnMapping m;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw DataError("mapping line " + std::to_string(line_no) + ": expected key = value");
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.rfind("column.", 0) == 0) {
      m.columns[key.substr(7)] = value;
    } else if (key.rfind("mode.", 0) == 0) {
      const auto mode = parse_mode(value);
      if (!mode)
        throw DataError("mapping line " + std::to_string(line_no) + ": mode must be synchronous or asynchronous");
      m.mode_values[key.substr(5)] = *mode;
    } else if (key == "timestamp_format") {
      m.timestamp_format = value;
    } else if (key == "delimiter") {
      if (value == "tab") {
        m.delimiter = '\t';
      } else if (value.size() == 1) {
        m.delimiter = value[0];
      } else {
        throw DataError("mapping line " + std::to_string(line_no) + ": delimiter must be one character or 'tab'");
      }
    } else {
      throw DataError("mapping line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return m;
}

ColumnMapping ColumnMapping::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open mapping file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ColumnMapping::validate() const {
  for (auto field : kRequired) {
    const auto it = columns.find(std::string(field));
    if (it == columns.end() || it->second.empty())
      throw InvalidArgument("column mapping does not map required field '" + std::string(field) + "'");
  }
}

void Corpus::add_question(Question q) {
  if (q.question_id.empty()) throw InvalidArgument("question_id must not be empty");
  if (q.lecture_number < 1) throw InvalidArgument("lecture_number must be positive for " + q.question_id);
  if (question_index_.contains(q.question_id)) throw InvalidArgument("duplicate question_id " + q.question_id);
  question_index_.emplace(q.question_id, questions_.size());
  by_question_[q.question_id];
  questions_.push_back(std::move(q));
}

bool Corpus::add_response(Response r) {
  if (!question_index_.contains(r.question_id)) throw NotFound("unknown question " + r.question_id);
  r.normalized_text = normalize_text(r.raw_text);
  DedupKey key{r.student_id, r.question_id, r.raw_text, r.submitted_at.time_since_epoch().count()};
  if (dedup_.contains(key)) return false;
  if (r.response_id.empty()) {
    auto& members = by_question_[r.question_id];
    std::size_t n = members.size() + 1;
    do {
      r.response_id = r.question_id + "-" + std::to_string(n++);
    } while (response_ids_.contains(r.response_id));
  } else if (response_ids_.contains(r.response_id)) {
    throw InvalidArgument("duplicate response_id " + r.response_id);
  }
  dedup_.insert(std::move(key));
  response_ids_.insert(r.response_id);
  by_question_[r.question_id].push_back(responses_.size());
  responses_.push_back(std::move(r));
  return true;
}

const Question* Corpus::find_question(std::string_view id) const {
  const auto it = question_index_.find(std::string(id));
  return it == question_index_.end() ? nullptr : &questions_[it->second];
}

const Question& Corpus::question(std::string_view id) const {
  if (const auto* q = find_question(id)) return *q;
  throw NotFound("unknown question " + std::string(id));
}

std::vector<const Response*> Corpus::responses_for(std::string_view question_id) const {
  const auto it = by_question_.find(std::string(question_id));
  if (it == by_question_.end()) throw NotFound("unknown question " + std::string(question_id));
  std::vector<const Response*> out;
  out.reserve(it->second.size());
  for (auto i : it->second) out.push_back(&responses_[i]);
  return out;
}

std::vector<UniqueResponse> Corpus::unique_responses(std::string_view question_id) const {
  std::map<std::string, UniqueResponse> groups;
  for (const Response* r : responses_for(question_id)) {
    auto& g = groups[r->normalized_text];
    g.normalized_text = r->normalized_text;
    ++g.count;
    g.member_response_ids.push_back(r->response_id);
  }
  std::vector<UniqueResponse> out;
  out.reserve(groups.size());
  for (auto& [text, g] : groups) {
    std::sort(g.member_response_ids.begin(), g.member_response_ids.end());
    out.push_back(std::move(g));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const UniqueResponse& a, const UniqueResponse& b) { return a.count > b.count; });
  return out;
}

std::vector<int> Corpus::lecture_roster() const {
  std::set<int> lectures;
  for (const auto& q : questions_) lectures.insert(q.lecture_number);
  return {lectures.begin(), lectures.end()};
}

std::vector<std::string> Corpus::students() const {
  std::set<std::string> ids;
  for (const auto& r : responses_) ids.insert(r.student_id);
  return {ids.begin(), ids.end()};
}

IngestReport ingest(Corpus& corpus, std::istream& in, const ColumnMapping& mapping) {
  mapping.validate();
  csv::Reader reader(in, mapping.delimiter);
  csv::Record header;
  if (!reader.next(header)) throw DataError("ingest file is empty (no header row)");

  std::map<std::string, std::size_t> column_index;
  for (std::size_t i = 0; i < header.fields.size(); ++i) column_index[std::string(trim(header.fields[i]))] = i;

  std::map<std::string, std::size_t> field_index;
  for (const auto& [field, column] : mapping.columns) {
    const auto it = column_index.find(column);
    if (it == column_index.end())
      throw InvalidArgument("mapped column '" + column + "' for field '" + field + "' is not in the header");
    field_index[field] = it->second;
  }

  IngestReport report;
  csv::Record rec;
  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;  // blank line
    auto get = [&](const std::string& field) -> std::optional<std::string> {
      const auto it = field_index.find(field);
      if (it == field_index.end()) return std::nullopt;
      if (it->second >= rec.fields.size()) return std::nullopt;
      return rec.fields[it->second];
    };
    auto reject = [&](std::string reason) { report.rejected.emplace_back(rec.line, std::move(reason)); };

    const auto qid = get("question_id");
    const auto sid = get("student_id");
    const auto text = get("raw_text");
    const auto mode_value = get("mode");
    const auto when = get("submitted_at");
    if (!qid || !sid || !text || !mode_value || !when || trim(*qid).empty() || trim(*sid).empty()) {
      reject("missing fields");
      continue;
    }
    const auto mode_it = mapping.mode_values.find(std::string(trim(*mode_value)));
    if (mode_it == mapping.mode_values.end()) {
      reject("unknown mode");
      continue;
    }
    const auto ts = parse_timestamp(trim(*when), mapping.timestamp_format);
    if (!ts) {
      reject("unparseable timestamp");
      continue;
    }
    if (!corpus.find_question(trim(*qid))) {
      reject("unknown question");
      continue;
    }
    Response r;
    r.response_id = get("response_id").value_or("");
    r.question_id = std::string(trim(*qid));
    r.student_id = std::string(trim(*sid));
    r.raw_text = *text;
    r.mode = mode_it->second;
    r.submitted_at = *ts;
    try {
      if (corpus.add_response(std::move(r))) {
        ++report.accepted;
      } else {
        reject("duplicate");
      }
    } catch (const InvalidArgument& e) {
      reject(e.what());
    }
  }
  return report;
}

IngestReport ingest_file(Corpus& corpus, const std::string& path, const ColumnMapping& mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + path);
  return ingest(corpus, in, mapping);
}

std::size_t load_questions(Corpus& corpus, std::istream& in, char delimiter) {
  csv::Reader reader(in, delimiter);
  csv::Record header;
  if (!reader.next(header)) return 0;
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < header.fields.size(); ++i) idx[std::string(trim(header.fields[i]))] = i;
  for (const char* col : {"question_id", "text", "category", "lecture_number", "poll_kind"})
    if (!idx.contains(col)) throw DataError(std::string("questions file lacks column '") + col + "'");

  std::size_t added = 0;
  csv::Record rec;
  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
    const auto line = std::to_string(rec.line);
    if (rec.fields.size() != header.fields.size()) throw DataError("questions line " + line + ": wrong field count");
    Question q;
    q.question_id = std::string(trim(rec.fields[idx["question_id"]]));
    q.text = rec.fields[idx["text"]];
    const auto cat = parse_category(trim(rec.fields[idx["category"]]));
    const auto kind = parse_poll_kind(trim(rec.fields[idx["poll_kind"]]));
    if (!cat) throw DataError("questions line " + line + ": unknown category");
    if (!kind) throw DataError("questions line " + line + ": unknown poll_kind");
    q.category = *cat;
    q.poll_kind = *kind;
    try {
      q.lecture_number = std::stoi(std::string(trim(rec.fields[idx["lecture_number"]])));
    } catch (const std::exception&) {
      throw DataError("questions line " + line + ": lecture_number is not an integer");
    }
    if (corpus.find_question(q.question_id)) continue;  // re-loading the same file is a no-op
    try {
      corpus.add_question(std::move(q));
    } catch (const InvalidArgument& e) {
      throw DataError("questions line " + line + ": " + e.what());
    }
    ++added;
  }
  return added;
}

}  // namespace eit
