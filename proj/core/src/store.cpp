#include "eit/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "eit/error.hpp"
#include "eit/csv.hpp"
#include "eit/json.hpp"

namespace eit {

namespace fs = std::filesystem;

fs::path resolve_data_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("EIT_DATA_DIR"); env && *env) return env;
  return "eit-data";
}

StoreLock::StoreLock(const fs::path& data_dir) {
  const auto path = data_dir / ".lock";
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw DataError("cannot open lock file " + path.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw Conflict("data directory " + data_dir.string() + " is locked by another writer");
  }
}

StoreLock::~StoreLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

Timestamp now_timestamp() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (*end == '\0' && v >= 0) return Timestamp(std::chrono::seconds(v));
  }
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw DataError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

constexpr int kFormatVersion = 1;

template <typename T>
std::vector<T> read_jsonl(const fs::path& path) {
  std::vector<T> out;
  if (!fs::exists(path)) return out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line).get<T>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + " line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

template <typename Range>
std::string to_jsonl(const Range& items) {
  std::string out;
  for (const auto& item : items) {
    out += nlohmann::json(item).dump();
    out += '\n';
  }
  return out;
}

}  // namespace

Store Store::init(const fs::path& dir) {
  fs::create_directories(dir / "corpus");
  fs::create_directories(dir / "labels");
  fs::create_directories(dir / "runs");
  fs::create_directories(dir / "cache");
  const auto marker = dir / "eit.json";
  if (!fs::exists(marker)) write_file_atomic(marker, nlohmann::json{{"format", kFormatVersion}}.dump() + "\n");
  return open(dir);
}

Store Store::open(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("data directory does not exist: " + dir.string());
  if (!fs::exists(dir / "eit.json"))
    throw DataError("not an initialized data directory (run `eit init`): " + dir.string());
  Store s(dir);
  s.load();
  return s;
}

void Store::load() {
  for (auto& q : read_jsonl<Question>(dir_ / "corpus" / "questions.jsonl")) corpus_.add_question(std::move(q));
  for (auto& r : read_jsonl<Response>(dir_ / "corpus" / "responses.jsonl")) corpus_.add_response(std::move(r));

  if (const auto path = dir_ / "labels" / "labels.csv"; fs::exists(path)) {
    std::istringstream in(read_file(path));
    const auto report = import_labels(in, labels_);
    if (!report.rejected.empty())
      throw DataError(path.string() + " line " + std::to_string(report.rejected.front().first) + ": " +
                      report.rejected.front().second);
  }

  if (const auto path = dir_ / "labels" / "audit.csv"; fs::exists(path)) {
    std::istringstream in(read_file(path));
    const auto records = csv::read_all(in);
    std::vector<EarnestnessLabel> audit;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto& f = records[i].fields;
      if (f.size() == 1 && f[0].empty()) continue;
      const auto ts = f.size() == 5 ? parse_timestamp(f[4]) : std::nullopt;
      int score = 0;
      const auto [end, ec] = f.size() == 5 ? std::from_chars(f[3].data(), f[3].data() + f[3].size(), score)
                                           : std::from_chars_result{nullptr, std::errc::invalid_argument};
      if (!ts || ec != std::errc{} || end != f[3].data() + f[3].size())
        throw DataError(path.string() + " line " + std::to_string(records[i].line) + ": malformed audit record");
      audit.push_back({f[0], f[1], f[2], score, *ts});
    }
    labels_.replace_audit(std::move(audit));  // replaces the entries recorded while loading labels.csv
  }

  std::vector<fs::path> run_files;
  if (fs::is_directory(dir_ / "runs"))
    for (const auto& entry : fs::directory_iterator(dir_ / "runs"))
      if (entry.path().extension() == ".json") run_files.push_back(entry.path());
  for (const auto& path : run_files) {
    try {
      runs_.push_back(nlohmann::json::parse(read_file(path)).get<ClassificationRun>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ": " + e.what());
    }
  }
  std::sort(runs_.begin(), runs_.end(),
            [](const ClassificationRun& a, const ClassificationRun& b) { return a.sequence < b.sequence; });
}

const ClassificationRun& Store::run(std::string_view run_id) const {
  for (const auto& r : runs_)
    if (r.run_id == run_id) return r;
  throw NotFound("unknown run " + std::string(run_id));
}

const ClassificationRun& Store::add_run(ClassificationRun run) {
  run.sequence = runs_.empty() ? 1 : runs_.back().sequence + 1;
  char id[32];
  std::snprintf(id, sizeof id, "run-%06llu", static_cast<unsigned long long>(run.sequence));
  run.run_id = id;
  run.created_at = now_timestamp();
  write_file_atomic(dir_ / "runs" / (run.run_id + ".json"), nlohmann::json(run).dump(1) + "\n");
  runs_.push_back(std::move(run));
  return runs_.back();
}

void Store::save_corpus() const {
  write_file_atomic(dir_ / "corpus" / "questions.jsonl", to_jsonl(corpus_.questions()));
  write_file_atomic(dir_ / "corpus" / "responses.jsonl", to_jsonl(corpus_.responses()));
}

void Store::save_labels() const {
  std::ostringstream current;
  export_labels(current, labels_);
  write_file_atomic(dir_ / "labels" / "labels.csv", current.str());

  std::ostringstream audit;
  audit << "annotator_id,question_id,normalized_text,score,labeled_at\n";
  for (const auto& l : labels_.audit())
    audit << csv::escape(l.annotator_id) << ',' << csv::escape(l.question_id) << ',' << csv::escape(l.normalized_text)
          << ',' << l.score << ',' << format_timestamp(l.labeled_at) << '\n';
  write_file_atomic(dir_ / "labels" / "audit.csv", audit.str());
}

}  // namespace eit
