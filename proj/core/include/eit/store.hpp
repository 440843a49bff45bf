#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "eit/annotation.hpp"
#include "eit/classifier.hpp"
#include "eit/corpus.hpp"

namespace eit {

/// Resolves the data directory: explicit flag, then EIT_DATA_DIR, then "./eit-data".
std::filesystem::path resolve_data_dir(const std::string& flag_value);

/// Exclusive advisory lock on `<data_dir>/.lock`, held for the object's lifetime.
/// Throws Conflict immediately if another process holds it.
class StoreLock {
 public:
  explicit StoreLock(const std::filesystem::path& data_dir);
  ~StoreLock();
  StoreLock(const StoreLock&) = delete;
  StoreLock& operator=(const StoreLock&) = delete;

 private:
  int fd_ = -1;
};

/// File-backed course store. Layout under the data directory:
///   eit.json                 format marker
///   corpus/questions.jsonl   one Question per line
///   corpus/responses.jsonl   one Response per line
///   labels/labels.csv        current labels (label file format)
///   labels/audit.csv         superseded labels
///   runs/<run_id>.json       classification runs
///   cache/                   embedding cache
/// Every save writes a temporary file and renames it into place.
class Store {
 public:
  /// Creates the layout (idempotent) and opens it.
  static Store init(const std::filesystem::path& dir);
  /// Throws DataError when `dir` is not an initialized store.
  static Store open(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path cache_dir() const { return dir_ / "cache"; }

  Corpus& corpus() noexcept { return corpus_; }
  const Corpus& corpus() const noexcept { return corpus_; }
  LabelStore& labels() noexcept { return labels_; }
  const LabelStore& labels() const noexcept { return labels_; }
  const std::vector<ClassificationRun>& runs() const noexcept { return runs_; }

  /// Throws NotFound.
  const ClassificationRun& run(std::string_view run_id) const;

  /// Assigns sequence, run_id ("run-000001", ...) and created_at, then persists.
  const ClassificationRun& add_run(ClassificationRun run);

  void save_corpus() const;
  void save_labels() const;

 private:
  explicit Store(std::filesystem::path dir) : dir_(std::move(dir)) {}
  void load();

  std::filesystem::path dir_;
  Corpus corpus_;
  LabelStore labels_;
  std::vector<ClassificationRun> runs_;
};

/// Writes `content` to `path` through a sibling temporary file and a rename.
/// Current time, or $SOURCE_DATE_EPOCH when set so reruns emit identical files.
Timestamp now_timestamp();

void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace eit
