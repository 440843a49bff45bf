#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <unistd.h>

#include "eit/annotation.hpp"
#include "eit/corpus.hpp"
#include "eit/store.hpp"
#include "eit/synthetic.hpp"

namespace testing_support {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("eit-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Initialized store holding the bundled synthetic course and its labels.
inline eit::Store course_store(const std::filesystem::path& dir) {
  const auto fx = eit::synthetic::make_course_fixture();
  auto store = eit::Store::init(dir);
  std::istringstream questions(fx.questions_csv);
  eit::load_questions(store.corpus(), questions);
  std::istringstream responses(fx.responses_csv);
  eit::ingest(store.corpus(), responses, eit::ColumnMapping::parse(fx.mapping_conf));
  std::istringstream labels(fx.labels_csv);
  eit::import_labels(labels, store.labels(), &store.corpus());
  store.save_corpus();
  store.save_labels();
  return store;
}

}  // namespace testing_support
