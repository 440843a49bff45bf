#pragma once

// Deterministic synthetic data: a two-cluster embedding fixture for the
// labeled-fraction ablation, and a small course export for end-to-end runs.

#include <cstdint>
#include <filesystem>
#include <string>

#include "eit/classifier.hpp"

namespace eit::synthetic {

struct TwoClusterSpec {
  std::size_t dimension = 16;
  std::size_t earnest_uniques = 200;
  std::size_t non_earnest_uniques = 20;  // 10:1 imbalance
  std::size_t pool_size = 40;
  double separation = 3.0;  // distance between the cluster centers, in units of the cluster spread
  double label_noise = 0.05;
  std::uint64_t seed = 1;
};

struct TwoClusterFixture {
  LabeledSet pool;     // non-earnest responses from other questions
  AblationTask task;   // target question: ranked frequent responses + noisy eval labels
  std::vector<EarnestClass> true_classes;  // eval_set row -> class before label noise
};

/// Earnest points are N(+s/2 e0, I), non-earnest N(-s/2 e0, I). Earnest
/// responses get Zipf-like counts (most popular first); non-earnest ones
/// occur once. A `label_noise` share of eval labels is flipped.
TwoClusterFixture make_two_cluster_fixture(const TwoClusterSpec& spec);

struct CourseFixture {
  std::string questions_csv;
  std::string responses_csv;
  std::string mapping_conf;
  std::string labels_csv;
};

/// Five word-cloud questions (one per lecture 1..5) and one multiple-choice
/// question per lecture, ~200 responses per word-cloud question from a
/// vendor-style export, plus three annotators' rubric scores for every unique
/// word-cloud response.
CourseFixture make_course_fixture(std::uint64_t seed = 2023);

void write_course_fixture(const std::filesystem::path& dir, const CourseFixture& fixture);

}  // namespace eit::synthetic
