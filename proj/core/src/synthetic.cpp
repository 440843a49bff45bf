#include "eit/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "eit/csv.hpp"
#include "eit/random.hpp"
#include "eit/store.hpp"
#include "eit/text.hpp"

namespace eit::synthetic {

TwoClusterFixture make_two_cluster_fixture(const TwoClusterSpec& spec) {
  Rng rng(spec.seed);
  const std::size_t d = spec.dimension;
  auto draw = [&](double center) {
    std::vector<double> v(d);
    for (auto& x : v) x = rng.normal();
    v[0] += center;
    return v;
  };
  const double half = spec.separation / 2.0;

  TwoClusterFixture fx;
  fx.pool.vectors = Matrix(0, d);
  for (std::size_t i = 0; i < spec.pool_size; ++i) {
    const std::string text = "pool-" + std::to_string(i);
    fx.pool.add(draw(-half), EarnestClass::non_earnest, text_hash(text), text);
  }

  struct Item {
    std::string text;
    std::vector<double> v;
    EarnestClass cls;
    std::size_t count;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < spec.earnest_uniques; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "earnest-%04zu", i);
    items.push_back({name, draw(half), EarnestClass::earnest, std::max<std::size_t>(1, 60 / (i + 1))});
  }
  for (std::size_t i = 0; i < spec.non_earnest_uniques; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "non-earnest-%04zu", i);
    items.push_back({name, draw(-half), EarnestClass::non_earnest, 1});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.count != b.count ? a.count > b.count : a.text < b.text;
  });

  fx.task.question_id = "synthetic";
  fx.task.frequent.vectors = Matrix(0, d);
  fx.task.eval_set.vectors = Matrix(0, d);
  for (const auto& it : items) {
    const auto h = text_hash(it.text);
    fx.task.frequent.add(it.v, EarnestClass::earnest, h, it.text);
    EarnestClass observed = it.cls;
    if (rng.uniform() < spec.label_noise)
      observed = it.cls == EarnestClass::earnest ? EarnestClass::non_earnest : EarnestClass::earnest;
    fx.task.eval_set.add(it.v, observed, h, it.text);
    fx.true_classes.push_back(it.cls);
  }
  return fx;
}

namespace {

struct QuestionSpec {
  const char* id;
  const char* text;
  const char* category;
  int lecture;
  std::vector<const char*> answers;  // earnest answers, most popular first
};

const std::vector<QuestionSpec>& word_cloud_questions() {
  static const std::vector<QuestionSpec> specs = {
      {"Q1", "Why do you think the data science lifecycle is iterative?", "reflection", 1,
       {"new questions arise", "we learn from the data", "to refine the model",
        "because results lead to new questions", "data changes over time", "we make mistakes and improve",
        "each step informs the next", "feedback from stakeholders", "to improve accuracy",
        "exploration reveals new problems", "models need to be updated", "we revisit assumptions"}},
      {"Q5", "Why don't we use residual error directly and instead we use absolute loss or squared loss?",
       "conceptual", 2,
       {"positive and negative errors cancel", "errors cancel out", "residuals can be negative",
        "the sum of residuals can be zero", "we want a positive penalty", "to avoid cancellation of errors",
        "squared loss penalizes large errors", "absolute loss is robust to outliers",
        "negative errors would reduce the loss", "so that errors do not cancel each other"}},
      {"Q7", "Why did we shuffle the data before selecting the training and validation sets?", "conceptual", 3,
       {"to avoid bias", "the data may be ordered", "to get a random split", "so both sets are representative",
        "to remove ordering effects", "the data could be sorted by time", "to make the split random",
        "avoid sampling bias", "so the validation set looks like the training set", "to prevent leakage of order"}},
      {"Q11", "What is the difference between model risk and empirical risk?", "conceptual", 4,
       {"model risk is over the population", "empirical risk uses the sample", "expected loss vs average loss",
        "population vs sample", "empirical risk is computed on training data",
        "model risk is the expected loss over all data", "one is theoretical and one is observed",
        "we can only compute empirical risk", "empirical risk estimates model risk"}},
      {"Q14", "Why would one perform PCA before training a Logistic Regression model?", "conceptual", 5,
       {"to reduce dimensionality", "remove correlated features", "reduce overfitting", "fewer features",
        "speed up training", "deal with multicollinearity", "to reduce noise in the features",
        "make the model simpler", "avoid the curse of dimensionality", "to compress the features"}},
  };
  return specs;
}

constexpr std::array<const char*, 22> kNonEarnest = {
    "idk", "asdf", "lol", "?", "...", "hi", "no", "jkjkjk", "aaaa", "qwerty", "hello", "yes",
    "i dont know", "pass", "skip", "hmm", "x", "zzz", "ok", "😀", "lmao", "nothing"};

std::string vary_case(const std::string& s, Rng& rng) {
  const double u = rng.uniform();
  std::string out = s;
  if (u < 0.25 && !out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  } else if (u < 0.32) {
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  } else if (u < 0.40) {
    out = "  " + out + " ";
  }
  return out;
}

std::string with_typo(const std::string& s, Rng& rng) {
  if (s.size() < 4) return s;
  std::string out = s;
  const auto pos = 1 + static_cast<std::size_t>(rng.below(out.size() - 2));
  if (out[pos] == ' ') return s;
  switch (rng.below(3)) {
    case 0: out.erase(pos, 1); break;
    case 1: std::swap(out[pos], out[pos + 1]); break;
    default: out.insert(pos, 1, out[pos]); break;
  }
  return out;
}

std::string random_letters(Rng& rng) {
  const auto len = 2 + rng.below(7);
  std::string out;
  for (std::uint64_t i = 0; i < len; ++i) out.push_back(static_cast<char>('a' + rng.below(26)));
  return out;
}

}  // namespace

CourseFixture make_course_fixture(std::uint64_t seed) {
  Rng rng(seed);
  const auto& specs = word_cloud_questions();
  constexpr std::size_t kStudents = 220;

  std::ostringstream questions;
  csv::write_row(questions, {"question_id", "text", "category", "lecture_number", "poll_kind"});
  for (const auto& q : specs) {
    csv::write_row(questions, {q.id, q.text, q.category, std::to_string(q.lecture), "word_cloud"});
    csv::write_row(questions, {std::string("MC") + std::to_string(q.lecture),
                               "Multiple-choice check for lecture " + std::to_string(q.lecture), "numerical",
                               std::to_string(q.lecture), "multiple_choice"});
  }

  // Per-student disposition: most students are earnest; a minority drift.
  std::vector<double> disengagement(kStudents);
  for (std::size_t s = 0; s < kStudents; ++s) {
    const double u = rng.uniform();
    disengagement[s] = u < 0.08 ? 0.75 : (u < 0.2 ? 0.25 : 0.03);
  }

  // text (normalized) -> true rubric score, per question
  std::map<std::string, std::map<std::string, int>> truth;

  std::ostringstream responses;
  csv::write_row(responses, {"Poll ID", "Participant", "Answer", "Channel", "Submitted"});
  const std::int64_t base_time = 1673884800;  // 2023-01-16T16:00:00Z
  for (std::size_t qi = 0; qi < specs.size(); ++qi) {
    const auto& q = specs[qi];
    const std::int64_t lecture_time = base_time + static_cast<std::int64_t>(q.lecture - 1) * 7 * 86400;
    for (std::size_t s = 0; s < kStudents; ++s) {
      const bool sync = rng.uniform() < 0.55;
      const bool answers_wc = rng.uniform() < 0.92;
      const bool answers_mc = sync ? rng.uniform() < 0.6 : rng.uniform() < 0.85;
      char student[16];
      std::snprintf(student, sizeof student, "S%03zu", s + 1);
      const std::int64_t t = lecture_time + (sync ? static_cast<std::int64_t>(rng.below(3000))
                                                  : 86400 + static_cast<std::int64_t>(rng.below(5 * 86400)));
      auto stamp = [](std::int64_t epoch) {
        std::string ts = format_timestamp(Timestamp{std::chrono::seconds{epoch}});
        ts[10] = ' ';
        ts.pop_back();
        return ts;
      };
      const char* channel = sync ? "live" : "recording";

      if (answers_wc) {
        std::string raw;
        int score;
        if (rng.uniform() < disengagement[s]) {
          if (rng.uniform() < 0.3) {
            raw = random_letters(rng);
          } else {
            raw = kNonEarnest[static_cast<std::size_t>(rng.below(kNonEarnest.size()))];
          }
          score = 1 + static_cast<int>(rng.below(2));
        } else {
          // Zipf-like popularity over the earnest answers.
          const double u = rng.uniform();
          std::size_t idx = static_cast<std::size_t>(static_cast<double>(q.answers.size()) * u * u);
          idx = std::min(idx, q.answers.size() - 1);
          raw = q.answers[idx];
          score = idx % 3 == 2 ? 5 : 4;
          const double v = rng.uniform();
          if (v < 0.08) {
            raw = with_typo(raw, rng);
          } else if (v < 0.12) {
            raw = raw.substr(0, raw.find(' '));
            score = 3;
          }
          raw = vary_case(raw, rng);
        }
        const std::string norm = normalize_text(raw);
        truth[q.id].try_emplace(norm, score);  // first occurrence defines the item's true score
        csv::write_row(responses, {q.id, student, raw, channel, stamp(t)});
      }
      if (answers_mc) {
        const char* choice = rng.uniform() < 0.7 ? "A" : "C";
        csv::write_row(responses, {std::string("MC") + std::to_string(q.lecture), student, choice, channel,
                                   stamp(t + 60)});
      }
    }
  }

  std::ostringstream labels;
  csv::write_row(labels, {"annotator_id", "question_id", "normalized_text", "score", "labeled_at"});
  const char* annotators[] = {"ann1", "ann2", "ann3"};
  std::int64_t label_time = base_time + 40 * 86400;
  for (const auto& [qid, texts] : truth) {
    for (const auto& [text, score] : texts) {
      for (const char* a : annotators) {
        int s = score;
        const double u = rng.uniform();
        if (u < 0.1) s = std::max(1, s - 1);
        else if (u < 0.2) s = std::min(5, s + 1);
        csv::write_row(labels, {a, qid, text, std::to_string(s),
                                format_timestamp(Timestamp{std::chrono::seconds{label_time++}})});
      }
    }
  }

  CourseFixture fx;
  fx.questions_csv = questions.str();
  fx.responses_csv = responses.str();
  fx.labels_csv = labels.str();
  fx.mapping_conf =
      "# Column mapping for the bundled synthetic poll export.\n"
      "column.question_id = Poll ID\n"
      "column.student_id = Participant\n"
      "column.raw_text = Answer\n"
      "column.mode = Channel\n"
      "column.submitted_at = Submitted\n"
      "timestamp_format = %Y-%m-%d %H:%M:%S\n"
      "delimiter = ,\n"
      "mode.live = synchronous\n"
      "mode.recording = asynchronous\n";
  return fx;
}

void write_course_fixture(const std::filesystem::path& dir, const CourseFixture& fixture) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "questions.csv", fixture.questions_csv);
  write_file_atomic(dir / "responses.csv", fixture.responses_csv);
  write_file_atomic(dir / "mapping.conf", fixture.mapping_conf);
  write_file_atomic(dir / "labels.csv", fixture.labels_csv);
}

}  // namespace eit::synthetic
