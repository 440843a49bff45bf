// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "eit/annotation.hpp"
#include "eit/classifier.hpp"
#include "eit/engagement.hpp"
#include "eit/features.hpp"
#include "eit/projection.hpp"
#include "eit/random.hpp"
#include "eit/sampling.hpp"
#include "eit/synthetic.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace eit;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

std::vector<std::vector<double>> to_rows(const Matrix& m) {
  std::vector<std::vector<double>> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i].assign(m.row(i).begin(), m.row(i).end());
  return out;
}

// ---------------------------------------------------------------------------

Verdict edit_distance_oracle() {
  Verdict v;
  const auto start = Clock::now();
  Rng rng(101);
  auto random_string = [&] {
    std::string s(rng.below(13), 'a');
    for (char& c : s) c = static_cast<char>('a' + rng.below(4));
    return s;
  };
  std::size_t mismatches = 0, axiom_failures = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::string a = random_string(), b = random_string(), c = random_string();
    const std::size_t ab = levenshtein(std::string_view(a), std::string_view(b));
    if (ab != oracle::edit_distance(a, b)) ++mismatches;
    const std::size_t ba = levenshtein(std::string_view(b), std::string_view(a));
    const std::size_t ac = levenshtein(std::string_view(a), std::string_view(c));
    const std::size_t cb = levenshtein(std::string_view(c), std::string_view(b));
    if (ab != ba) ++axiom_failures;
    if (ab > ac + cb) ++axiom_failures;
    if (levenshtein(std::string_view(a), std::string_view(a)) != 0) ++axiom_failures;
    if ((ab == 0) != (a == b)) ++axiom_failures;
  }
  const double secs = seconds_since(start);
  v.require(mismatches == 0, std::to_string(mismatches) + " pairs differ from the oracle");
  v.require(axiom_failures == 0, std::to_string(axiom_failures) + " metric axiom violations");
  v.require(secs < 5.0, fmt("took %.2f s", secs));
  if (v.pass) v.detail = "1000 pairs, " + fmt("%.3f s", secs);
  return v;
}

Verdict knn_oracle() {
  Verdict v;
  const auto start = Clock::now();
  Rng rng(202);
  const std::size_t ks[] = {1, 3, 5};
  std::size_t mismatches = 0, instances = 0, tied = 0;
  while (instances < 1000) {
    const std::size_t n = 1 + rng.below(200);
    const std::size_t dim = 1 + rng.below(16);
    const std::size_t k = ks[rng.below(3)];
    if (k > n) continue;
    // Half the instances use a coarse integer lattice so distance ties are common.
    const bool lattice = rng.below(2) == 0;
    auto coordinate = [&] { return lattice ? static_cast<double>(rng.below(3)) : rng.normal(); };

    LabeledSet train;
    std::vector<std::vector<double>> rows;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> x(dim);
      for (double& c : x) c = coordinate();
      const bool ne = rng.below(2) == 0;
      train.add(x, ne ? EarnestClass::non_earnest : EarnestClass::earnest);
      rows.push_back(std::move(x));
      positive.push_back(ne);
    }
    std::vector<double> query(dim);
    for (double& c : query) c = coordinate();

    const auto got = knn_predict(train, query, k);
    const auto want = oracle::knn(rows, positive, query, k);
    std::vector<std::size_t> got_idx;
    for (const auto& nb : got.neighbors) got_idx.push_back(nb.index);
    if (got_idx != want.neighbors || (got.cls == EarnestClass::non_earnest) != want.non_earnest) ++mismatches;
    if (lattice) ++tied;
    ++instances;
  }
  const double secs = seconds_since(start);
  v.require(mismatches == 0, std::to_string(mismatches) + " instances differ from the oracle");
  v.require(secs < 30.0, fmt("took %.2f s", secs));
  if (v.pass) v.detail = "1000 instances (" + std::to_string(tied) + " on a tie-heavy lattice), " + fmt("%.3f s", secs);
  return v;
}

Verdict sampler_tail_mass() {
  Verdict v;
  // Ten unique responses whose metrics disagree on the ordering.
  std::vector<FeatureRow> rows;
  for (std::size_t i = 0; i < 10; ++i)
    rows.push_back({"r" + std::to_string(i), 0.05 * static_cast<double>((i * 7) % 10), 10 - i, (i * 3) % 10, i + 1});

  SamplerConfig config;
  config.tail_fraction = 0.2;
  const std::size_t tail = fraction_count(config.tail_fraction, rows.size());
  const double expected = oracle::first_draw_tail_mass(tail, rows.size() - tail, rows.size() - tail, tail);

  constexpr int kTrials = 10000;
  std::array<int, 4> hits{};
  for (int t = 0; t < kTrials; ++t) {
    config.seed = static_cast<std::uint64_t>(t);
    const auto s = rule_based_sample(rows, config);
    for (std::size_t m = 0; m < 4; ++m) {
      const auto& d = s.draws[m];
      if (std::find(d.tail.begin(), d.tail.end(), d.drawn.front()) != d.tail.end()) ++hits[m];
    }
  }
  std::string shares;
  for (std::size_t m = 0; m < 4; ++m) {
    const double p = static_cast<double>(hits[m]) / kTrials;
    shares += (m ? " " : "") + std::string(to_string(kAllMetrics[m])) + "=" + fmt("%.4f", p);
    v.require(std::abs(p - 0.5) <= 0.02, std::string(to_string(kAllMetrics[m])) + fmt(" tail share %.4f", p));
  }
  v.require(std::abs(expected - 0.5) < 1e-12, fmt("weighting oracle gives %.6f", expected));

  config.seed = 99;
  const auto a = rule_based_sample(rows, config);
  const auto b = rule_based_sample(rows, config);
  bool same = a.items.size() == b.items.size() && a.union_size == b.union_size;
  for (std::size_t i = 0; same && i < a.items.size(); ++i)
    same = a.items[i].normalized_text == b.items[i].normalized_text && a.items[i].metrics == b.items[i].metrics;
  for (std::size_t m = 0; same && m < 4; ++m) same = a.draws[m].drawn == b.draws[m].drawn;
  v.require(same, "two runs with seed 99 differ");
  if (v.pass) v.detail = shares + " over 10000 trials";
  return v;
}

Verdict tsne_numerics() {
  Verdict v;
  const auto start = Clock::now();
  const Matrix x = random_matrix(50, 16, 303);
  TsneConfig config;

  // Per-point perplexity, recomputed from the returned conditionals.
  const double target = effective_perplexity(config.perplexity, x.rows());
  const auto cond = conditional_affinities(pairwise_squared_distances(x), target);
  double worst_perp = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::vector<double> row(cond.p.row(i).begin(), cond.p.row(i).end());
    worst_perp = std::max(worst_perp, std::abs(oracle::row_perplexity(row) - target));
  }
  v.require(worst_perp <= 1e-3, fmt("perplexity off by %.3g", worst_perp));

  // Analytic gradient against central differences of an independent KL.
  const Matrix small = random_matrix(10, 16, 304);
  const Matrix p10 = joint_affinities(
      conditional_affinities(pairwise_squared_distances(small), effective_perplexity(config.perplexity, 10)).p);
  const Matrix y10 = random_matrix(10, 2, 305);
  const Matrix g = kl_gradient(p10, y10);
  const auto p_rows = to_rows(p10);
  const auto fd = oracle::numeric_gradient([&](const std::vector<double>& y) { return oracle::kl(p_rows, y); },
                                           {y10.data().begin(), y10.data().end()}, 1e-5);
  const double grad_err = oracle::max_relative_error({g.data().begin(), g.data().end()}, fd, 1e-6);
  v.require(grad_err < 1e-4, fmt("gradient relative error %.3g", grad_err));

  const auto a = tsne(x, config);
  const auto b = tsne(x, config);
  v.require(a.kl_trace.back() < a.kl_trace.front(),
            fmt("final KL %.4f", a.kl_trace.back()) + fmt(" not below initial %.4f", a.kl_trace.front()));
  v.require(a.coordinates == b.coordinates, "reruns with the same seed differ");
  const double secs = seconds_since(start);
  v.require(secs < 60.0, fmt("took %.2f s", secs));
  if (v.pass)
    v.detail = fmt("perplexity err %.2g", worst_perp) + fmt(", gradient err %.2g", grad_err) +
               fmt(", KL %.4f", a.kl_trace.front()) + fmt(" -> %.4f", a.kl_trace.back()) + fmt(", %.2f s", secs);
  return v;
}

Verdict metrics_identity() {
  Verdict v;
  Confusion c;
  auto add = [&](EarnestClass actual, EarnestClass predicted, int times) {
    for (int i = 0; i < times; ++i) c.add(actual, predicted);
  };
  add(EarnestClass::non_earnest, EarnestClass::non_earnest, 8);
  add(EarnestClass::non_earnest, EarnestClass::earnest, 2);
  add(EarnestClass::earnest, EarnestClass::earnest, 5);
  add(EarnestClass::earnest, EarnestClass::non_earnest, 5);
  v.require(c == Confusion{8, 2, 5, 5}, "confusion counts wrong");
  const auto m = EvalMetrics::from_confusion(c);
  v.require(m.recall == 0.8, fmt("recall %.17g", m.recall));
  v.require(m.accuracy == 0.65, fmt("accuracy %.17g", m.accuracy));
  v.require(m.n == 20, "n != 20");
  if (v.pass) v.detail = "recall 0.8, accuracy 0.65";
  return v;
}

Verdict rubric_and_attendance() {
  Verdict v;
  auto aggregate = [](std::initializer_list<int> scores) {
    LabelStore s;
    int who = 0;
    for (int score : scores) s.record({"ann" + std::to_string(who++), "Q", "t", score, {}});
    return s.aggregate("Q", "t").cls;
  };
  v.require(aggregate({4, 5, 4}) == EarnestClass::earnest, "(4,5,4) not earnest");
  v.require(aggregate({3, 3, 3}) == EarnestClass::neutral, "(3,3,3) not neutral");
  v.require(aggregate({1, 2, 2}) == EarnestClass::non_earnest, "(1,2,2) not non_earnest");

  LectureParticipation sync{"s", 1, 1, 0, 3};
  LectureParticipation async_partial{"s", 1, 0, 2, 3};
  LectureParticipation async_all{"s", 1, 0, 3, 3};
  v.require(attendance_credit(sync) == Credit::full, "sync 1/3 not full credit");
  v.require(attendance_credit(async_partial) == Credit::none, "async 2/3 earned credit");
  v.require(attendance_credit(async_all) == Credit::full, "async 3/3 not full credit");
  v.require(attendance_score(25, 28) == 1.0, fmt("25/28 scored %.6f", attendance_score(25, 28)));
  v.require(attendance_score(24, 28) < 1.0, "24/28 scored 1.0");
  if (v.pass) v.detail = "rubric classes, credit rules, 25/28 -> 1.0";
  return v;
}

Verdict ablation_trend() {
  Verdict v;
  const auto start = Clock::now();
  constexpr int kSeeds = 10;
  std::array<int, 3> rows_ok{}, cols_ok{};
  synthetic::TwoClusterSpec spec;
  for (int s = 1; s <= kSeeds; ++s) {
    spec.seed = static_cast<std::uint64_t>(s);
    const auto fx = synthetic::make_two_cluster_fixture(spec);
    TrainingSetConfig base;
    base.seed = static_cast<std::uint64_t>(s);
    const std::vector<AblationTask> tasks{fx.task};
    const auto cells = ablation_grid(kDefaultFractions, kDefaultSeedCounts, tasks, fx.pool, base);
    double r[3][3];
    for (std::size_t i = 0; i < 9; ++i) r[i / 3][i % 3] = cells[i].metrics.recall;
    for (int f = 0; f < 3; ++f) {
      rows_ok[f] += r[f][0] >= r[f][1] && r[f][1] >= r[f][2];
      cols_ok[f] += r[0][f] <= r[1][f] && r[1][f] <= r[2][f];
    }
  }
  const double secs = seconds_since(start);
  std::string counts = "rows";
  for (int f = 0; f < 3; ++f) counts += " " + std::to_string(rows_ok[f]);
  counts += "/10, columns";
  for (int f = 0; f < 3; ++f) counts += " " + std::to_string(cols_ok[f]);
  counts += "/10";
  for (int f = 0; f < 3; ++f) {
    v.require(rows_ok[f] >= 7, counts);
    v.require(cols_ok[f] >= 7, counts);
  }
  v.require(secs < 120.0, fmt("took %.2f s", secs));
  if (v.pass) v.detail = counts + fmt(", %.2f s", secs);
  return v;
}

// ---------------------------------------------------------------------------
// End to end through the command-line front end.

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult eit_cli(const fs::path& data_dir, std::vector<std::string> args) {
  args.insert(args.begin(), {"eit", "--data-dir", data_dir.string()});
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream content;
    content << in.rdbuf();
    files[fs::relative(e.path(), root).generic_string()] = content.str();
  }
  return files;
}

// Runs the whole pipeline under `root` and returns an error message, or empty on success.
std::string pipeline_once(const fs::path& root, const fs::path& fixture, std::size_t& ablation_cells) {
  fs::remove_all(root);
  const fs::path data = root / "data", out = root / "out";
  fs::create_directories(out);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream(out / name, std::ios::binary) << content;
  };
  auto step = [&](const std::string& name, std::vector<std::string> args) -> std::string {
    const auto r = eit_cli(data, std::move(args));
    if (r.code != 0) return name + " exited " + std::to_string(r.code) + ": " + r.err;
    write(name + ".stdout", r.out);
    return {};
  };
  auto f = [&](const char* name) { return (fixture / name).string(); };

  std::vector<std::pair<std::string, std::vector<std::string>>> steps = {
      {"init", {"init"}},
      {"ingest",
       {"--json", "ingest", "--input", f("responses.csv"), "--mapping", f("mapping.conf"), "--questions",
        f("questions.csv")}},
      {"sample", {"sample", "--question", "Q1", "--seed", "2023", "--out", (out / "sample-Q1.csv").string()}},
      {"labels-import", {"labels", "import", f("labels.csv")}},
  };
  for (const char* q : {"Q1", "Q5", "Q7", "Q11", "Q14"})
    steps.push_back({std::string("classify-") + q, {"--json", "classify", "--question", q, "--seed", "2023"}});
  steps.push_back({"ablate", {"--json", "ablate", "--seed", "2023"}});
  steps.push_back({"project",
                   {"project", "--question", "Q1", "--seed", "2023", "--out", (out / "scatter-Q1.csv").string(),
                    "--svg", (out / "scatter-Q1.svg").string()}});
  steps.push_back({"atrisk", {"report", "--atrisk"}});
  steps.push_back({"labels-export", {"labels", "export"}});

  for (auto& [name, args] : steps)
    if (auto e = step(name, args); !e.empty()) return e;

  std::ifstream in(out / "ablate.stdout");
  const auto cells = nlohmann::json::parse(in, nullptr, false);
  if (!cells.is_array()) return "ablate output is not a JSON array";
  ablation_cells = cells.size();
  return {};
}

Verdict end_to_end() {
  Verdict v;
  const fs::path fixture = EIT_FIXTURE_DIR;
  const fs::path base = fs::temp_directory_path() / ("eit-acceptance-" + std::to_string(::getpid()));
  const fs::path root = base / "run";
  ::setenv("SOURCE_DATE_EPOCH", "1677340800", 1);

  std::size_t cells = 0;
  const auto start = Clock::now();
  std::string error = pipeline_once(root, fixture, cells);
  const double secs = seconds_since(start);
  v.require(error.empty(), "first run: " + error);
  v.require(cells == 9, "ablation produced " + std::to_string(cells) + " cells");
  v.require(secs < 60.0, fmt("took %.2f s", secs));
  const auto first = v.pass ? snapshot(root) : std::map<std::string, std::string>{};

  if (v.pass) {
    // Same absolute paths on the rerun, so echoed paths cannot differ.
    error = pipeline_once(root, fixture, cells);
    v.require(error.empty(), "second run: " + error);
  }
  if (v.pass) {
    const auto second = snapshot(root);
    std::vector<std::string> differing;
    for (const auto& [name, content] : first) {
      const auto it = second.find(name);
      if (it == second.end() || it->second != content) differing.push_back(name);
    }
    for (const auto& [name, content] : second)
      if (!first.contains(name)) differing.push_back(name);
    std::string list;
    for (const auto& d : differing) list += " " + d;
    v.require(differing.empty(), "rerun differs:" + list);
    if (v.pass) v.detail = std::to_string(first.size()) + " files byte-identical on rerun, " + fmt("%.2f s", secs);
  }
  fs::remove_all(base);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"edit_distance_oracle", edit_distance_oracle},
      {"knn_oracle", knn_oracle},
      {"sampler_tail_mass", sampler_tail_mass},
      {"tsne_numerics", tsne_numerics},
      {"metrics_identity", metrics_identity},
      {"rubric_and_attendance", rubric_and_attendance},
      {"ablation_trend", ablation_trend},
      {"end_to_end", end_to_end},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("threw: ") + e.what();
    }
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
