#include "cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "eit/engagement.hpp"
#include "eit/error.hpp"
#include "eit/json.hpp"
#include "eit/pipeline.hpp"
#include "eit/service.hpp"
#include "eit/store.hpp"

namespace eit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

// Left-aligned text columns separated by two spaces.
void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      out << r[c];
      if (c + 1 < r.size()) out << std::string(width[c] - r[c].size() + 2, ' ');
    }
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

struct Global {
  std::string data_dir;
  bool json_output = false;
  std::string model_path;
  std::uint64_t embedding_seed = kDefaultEmbeddingSeed;
  std::size_t dimension = kDefaultDimension;
};

struct Context {
  Global& global;
  std::ostream& out;
  std::ostream& err;

  fs::path dir() const { return resolve_data_dir(global.data_dir); }
  std::unique_ptr<EmbeddingProvider> provider() const {
    return make_provider(global.model_path, global.embedding_seed, global.dimension);
  }
  void seed_line(std::uint64_t seed) const { err << "seed=" << seed << '\n'; }
  void emit(const json& j) const { out << j.dump(2) << '\n'; }
};

void require_file(const std::string& path) {
  if (!fs::is_regular_file(path)) throw DataError("cannot read '" + path + "': no such file");
}

// ---- subcommands ----------------------------------------------------------

void cmd_init(const Context& ctx) {
  const auto dir = ctx.dir();
  Store::init(dir);
  if (ctx.global.json_output)
    ctx.emit({{"data_dir", dir.string()}});
  else
    ctx.out << "initialized " << dir.string() << '\n';
}

// Canonical column names and mode values, for exports already in our own layout.
ColumnMapping identity_mapping() {
  ColumnMapping m;
  for (auto f : ColumnMapping::kRequired) m.columns[std::string(f)] = std::string(f);
  m.mode_values = {{"synchronous", ResponseMode::synchronous}, {"asynchronous", ResponseMode::asynchronous}};
  return m;
}

struct IngestArgs {
  std::string input;
  std::string mapping;
  std::string questions;
};

void cmd_ingest(const Context& ctx, const IngestArgs& a) {
  require_file(a.input);
  if (!a.questions.empty()) require_file(a.questions);
  const ColumnMapping mapping = a.mapping.empty() ? identity_mapping() : ColumnMapping::load(a.mapping);

  StoreLock lock(ctx.dir());
  Store store = Store::open(ctx.dir());
  std::size_t questions = 0;
  if (!a.questions.empty()) {
    std::ifstream in(a.questions);
    questions = load_questions(store.corpus(), in);
  }
  const auto report = ingest_file(store.corpus(), a.input, mapping);
  store.save_corpus();
  if (ctx.global.json_output) {
    json j = report;
    j["questions"] = questions;
    ctx.emit(j);
    return;
  }
  ctx.out << "questions loaded: " << questions << '\n'
          << "responses accepted: " << report.accepted << '\n'
          << "rows rejected: " << report.rejected.size() << '\n';
  std::vector<std::vector<std::string>> rows;
  for (const auto& [line, reason] : report.rejected) rows.push_back({std::to_string(line), reason});
  if (!rows.empty()) print_table(ctx.out, {"line", "reason"}, rows);
}

struct SampleArgs {
  std::string question;
  SamplerConfig config;
  std::string out;
};

void cmd_sample(const Context& ctx, const SampleArgs& a) {
  ctx.seed_line(a.config.seed);
  Store store = Store::open(ctx.dir());
  const auto provider = ctx.provider();
  EmbeddingCache cache(store.cache_dir());
  const auto result = sample_question(store.corpus(), a.question, a.config, *provider, &cache);
  if (!a.out.empty()) {
    std::ostringstream file;
    write_sample_file(file, result.sample);
    write_file_atomic(a.out, file.str());
  }
  if (ctx.global.json_output) {
    ctx.emit({{"question_id", a.question}, {"config", a.config}, {"provider", provider->id()}, {"sample", result.sample}});
  } else if (a.out.empty()) {
    write_sample_file(ctx.out, result.sample);
  } else {
    ctx.out << "sampled " << result.sample.items.size() << " of " << result.features.size()
            << " unique responses into " << a.out << '\n';
  }
}

void cmd_labels_import(const Context& ctx, const std::string& file) {
  require_file(file);
  StoreLock lock(ctx.dir());
  Store store = Store::open(ctx.dir());
  std::ifstream in(file);
  const auto report = import_labels(in, store.labels(), &store.corpus());
  store.save_labels();
  if (ctx.global.json_output) {
    json rejected = json::array();
    for (const auto& [line, reason] : report.rejected) rejected.push_back({{"line", line}, {"reason", reason}});
    ctx.emit({{"imported", report.imported}, {"rejected", rejected}});
    return;
  }
  ctx.out << "labels imported: " << report.imported << '\n' << "rows rejected: " << report.rejected.size() << '\n';
  std::vector<std::vector<std::string>> rows;
  for (const auto& [line, reason] : report.rejected) rows.push_back({std::to_string(line), reason});
  if (!rows.empty()) print_table(ctx.out, {"line", "reason"}, rows);
}

void cmd_labels_export(const Context& ctx, const std::string& file) {
  Store store = Store::open(ctx.dir());
  std::ostringstream csv;
  export_labels(csv, store.labels());
  if (file.empty())
    ctx.out << csv.str();
  else
    write_file_atomic(file, csv.str());
}

void cmd_labels_agreement(const Context& ctx, const std::string& question) {
  Store store = Store::open(ctx.dir());
  std::optional<std::string_view> q;
  if (!question.empty()) q = question;
  const auto a = store.labels().agreement(q);
  if (ctx.global.json_output) {
    ctx.emit(a);
    return;
  }
  print_table(ctx.out, {"items", "annotator_pairs", "percent_agreement", "fleiss_kappa"},
              {{std::to_string(a.items), std::to_string(a.annotator_pairs), fixed(a.pairwise_percent, 2),
                fixed(a.fleiss_kappa, 4)}});
}

struct ClassifyArgs {
  TrainingSetConfig config;
  std::string distance = "euclidean";
  std::string space = "embedding";
};

void apply_space(TrainingSetConfig& c, const std::string& distance, const std::string& space) {
  const auto d = parse_distance(distance);
  if (!d) throw InvalidArgument("unknown distance '" + distance + "'");
  const auto s = parse_space(space);
  if (!s) throw InvalidArgument("unknown space '" + space + "'");
  c.distance = *d;
  c.space = *s;
}

void cmd_classify(const Context& ctx, ClassifyArgs a) {
  apply_space(a.config, a.distance, a.space);
  a.config.tsne.seed = a.config.seed;
  a.config.validate();
  ctx.seed_line(a.config.seed);
  StoreLock lock(ctx.dir());
  Store store = Store::open(ctx.dir());
  const auto provider = ctx.provider();
  EmbeddingCache cache(store.cache_dir());
  const auto pool = NonEarnestPool::from_labels(store.labels());
  const auto& run = store.add_run(classify_question(store.corpus(), a.config, pool, *provider, &cache));
  if (ctx.global.json_output) {
    ctx.emit(run);
    return;
  }
  std::size_t flagged = 0;
  for (const auto& e : run.entries) flagged += e.cls == EarnestClass::non_earnest;
  ctx.out << "run " << run.run_id << " question " << run.question_id << ": " << flagged << " of "
          << run.entries.size() << " unique responses non_earnest\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : run.entries)
    if (e.cls == EarnestClass::non_earnest)
      rows.push_back({e.normalized_text, std::to_string(e.count),
                      std::to_string(e.non_earnest_votes) + "/" + std::to_string(e.non_earnest_votes + e.earnest_votes)});
  if (!rows.empty()) print_table(ctx.out, {"text", "count", "votes"}, rows);
}

struct AblateArgs {
  std::string grid = "default";
  std::string eval;
  TrainingSetConfig config;
  std::string distance = "euclidean";
  std::string space = "embedding";
};

void cmd_ablate(const Context& ctx, AblateArgs a) {
  apply_space(a.config, a.distance, a.space);
  a.config.tsne.seed = a.config.seed;
  const auto grid = AblationGrid::parse(a.grid);
  ctx.seed_line(a.config.seed);
  Store store = Store::open(ctx.dir());
  LabelStore eval;
  if (!a.eval.empty()) {
    require_file(a.eval);
    std::ifstream in(a.eval);
    const auto report = import_labels(in, eval, &store.corpus());
    if (!report.rejected.empty())
      throw DataError(a.eval + ":" + std::to_string(report.rejected.front().first) + ": " +
                      report.rejected.front().second);
  } else {
    eval = store.labels();
  }
  const auto provider = ctx.provider();
  EmbeddingCache cache(store.cache_dir());
  const auto cells = ablate(store.corpus(), store.labels(), eval, grid, a.config, *provider, &cache);
  if (ctx.global.json_output) {
    ctx.emit(cells);
    return;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : cells)
    rows.push_back({fixed(c.non_earnest_fraction, 2), std::to_string(c.earnest_seed_count), fixed(c.metrics.accuracy),
                    fixed(c.metrics.recall), std::to_string(c.metrics.n)});
  print_table(ctx.out, {"pool_fraction", "earnest_seeds", "accuracy", "recall", "n"}, rows);
}

struct ProjectArgs {
  std::string question;
  TsneConfig config;
  std::string init = "gaussian";
  std::string out;
  std::string svg;
};

void cmd_project(const Context& ctx, ProjectArgs a) {
  if (a.init == "pca")
    a.config.init = TsneInit::first_two_principal_components;
  else if (a.init != "gaussian")
    throw InvalidArgument("unknown init '" + a.init + "' (expected gaussian or pca)");
  ctx.seed_line(a.config.seed);
  Store store = Store::open(ctx.dir());
  const auto provider = ctx.provider();
  EmbeddingCache cache(store.cache_dir());
  const auto p = project_question(store.corpus(), store.labels(), a.question, a.config, *provider, &cache);
  export_scatter(p.points, a.out, ScatterFormat::csv);
  if (!a.svg.empty()) export_scatter(p.points, a.svg, ScatterFormat::svg);
  if (ctx.global.json_output) {
    ctx.emit({{"question_id", a.question}, {"points", p.points.size()}, {"perplexity", p.perplexity},
              {"kl_initial", p.kl_trace.front()}, {"kl_final", p.kl_trace.back()}, {"out", a.out}});
    return;
  }
  ctx.out << "projected " << p.points.size() << " responses (perplexity " << fixed(p.perplexity, 2) << ", KL "
          << fixed(p.kl_trace.front(), 4) << " -> " << fixed(p.kl_trace.back(), 4) << ") into " << a.out << '\n';
}

struct ReportArgs {
  bool atrisk = false;
  bool attendance = false;
  bool timeline = false;
  AtRiskConfig atrisk_config;
  std::string student;
  std::size_t total_lectures = 0;
};

void cmd_report(const Context& ctx, const ReportArgs& a) {
  if (a.atrisk + a.attendance + a.timeline != 1)
    throw InvalidArgument("choose exactly one of --atrisk, --attendance, --timeline");
  Store store = Store::open(ctx.dir());
  if (a.atrisk) {
    a.atrisk_config.validate();
    const auto flags = flag_at_risk(store.corpus(), store.runs(), a.atrisk_config);
    if (ctx.global.json_output) {
      ctx.emit(flags);
      return;
    }
    ctx.out << "student_id,window_fraction,responses,non_earnest,lectures\n";
    for (const auto& f : flags) {
      std::string lectures;
      for (int l : f.window) lectures += (lectures.empty() ? "" : ";") + std::to_string(l);
      ctx.out << f.student_id << ',' << fixed(f.window_fraction, 4) << ',' << f.window_responses << ','
              << f.window_non_earnest << ',' << lectures << '\n';
    }
    return;
  }
  std::optional<std::size_t> total;
  if (a.total_lectures > 0) total = a.total_lectures;
  if (a.attendance) {
    std::vector<std::string> students;
    if (a.student.empty())
      students = store.corpus().students();
    else
      students.push_back(a.student);
    std::vector<SemesterAttendance> rows;
    for (const auto& s : students) rows.push_back(semester_attendance(store.corpus(), s, total));
    if (ctx.global.json_output) {
      ctx.emit(rows);
      return;
    }
    ctx.out << "student_id,credited_lectures,total_lectures,score\n";
    for (const auto& r : rows)
      ctx.out << r.student_id << ',' << r.credited_lectures << ',' << r.total_lectures << ',' << fixed(r.score, 4)
              << '\n';
    return;
  }
  if (a.student.empty()) throw InvalidArgument("--timeline requires --student");
  const auto timeline = earnestness_timeline(store.corpus(), a.student, store.runs());
  if (ctx.global.json_output) {
    ctx.emit(timeline);
    return;
  }
  ctx.out << "lecture,responses,non_earnest,fraction\n";
  for (const auto& t : timeline)
    ctx.out << t.lecture_number << ',' << t.responses << ',' << t.non_earnest << ','
            << (t.fraction ? fixed(*t.fraction, 4) : std::string()) << '\n';
}

void cmd_runs(const Context& ctx, const std::string& show) {
  Store store = Store::open(ctx.dir());
  if (!show.empty()) {
    const auto& run = store.run(show);
    if (ctx.global.json_output) {
      ctx.emit(run);
      return;
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : run.entries)
      rows.push_back({e.normalized_text, std::to_string(e.count), std::string(to_string(e.cls))});
    print_table(ctx.out, {"text", "count", "class"}, rows);
    return;
  }
  if (ctx.global.json_output) {
    json out = json::array();
    for (const auto& r : store.runs())
      out.push_back({{"run_id", r.run_id}, {"question_id", r.question_id}, {"created_at", format_timestamp(r.created_at)},
                     {"provider", r.provider_id}, {"fingerprint", r.fingerprint}, {"config", r.config}});
    ctx.emit(out);
    return;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : store.runs())
    rows.push_back({r.run_id, r.question_id, format_timestamp(r.created_at), fixed(r.config.non_earnest_fraction, 2),
                    std::to_string(r.config.earnest_seed_count), std::to_string(r.config.seed), r.fingerprint});
  print_table(ctx.out, {"run_id", "question", "created_at", "pool_fraction", "earnest_seeds", "seed", "fingerprint"}, rows);
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8787;
  std::string static_dir;
  std::string cors_origin = "*";
};

Service* g_service = nullptr;

extern "C" void on_signal(int) {
  if (g_service) g_service->stop();
}

void cmd_serve(const Context& ctx, const ServeArgs& a) {
  StoreLock lock(ctx.dir());
  Store store = Store::open(ctx.dir());
  const auto provider = ctx.provider();
  ServiceOptions options;
  options.api_token = env_or("EIT_API_TOKEN", "");
  options.static_dir = a.static_dir;
  options.cors_origin = a.cors_origin;
  Service service(store, *provider, options);
  const int port = service.bind(a.host, a.port);
  ctx.err << "listening on http://" << a.host << ':' << port << (options.api_token.empty() ? " (read-only)" : "")
          << '\n';
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  service.run();
  g_service = nullptr;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Earnestness and engagement toolkit for lecture poll responses", "eit"};
  app.require_subcommand(1);
  Global g;
  g.model_path = env_or("EIT_MODEL_PATH", "");
  app.add_option("--data-dir", g.data_dir, "Data directory (default $EIT_DATA_DIR or ./eit-data)");
  app.add_flag("--json", g.json_output, "Machine-readable output");
  app.add_option("--model-path", g.model_path, "Precomputed embedding table (default $EIT_MODEL_PATH)");
  app.add_option("--embedding-seed", g.embedding_seed, "Seed of the fallback embedding")->capture_default_str();
  app.add_option("--dimension", g.dimension, "Dimension of the fallback embedding")->capture_default_str();

  std::function<void(const Context&)> action;

  auto* init = app.add_subcommand("init", "Create an empty data directory");
  init->callback([&] { action = cmd_init; });

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "Import questions and a poll-response export");
  ingest->add_option("--input", ingest_args.input, "Response export (CSV)")->required();
  ingest->add_option("--mapping", ingest_args.mapping, "Column mapping file");
  ingest->add_option("--questions", ingest_args.questions, "Question table (CSV)");
  ingest->callback([&] { action = [&](const Context& c) { cmd_ingest(c, ingest_args); }; });

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Draw the annotation sample for a question");
  sample->add_option("--question", sample_args.question, "Question id")->required();
  sample->add_option("--n", sample_args.config.target_n, "Sample size")->capture_default_str();
  sample->add_option("--tail", sample_args.config.tail_fraction, "Tail fraction per metric")->capture_default_str();
  sample->add_option("--per-metric", sample_args.config.per_metric_fraction, "Draw fraction per metric")
      ->capture_default_str();
  sample->add_option("--seed", sample_args.config.seed, "Random seed")->capture_default_str();
  sample->add_option("--out", sample_args.out, "Write the two-column sample file here");
  sample->callback([&] { action = [&](const Context& c) { cmd_sample(c, sample_args); }; });

  auto* labels = app.add_subcommand("labels", "Import, export or summarize rubric labels");
  labels->require_subcommand(1);
  std::string import_file, export_file, agreement_question;
  auto* limport = labels->add_subcommand("import", "Import a label file");
  limport->add_option("file", import_file, "Label CSV")->required();
  limport->callback([&] { action = [&](const Context& c) { cmd_labels_import(c, import_file); }; });
  auto* lexport = labels->add_subcommand("export", "Export all labels as CSV");
  lexport->add_option("--out", export_file, "Output file (default stdout)");
  lexport->callback([&] { action = [&](const Context& c) { cmd_labels_export(c, export_file); }; });
  auto* lagree = labels->add_subcommand("agreement", "Inter-annotator agreement");
  lagree->add_option("--question", agreement_question, "Restrict to one question");
  lagree->callback([&] { action = [&](const Context& c) { cmd_labels_agreement(c, agreement_question); }; });

  ClassifyArgs classify_args;
  auto* classify = app.add_subcommand("classify", "Classify a question's responses with KNN");
  classify->add_option("--question", classify_args.config.target_question_id, "Question id")->required();
  classify->add_option("--pool-frac", classify_args.config.non_earnest_fraction, "Share of the non-earnest pool")
      ->capture_default_str();
  classify->add_option("--earnest-seeds", classify_args.config.earnest_seed_count, "Most frequent responses used")
      ->capture_default_str();
  classify->add_option("--k", classify_args.config.k, "Neighbors")->capture_default_str();
  classify->add_option("--distance", classify_args.distance, "euclidean or cosine")->capture_default_str();
  classify->add_option("--space", classify_args.space, "embedding or 2d")->capture_default_str();
  classify->add_option("--seed", classify_args.config.seed, "Random seed")->capture_default_str();
  classify->callback([&] { action = [&](const Context& c) { cmd_classify(c, classify_args); }; });

  AblateArgs ablate_args;
  auto* ablate_cmd = app.add_subcommand("ablate", "Labeled-fraction ablation grid");
  ablate_cmd->add_option("--grid", ablate_args.grid, "'default' or '<fractions>:<seed counts>'")->capture_default_str();
  ablate_cmd->add_option("--eval", ablate_args.eval, "Evaluation labels (default: stored labels)");
  ablate_cmd->add_option("--k", ablate_args.config.k, "Neighbors")->capture_default_str();
  ablate_cmd->add_option("--distance", ablate_args.distance, "euclidean or cosine")->capture_default_str();
  ablate_cmd->add_option("--space", ablate_args.space, "embedding or 2d")->capture_default_str();
  ablate_cmd->add_option("--seed", ablate_args.config.seed, "Random seed")->capture_default_str();
  ablate_cmd->callback([&] { action = [&](const Context& c) { cmd_ablate(c, ablate_args); }; });

  ProjectArgs project_args;
  auto* project = app.add_subcommand("project", "2-D t-SNE scatter of a question's responses");
  project->add_option("--question", project_args.question, "Question id")->required();
  project->add_option("--perplexity", project_args.config.perplexity, "Target perplexity")->capture_default_str();
  project->add_option("--iters", project_args.config.iterations, "Gradient steps")->capture_default_str();
  project->add_option("--learning-rate", project_args.config.learning_rate, "Step size")->capture_default_str();
  project->add_option("--init", project_args.init, "gaussian or pca")->capture_default_str();
  project->add_option("--seed", project_args.config.seed, "Random seed")->capture_default_str();
  project->add_option("--out", project_args.out, "Coordinates CSV")->required();
  project->add_option("--svg", project_args.svg, "Also write an SVG scatter");
  project->callback([&] { action = [&](const Context& c) { cmd_project(c, project_args); }; });

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "At-risk, attendance and timeline reports");
  report->add_flag("--atrisk", report_args.atrisk, "Students flagged by the at-risk rule");
  report->add_flag("--attendance", report_args.attendance, "Semester attendance scores");
  report->add_flag("--timeline", report_args.timeline, "Per-lecture earnestness of one student");
  report->add_option("--threshold", report_args.atrisk_config.non_earnest_threshold, "Non-earnest share")
      ->capture_default_str();
  report->add_option("--window", report_args.atrisk_config.window_lectures, "Recent lectures")->capture_default_str();
  report->add_option("--min-responses", report_args.atrisk_config.min_responses, "Minimum classified responses")
      ->capture_default_str();
  report->add_option("--student", report_args.student, "Student id");
  report->add_option("--total-lectures", report_args.total_lectures, "Semester length (default: roster size)");
  report->callback([&] { action = [&](const Context& c) { cmd_report(c, report_args); }; });

  std::string show_run;
  auto* runs = app.add_subcommand("runs", "List classification runs");
  runs->add_option("--show", show_run, "Print one run's classes");
  runs->callback([&] { action = [&](const Context& c) { cmd_runs(c, show_run); }; });

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Serve the JSON API (mutations need $EIT_API_TOKEN)");
  serve->add_option("--host", serve_args.host, "Listen address")->capture_default_str();
  serve->add_option("--port", serve_args.port, "Listen port")->capture_default_str();
  serve->add_option("--static", serve_args.static_dir, "Directory served under /ui");
  serve->add_option("--cors-origin", serve_args.cors_origin, "Allowed browser origin")->capture_default_str();
  serve->callback([&] { action = [&](const Context& c) { cmd_serve(c, serve_args); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  const Context ctx{g, out, err};
  try {
    action(ctx);
    return kExitOk;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    // NotFound, DataError, ProviderError and Conflict all concern the data.
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace eit::cli
