#include "eit/service.hpp"

#include <httplib.h>

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <shared_mutex>
#include <thread>

#include "eit/engagement.hpp"
#include "eit/error.hpp"
#include "eit/json.hpp"
#include "eit/pipeline.hpp"
#include "eit/text.hpp"

namespace eit {

namespace {

using nlohmann::json;

// A request error carrying an HTTP status and, for body validation, the offending field.
struct HttpError : std::runtime_error {
  HttpError(int status, const std::string& message, std::string field = {})
      : std::runtime_error(message), status(status), field(std::move(field)) {}
  int status;
  std::string field;
};

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message, const std::string& field = {}) {
  json body = {{"error", message}};
  if (!field.empty()) body["field"] = field;
  send_json(res, status, body);
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw HttpError(400, "request body must be a JSON object");
  return body;
}

std::string require_string(const json& body, const char* field) {
  const auto it = body.find(field);
  if (it == body.end() || !it->is_string() || it->get_ref<const std::string&>().empty())
    throw HttpError(400, std::string(field) + ": required non-empty string", field);
  return it->get<std::string>();
}

template <typename T>
std::optional<T> query_number(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string raw = req.get_param_value(name);
  try {
    std::size_t used = 0;
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
      value = static_cast<T>(std::stod(raw, &used));
    } else {
      if (!raw.empty() && raw.front() == '-') throw std::invalid_argument("negative");
      value = static_cast<T>(std::stoull(raw, &used));
    }
    if (used != raw.size()) throw std::invalid_argument("trailing");
    return value;
  } catch (const std::logic_error&) {
    throw HttpError(400, std::string(name) + ": malformed number '" + raw + "'", name);
  }
}

// Reads an object's fields into a config, turning type errors into a 400 naming the field.
template <typename T>
T config_from(const json& body) {
  try {
    return body.get<T>();
  } catch (const json::exception& e) {
    throw HttpError(400, std::string("malformed configuration: ") + e.what());
  }
}

enum class JobState { queued, running, done, failed };

std::string_view to_string(JobState s) {
  switch (s) {
    case JobState::queued: return "queued";
    case JobState::running: return "running";
    case JobState::done: return "done";
    case JobState::failed: return "failed";
  }
  return "failed";
}

struct Job {
  std::string id;
  std::string kind;
  std::string question_id;  // conflict key; empty for ablation
  JobState state = JobState::queued;
  std::string error;
  std::string result_ref;
  json result;
  std::function<void(Job&)> work;

  json summary() const {
    json j = {{"job_id", id}, {"kind", kind}, {"status", to_string(state)}};
    if (!question_id.empty()) j["question_id"] = question_id;
    if (!error.empty()) j["error"] = error;
    if (!result_ref.empty()) j["result_ref"] = result_ref;
    if (result.is_object() && result.contains("run_id")) j["run_id"] = result["run_id"];
    return j;
  }
};

std::string conflict_key(const Job& job) { return job.kind == "ablate" ? "*ablate*" : job.question_id; }

json run_classes(const ClassificationRun& run) {
  json classes = json::array();
  for (const auto& e : run.entries) {
    json neighbors = json::array();
    for (const auto& n : e.neighbors)
      neighbors.push_back({{"text", run.training_texts.at(n.index)}, {"distance", n.distance}, {"class", to_string(n.cls)}});
    classes.push_back({{"normalized_text", e.normalized_text},
                       {"count", e.count},
                       {"class", to_string(e.cls)},
                       {"non_earnest_votes", e.non_earnest_votes},
                       {"earnest_votes", e.earnest_votes},
                       {"neighbors", std::move(neighbors)}});
  }
  return {{"run_id", run.run_id}, {"question_id", run.question_id}, {"fingerprint", run.fingerprint},
          {"classes", std::move(classes)}};
}

}  // namespace

struct Service::Impl {
  Impl(Store& s, const EmbeddingProvider& p, ServiceOptions o)
      : store(s), provider(p), options(std::move(o)), cache(s.cache_dir()) {}

  Store& store;
  const EmbeddingProvider& provider;
  ServiceOptions options;
  EmbeddingCache cache;
  httplib::Server server;

  // Guards the label store and run list. The corpus is read-only here.
  std::shared_mutex data_mutex;

  std::mutex job_mutex;
  std::condition_variable job_cv;
  std::map<std::string, std::shared_ptr<Job>> jobs;
  std::deque<std::shared_ptr<Job>> queue;
  std::uint64_t next_job = 1;
  bool running_job = false;
  bool stopping = false;
  std::thread worker;

  void start_worker() { worker = std::thread([this] { work_loop(); }); }

  void stop_worker() {
    {
      std::lock_guard lock(job_mutex);
      stopping = true;
    }
    job_cv.notify_all();
    if (worker.joinable()) worker.join();
  }

  void work_loop() {
    for (;;) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock lock(job_mutex);
        job_cv.wait(lock, [&] { return stopping || !queue.empty(); });
        if (stopping) return;
        job = queue.front();
        queue.pop_front();
        job->state = JobState::running;
        running_job = true;
      }
      Job local = *job;
      try {
        local.work(local);
        local.state = JobState::done;
      } catch (const std::exception& e) {
        local.state = JobState::failed;
        local.error = e.what();
      }
      {
        std::lock_guard lock(job_mutex);
        job->state = local.state;
        job->error = local.error;
        job->result_ref = local.result_ref;
        job->result = std::move(local.result);
        job->work = nullptr;
        running_job = false;
      }
      job_cv.notify_all();
    }
  }

  json enqueue(std::string kind, std::string question_id, std::function<void(Job&)> work) {
    std::lock_guard lock(job_mutex);
    auto job = std::make_shared<Job>();
    job->kind = std::move(kind);
    job->question_id = std::move(question_id);
    const std::string key = conflict_key(*job);
    for (const auto& [id, other] : jobs)
      if ((other->state == JobState::queued || other->state == JobState::running) && conflict_key(*other) == key)
        throw HttpError(409, "job " + id + " is already " + std::string(to_string(other->state)) +
                                 (key == "*ablate*" ? " for ablation" : " for question " + key));
    job->id = "job-" + std::to_string(next_job++);
    job->work = std::move(work);
    jobs.emplace(job->id, job);
    queue.push_back(job);
    job_cv.notify_all();
    return job->summary();
  }

  void require_token(const httplib::Request& req) const {
    if (options.api_token.empty()) throw HttpError(401, "mutation disabled: no API token configured");
    const std::string header = req.get_header_value("Authorization");
    if (header != "Bearer " + options.api_token) throw HttpError(401, "missing or invalid API token");
  }

  const Question& word_cloud_question(const std::string& id) const {
    const Question* q = store.corpus().find_question(id);
    if (!q) throw NotFound("unknown question '" + id + "'");
    return *q;
  }

  // Wraps a handler so library and request errors map onto HTTP statuses.
  httplib::Server::Handler guarded(std::function<void(const httplib::Request&, httplib::Response&)> fn) {
    return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const HttpError& e) {
        send_error(res, e.status, e.what(), e.field);
      } catch (const NotFound& e) {
        send_error(res, 404, e.what());
      } catch (const InvalidArgument& e) {
        send_error(res, 400, e.what());
      } catch (const Conflict& e) {
        send_error(res, 409, e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      }
    };
  }

  void routes() {
    httplib::Headers cors = {{"Access-Control-Allow-Origin", options.cors_origin},
                             {"Access-Control-Allow-Headers", "Authorization, Content-Type"},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}};
    server.set_default_headers(cors);
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    if (!options.static_dir.empty() && !server.set_mount_point("/ui", options.static_dir.string()))
      throw InvalidArgument("static directory " + options.static_dir.string() + " does not exist");

    server.Get("/health", guarded([](auto&, auto& res) { send_json(res, 200, {{"status", "ok"}}); }));

    server.Get("/questions", guarded([this](auto&, auto& res) {
      json out = json::array();
      for (const auto& q : store.corpus().questions()) {
        json j = q;
        j["responses"] = store.corpus().responses_for(q.question_id).size();
        j["unique_responses"] = store.corpus().unique_responses(q.question_id).size();
        out.push_back(std::move(j));
      }
      send_json(res, 200, out);
    }));

    server.Get("/questions/:id/responses", guarded([this](const httplib::Request& req, auto& res) {
      const auto& q = word_cloud_question(req.path_params.at("id"));
      const std::size_t page = query_number<std::size_t>(req, "page").value_or(1);
      const std::size_t size = query_number<std::size_t>(req, "page_size").value_or(options.page_size);
      if (page < 1) throw HttpError(400, "page: must be at least 1", "page");
      if (size < 1) throw HttpError(400, "page_size: must be at least 1", "page_size");
      const auto all = store.corpus().responses_for(q.question_id);
      json items = json::array();
      for (std::size_t i = (page - 1) * size; i < all.size() && i < page * size; ++i) items.push_back(*all[i]);
      send_json(res, 200, {{"question_id", q.question_id}, {"page", page}, {"page_size", size},
                           {"total", all.size()}, {"responses", std::move(items)}});
    }));

    server.Get("/questions/:id/sample", guarded([this](const httplib::Request& req, auto& res) {
      const auto& q = word_cloud_question(req.path_params.at("id"));
      SamplerConfig config;
      if (auto n = query_number<std::size_t>(req, "n")) config.target_n = *n;
      if (auto s = query_number<std::uint64_t>(req, "seed")) config.seed = *s;
      if (auto t = query_number<double>(req, "tail")) config.tail_fraction = *t;
      if (auto m = query_number<double>(req, "per_metric")) config.per_metric_fraction = *m;
      const auto result = sample_question(store.corpus(), q.question_id, config, provider, &cache);
      send_json(res, 200, {{"question_id", q.question_id}, {"config", config}, {"provider", provider.id()},
                           {"sample", result.sample}});
    }));

    server.Get("/labels", guarded([this](const httplib::Request& req, auto& res) {
      std::shared_lock lock(data_mutex);
      json out = json::array();
      const std::string qid = req.get_param_value("question");
      for (const auto& [key, label] : store.labels().labels())
        if (qid.empty() || label.question_id == qid) out.push_back(label);
      send_json(res, 200, out);
    }));

    server.Post("/labels", guarded([this](const httplib::Request& req, auto& res) {
      require_token(req);
      const json body = parse_body(req);
      EarnestnessLabel label;
      label.annotator_id = require_string(body, "annotator");
      label.question_id = require_string(body, "question");
      label.normalized_text = normalize_text(require_string(body, "text"));
      const auto score = body.find("score");
      if (score == body.end() || !score->is_number_integer())
        throw HttpError(400, "score: required integer between 1 and 5", "score");
      const long long s = score->get<long long>();
      if (s < kMinScore || s > kMaxScore) throw HttpError(400, "score: must be between 1 and 5", "score");
      label.score = static_cast<int>(s);
      label.labeled_at = now_timestamp();
      if (store.corpus().find_question(label.question_id) == nullptr)
        throw HttpError(400, "question: unknown question '" + label.question_id + "'", "question");

      std::unique_lock lock(data_mutex);
      const auto& saved = store.labels().record(label, &store.corpus());
      store.save_labels();
      send_json(res, 200, saved);
    }));

    server.Get("/labels/agreement", guarded([this](const httplib::Request& req, auto& res) {
      std::shared_lock lock(data_mutex);
      std::optional<std::string_view> qid;
      const std::string q = req.get_param_value("question");
      if (!q.empty()) qid = q;
      send_json(res, 200, store.labels().agreement(qid));
    }));

    server.Post("/jobs/classify", guarded([this](const httplib::Request& req, auto& res) {
      require_token(req);
      const json body = parse_body(req);
      TrainingSetConfig config = config_from<TrainingSetConfig>(body);
      if (const auto q = body.find("question"); q != body.end() && q->is_string()) config.target_question_id = *q;
      if (config.target_question_id.empty())
        throw HttpError(400, "question: required non-empty string", "question");
      word_cloud_question(config.target_question_id);
      try {
        config.validate();
      } catch (const InvalidArgument& e) {
        throw HttpError(400, e.what());
      }
      const json job = enqueue("classify", config.target_question_id, [this, config](Job& j) {
        NonEarnestPool pool;
        {
          std::shared_lock lock(data_mutex);
          pool = NonEarnestPool::from_labels(store.labels());
        }
        auto run = classify_question(store.corpus(), config, pool, provider, &cache);
        std::unique_lock lock(data_mutex);
        const auto& saved = store.add_run(std::move(run));
        j.result_ref = "/runs/" + saved.run_id + "/classes";
        j.result = {{"run_id", saved.run_id}};
      });
      send_json(res, 202, job);
    }));

    server.Post("/jobs/ablate", guarded([this](const httplib::Request& req, auto& res) {
      require_token(req);
      const json body = parse_body(req);
      TrainingSetConfig base = config_from<TrainingSetConfig>(body);
      AblationGrid grid;
      if (const auto g = body.find("grid"); g != body.end()) {
        if (!g->is_string()) throw HttpError(400, "grid: expected a string", "grid");
        try {
          grid = AblationGrid::parse(g->get<std::string>());
        } catch (const InvalidArgument& e) {
          throw HttpError(400, std::string("grid: ") + e.what(), "grid");
        }
      }
      const json job = enqueue("ablate", "", [this, base, grid](Job& j) {
        LabelStore labels;
        {
          std::shared_lock lock(data_mutex);
          labels = store.labels();
        }
        const auto cells = ablate(store.corpus(), labels, labels, grid, base, provider, &cache);
        j.result = {{"cells", cells}};
        j.result_ref = "/jobs/" + j.id + "/result";
      });
      send_json(res, 202, job);
    }));

    server.Post("/jobs/project", guarded([this](const httplib::Request& req, auto& res) {
      require_token(req);
      const json body = parse_body(req);
      const std::string qid = require_string(body, "question");
      word_cloud_question(qid);
      TsneConfig config = config_from<TsneConfig>(body);
      const json job = enqueue("project", qid, [this, qid, config](Job& j) {
        LabelStore labels;
        {
          std::shared_lock lock(data_mutex);
          labels = store.labels();
        }
        const auto p = project_question(store.corpus(), labels, qid, config, provider, &cache);
        json points = json::array();
        for (const auto& pt : p.points)
          points.push_back({{"text", pt.normalized_text}, {"x", pt.x}, {"y", pt.y},
                            {"class", pt.class_hint ? std::string(to_string(*pt.class_hint)) : "unlabeled"}});
        j.result = {{"question_id", qid}, {"perplexity", p.perplexity}, {"kl_initial", p.kl_trace.front()},
                    {"kl_final", p.kl_trace.back()}, {"points", std::move(points)}};
        j.result_ref = "/jobs/" + j.id + "/result";
      });
      send_json(res, 202, job);
    }));

    server.Get("/jobs/:id", guarded([this](const httplib::Request& req, auto& res) {
      std::lock_guard lock(job_mutex);
      const auto it = jobs.find(req.path_params.at("id"));
      if (it == jobs.end()) throw NotFound("unknown job '" + req.path_params.at("id") + "'");
      send_json(res, 200, it->second->summary());
    }));

    server.Get("/jobs/:id/result", guarded([this](const httplib::Request& req, auto& res) {
      std::lock_guard lock(job_mutex);
      const auto it = jobs.find(req.path_params.at("id"));
      if (it == jobs.end()) throw NotFound("unknown job '" + req.path_params.at("id") + "'");
      if (it->second->state != JobState::done) throw HttpError(409, "job is " + std::string(to_string(it->second->state)));
      send_json(res, 200, it->second->result);
    }));

    server.Get("/runs", guarded([this](auto&, auto& res) {
      std::shared_lock lock(data_mutex);
      json out = json::array();
      for (const auto& r : store.runs())
        out.push_back({{"run_id", r.run_id}, {"question_id", r.question_id}, {"created_at", format_timestamp(r.created_at)},
                       {"provider", r.provider_id}, {"fingerprint", r.fingerprint}, {"entries", r.entries.size()}});
      send_json(res, 200, out);
    }));

    server.Get("/runs/:id/classes", guarded([this](const httplib::Request& req, auto& res) {
      std::shared_lock lock(data_mutex);
      send_json(res, 200, run_classes(store.run(req.path_params.at("id"))));
    }));

    server.Get("/atrisk", guarded([this](const httplib::Request& req, auto& res) {
      AtRiskConfig config;
      if (auto t = query_number<double>(req, "threshold")) config.non_earnest_threshold = *t;
      if (auto w = query_number<std::size_t>(req, "window")) config.window_lectures = *w;
      if (auto m = query_number<std::size_t>(req, "min_responses")) config.min_responses = *m;
      try {
        config.validate();
      } catch (const InvalidArgument& e) {
        throw HttpError(400, e.what());
      }
      std::shared_lock lock(data_mutex);
      send_json(res, 200, {{"config", config}, {"flags", flag_at_risk(store.corpus(), store.runs(), config)}});
    }));
  }
};

Service::Service(Store& store, const EmbeddingProvider& provider, ServiceOptions options)
    : impl_(std::make_unique<Impl>(store, provider, std::move(options))) {
  impl_->server.new_task_queue = [n = impl_->options.request_threads] { return new httplib::ThreadPool(n); };
  impl_->routes();
  impl_->start_worker();
}

Service::~Service() {
  stop();
  impl_->stop_worker();
}

int Service::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void Service::run() { impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

void Service::wait_idle() {
  std::unique_lock lock(impl_->job_mutex);
  impl_->job_cv.wait(lock, [&] { return impl_->queue.empty() && !impl_->running_job; });
}

}  // namespace eit
