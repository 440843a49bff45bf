#include <gtest/gtest.h>

#include <httplib.h>

#include <nlohmann/json.hpp>
#include <thread>

#include "eit/engagement.hpp"
#include "eit/json.hpp"
#include "eit/pipeline.hpp"
#include "eit/service.hpp"
#include "support.hpp"

using namespace eit;
using nlohmann::json;
using testing_support::TempDir;

namespace {

constexpr const char* kToken = "s3cret";

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override { start(kToken); }

  void start(const std::string& token) {
    store_ = std::make_unique<Store>(testing_support::course_store(dir_.path()));
    ServiceOptions opts;
    opts.api_token = token;
    service_ = std::make_unique<Service>(*store_, provider_, opts);
    port_ = service_->bind("127.0.0.1", 0);
    thread_ = std::thread([this] { service_->run(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    for (int i = 0; i < 100 && !client_->Get("/health"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }

  void TearDown() override {
    service_->stop();
    thread_.join();
    service_.reset();
  }

  httplib::Result post(const std::string& path, const json& body, const std::string& token = kToken) {
    httplib::Headers h;
    if (!token.empty()) h.emplace("Authorization", "Bearer " + token);
    return client_->Post(path, h, body.dump(), "application/json");
  }

  json get_json(const std::string& path, int expect = 200) {
    auto r = client_->Get(path);
    EXPECT_TRUE(r);
    EXPECT_EQ(r->status, expect) << path << ": " << r->body;
    return json::parse(r->body);
  }

  json wait_job(const std::string& id) {
    for (int i = 0; i < 2000; ++i) {
      auto j = get_json("/jobs/" + id);
      if (j["status"] == "done" || j["status"] == "failed") return j;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ADD_FAILURE() << "job " << id << " did not finish";
    return {};
  }

  TempDir dir_{"svc"};
  FallbackProvider provider_;
  std::unique_ptr<Store> store_;
  std::unique_ptr<Service> service_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace

TEST_F(ServiceTest, HealthAndCors) {
  auto r = client_->Get("/health");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(json::parse(r->body), (json{{"status", "ok"}}));
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(ServiceTest, QuestionsAndPagedResponses) {
  const auto qs = get_json("/questions");
  EXPECT_EQ(qs.size(), store_->corpus().questions().size());
  const auto page = get_json("/questions/Q1/responses?page=2&page_size=10");
  EXPECT_EQ(page["responses"].size(), 10u);
  EXPECT_EQ(page["total"], store_->corpus().responses_for("Q1").size());
  EXPECT_EQ(page["responses"][0]["response_id"], store_->corpus().responses_for("Q1")[10]->response_id);
  get_json("/questions/Q99/responses", 404);
  EXPECT_EQ(get_json("/questions/Q1/responses?page=x", 400)["field"], "page");
}

TEST_F(ServiceTest, SampleMatchesLibrary) {
  const auto got = get_json("/questions/Q1/sample?n=15&seed=7");
  const auto want = sample_question(store_->corpus(), "Q1", {0.2, 0.2, 15, 7}, provider_);
  EXPECT_EQ(got["sample"], json(want.sample));
}

TEST_F(ServiceTest, LabelValidationAndAuth) {
  const json body = {{"annotator", "ui"}, {"question", "Q1"}, {"text", "  IDK "}, {"score", 1}};
  EXPECT_EQ(post("/labels", body, "")->status, 401);
  EXPECT_EQ(post("/labels", body, "wrong")->status, 401);

  auto bad = body;
  bad["score"] = 6;
  auto r = post("/labels", bad);
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(json::parse(r->body)["field"], "score");
  bad = body;
  bad.erase("annotator");
  EXPECT_EQ(json::parse(post("/labels", bad)->body)["field"], "annotator");
  EXPECT_EQ(client_->Post("/labels", {{"Authorization", std::string("Bearer ") + kToken}}, "{oops", "application/json")->status, 400);
  bad = body;
  bad["question"] = "Q99";
  EXPECT_EQ(post("/labels", bad)->status, 400);

  r = post("/labels", body);
  ASSERT_EQ(r->status, 200) << r->body;
  EXPECT_EQ(json::parse(r->body)["normalized_text"], "idk");
  bool found = false;
  for (const auto& l : get_json("/labels?question=Q1")) found |= l["annotator_id"] == "ui" && l["normalized_text"] == "idk";
  EXPECT_TRUE(found);
  // Persisted immediately.
  EXPECT_EQ(Store::open(dir_.path()).labels().size(), store_->labels().size());
}

TEST_F(ServiceTest, AgreementMatchesLibrary) {
  EXPECT_EQ(get_json("/labels/agreement"), json(store_->labels().agreement()));
}

TEST_F(ServiceTest, ClassifyJobMatchesDirectCall) {
  TrainingSetConfig cfg;
  cfg.target_question_id = "Q7";
  cfg.seed = 5;
  auto r = post("/jobs/classify", {{"question", "Q7"}, {"seed", 5}});
  ASSERT_EQ(r->status, 202) << r->body;
  const auto job = wait_job(json::parse(r->body)["job_id"]);
  ASSERT_EQ(job["status"], "done") << job.dump();
  const auto classes = get_json(job["result_ref"].get<std::string>());

  const auto direct = classify_question(store_->corpus(), cfg, NonEarnestPool::from_labels(store_->labels()), provider_);
  ASSERT_EQ(classes["classes"].size(), direct.entries.size());
  EXPECT_EQ(classes["classes"].size(), store_->corpus().unique_responses("Q7").size());
  for (std::size_t i = 0; i < direct.entries.size(); ++i) {
    EXPECT_EQ(classes["classes"][i]["normalized_text"], direct.entries[i].normalized_text);
    EXPECT_EQ(classes["classes"][i]["class"], to_string(direct.entries[i].cls));
  }
  EXPECT_EQ(classes["fingerprint"], direct.fingerprint);
  EXPECT_EQ(get_json("/runs").size(), 1u);
}

TEST_F(ServiceTest, ConflictingJobIs409) {
  // Occupy the worker so the next two jobs stay queued.
  ASSERT_EQ(post("/jobs/project", {{"question", "Q14"}, {"iterations", 30000}})->status, 202);
  auto first = post("/jobs/classify", {{"question", "Q1"}});
  ASSERT_EQ(first->status, 202);
  auto second = post("/jobs/classify", {{"question", "Q1"}});
  EXPECT_EQ(second->status, 409) << second->body;
  EXPECT_EQ(post("/jobs/project", {{"question", "Q1"}})->status, 409);
  EXPECT_EQ(post("/jobs/classify", {{"question", "Q5"}})->status, 202);
  service_->wait_idle();
  EXPECT_EQ(get_json("/jobs/" + json::parse(first->body)["job_id"].get<std::string>())["status"], "done");
}

TEST_F(ServiceTest, NotFoundAndBadRequests) {
  get_json("/jobs/job-999", 404);
  get_json("/runs/run-999999/classes", 404);
  EXPECT_EQ(post("/jobs/classify", {{"question", "Q99"}})->status, 404);
  EXPECT_EQ(post("/jobs/classify", {{"seed", 1}})->status, 400);
  EXPECT_EQ(post("/jobs/classify", {{"question", "Q1"}, {"k", "five"}})->status, 400);
  EXPECT_EQ(post("/jobs/ablate", {{"grid", "nonsense"}})->status, 400);
  get_json("/atrisk?threshold=2", 400);
}

TEST_F(ServiceTest, AblateAndProjectJobs) {
  auto r = post("/jobs/ablate", {{"grid", "default"}});
  ASSERT_EQ(r->status, 202);
  auto job = wait_job(json::parse(r->body)["job_id"]);
  ASSERT_EQ(job["status"], "done") << job.dump();
  EXPECT_EQ(get_json(job["result_ref"].get<std::string>())["cells"].size(), 9u);

  r = post("/jobs/project", {{"question", "Q5"}});
  job = wait_job(json::parse(r->body)["job_id"]);
  const auto result = get_json(job["result_ref"].get<std::string>());
  EXPECT_EQ(result["points"].size(), store_->corpus().unique_responses("Q5").size());
  EXPECT_LT(result["kl_final"].get<double>(), result["kl_initial"].get<double>());
}

TEST_F(ServiceTest, AtRiskMatchesLibraryAndCorrectiveLabelFeedsPool) {
  for (const char* q : {"Q1", "Q5", "Q7", "Q11", "Q14"}) {
    auto r = post("/jobs/classify", {{"question", q}, {"seed", 1}});
    ASSERT_EQ(r->status, 202);
    service_->wait_idle();
  }
  const auto flags = get_json("/atrisk?threshold=0.5&window=3");
  EXPECT_EQ(flags["flags"], json(flag_at_risk(store_->corpus(), store_->runs(), {0.5, 3, 3})));

  // A corrective non-earnest label enters the next run's pool.
  const std::string text = store_->corpus().unique_responses("Q14").front().normalized_text;
  ASSERT_EQ(post("/labels", {{"annotator", "instructor"}, {"question", "Q14"}, {"text", text}, {"score", 1}})->status, 200);
  ASSERT_EQ(post("/labels", {{"annotator", "ann1"}, {"question", "Q14"}, {"text", text}, {"score", 1}})->status, 200);
  ASSERT_EQ(post("/labels", {{"annotator", "ann2"}, {"question", "Q14"}, {"text", text}, {"score", 1}})->status, 200);
  ASSERT_EQ(post("/labels", {{"annotator", "ann3"}, {"question", "Q14"}, {"text", text}, {"score", 1}})->status, 200);
  auto r = post("/jobs/classify", {{"question", "Q1"}, {"non_earnest_fraction", 1.0}});
  const auto job = wait_job(json::parse(r->body)["job_id"]);
  const auto& run = store_->run(job["run_id"].get<std::string>());
  EXPECT_NE(std::find(run.training_texts.begin(), run.training_texts.end(), text), run.training_texts.end());
}

TEST(ServiceReadOnly, MutationDisabledWithoutToken) {
  TempDir dir("svc-ro");
  auto store = testing_support::course_store(dir.path());
  FallbackProvider p;
  Service service(store, p, {});
  const int port = service.bind("127.0.0.1", 0);
  std::thread t([&] { service.run(); });
  httplib::Client c("127.0.0.1", port);
  httplib::Result r;
  for (int i = 0; i < 100 && !(r = c.Get("/health")); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  auto post = c.Post("/labels", {{"Authorization", "Bearer anything"}},
                     R"({"annotator":"a","question":"Q1","text":"x","score":3})", "application/json");
  ASSERT_TRUE(post);
  EXPECT_EQ(post->status, 401);
  service.stop();
  t.join();
}
