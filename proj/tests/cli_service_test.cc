/* Copyright 2026 The TestAug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <filesystem>
#include <fstream>
#include <map>

#include "gtest/gtest.h"
#include "httplib.h"
#include "test_util.h"
#include "testaug/annotation_service.h"
#include "testaug/config.h"
#include "testaug/jsonl.h"
#include "testaug/mock_server.h"
#include "testaug/pipeline.h"

namespace testaug {
namespace {

namespace fs = std::filesystem;
using testing_util::AirlineSuite;
using testing_util::CaughtCode;
using testing_util::MakeCase;
using testing_util::TempDir;

const fs::path kDemo = fs::path(TESTAUG_SOURCE_DIR) / "data" / "demo";

EnvLookup FakeEnv(std::map<std::string, std::string> vars) {
  return [vars](const std::string& name) -> std::optional<std::string> {
    auto it = vars.find(name);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

TEST(ConfigTest, DefaultsFileAndEnvLayering) {
  Json file = {{"task", "paraphrase"},
               {"seed_suite", "suites/seed"},
               {"generation", {{"n_completions", 7}, {"temperature", 0.5}}},
               {"filter", {{"validity_threshold", 0.75}}}};
  PipelineConfig c = ConfigFromJson(
      file,
      FakeEnv({{"TESTAUG_GENERATION_N_COMPLETIONS", "9"},
               {"TESTAUG_HARNESS_SEEDS", "1,2,3"},
               {"TESTAUG_SEED", "5"}}),
      "/base");
  EXPECT_EQ(c.task, TaskId::kParaphrase);
  EXPECT_EQ(c.generation.n_completions, 9);
  EXPECT_DOUBLE_EQ(c.generation.temperature, 0.5);
  EXPECT_EQ(c.generation.max_tokens, 256);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.harness.seeds, (std::vector<uint64_t>{1, 2, 3}));
  EXPECT_EQ(c.filter.validity_threshold, 0.75);
  EXPECT_EQ(c.filter.phase1_sample_size, 40u);
  EXPECT_EQ(c.filter.phase2_target, 100u);
  EXPECT_EQ(c.seed_suite, fs::path("/base/suites/seed"));

  PipelineConfig d = ConfigFromJson(Json::object(), FakeEnv({}));
  EXPECT_EQ(d.harness.seeds, (std::vector<uint64_t>{11, 14, 25, 42, 74}));
  EXPECT_EQ(d.k_demos, 3u);
  EXPECT_FALSE(d.filter.validity_threshold.has_value());
  PipelineConfig e = ConfigFromJson(
      Json::object(), FakeEnv({{"TESTAUG_FILTER_VALIDITY_THRESHOLD", "0.85"}}));
  EXPECT_EQ(e.filter.validity_threshold, 0.85);
}

TEST(ConfigTest, Errors) {
  EXPECT_EQ(CaughtCode([] { ConfigFromJson({{"task", "qa"}}, FakeEnv({})); }),
            ErrorCode::kConfigError);
  EXPECT_EQ(CaughtCode([] { ConfigFromJson({{"bogus", 1}}, FakeEnv({})); }),
            ErrorCode::kConfigError);
  EXPECT_EQ(CaughtCode([] {
              ConfigFromJson({{"generation", {{"n_completions", "many"}}}}, FakeEnv({}));
            }),
            ErrorCode::kConfigError);
  EXPECT_EQ(CaughtCode([] {
              ConfigFromJson(Json::object(),
                             FakeEnv({{"TESTAUG_GENERATION_MAX_TOKENS", "x"}}));
            }),
            ErrorCode::kConfigError);
  EXPECT_EQ(CaughtCode([] { LoadConfig("/nonexistent/config.json", FakeEnv({})); }),
            ErrorCode::kConfigError);
  EXPECT_EQ(ClassOf(ErrorCode::kConfigError), ErrorClass::kUsage);
}

TEST(ConfigTest, RoundTripThroughJson) {
  PipelineConfig c = LoadConfig(kDemo / "pipeline.json", FakeEnv({}));
  Json j = ConfigToJson(c);
  PipelineConfig again = ConfigFromJson(j, FakeEnv({}));
  EXPECT_EQ(ConfigToJson(again), j);
}

// Every regular file under `root`, keyed by relative path.
std::map<std::string, std::string> Snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      out[fs::relative(entry.path(), root).string()] = ReadFile(entry.path());
    }
  }
  return out;
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    mock_ = std::make_unique<MockLlmServer>(
        MockLlmServer::FromFile(kDemo / "mock_fixture.json"));
    port_ = mock_->Start();
  }
  void TearDown() override { mock_->Stop(); }

  PipelineConfig Config(const fs::path& out) {
    PipelineConfig c = LoadConfig(kDemo / "pipeline.json", FakeEnv({}));
    c.out_dir = out;
    c.generation.endpoint_url =
        "http://127.0.0.1:" + std::to_string(port_) + "/v1/completions";
    return c;
  }

  std::unique_ptr<MockLlmServer> mock_;
  int port_ = 0;
};

TEST_F(PipelineTest, ByteIdenticalAcrossRuns) {
  TempDir dir;
  PipelineOptions opts;
  opts.endpoint_identity = "mock";
  PipelineResult a = RunPipeline(Config(dir / "a"), opts);
  PipelineResult b = RunPipeline(Config(dir / "b"), opts);
  EXPECT_GT(a.augmented.cases.size(), LoadSuite(kDemo / "seed_suite").cases.size());
  EXPECT_EQ(a.stages.size(), 5u);
  std::map<std::string, std::string> sa = Snapshot(dir / "a");
  EXPECT_EQ(sa, Snapshot(dir / "b"));
  EXPECT_TRUE(sa.contains("augmented/cases.jsonl"));
  EXPECT_TRUE(sa.contains(std::string(kPipelineManifest)));
  EXPECT_GT(a.saving.n_new_templates, 0u);

  // A second run over the same directory skips every stage.
  PipelineResult again = RunPipeline(Config(dir / "a"), opts);
  for (const StageOutcome& s : again.stages) EXPECT_TRUE(s.skipped) << s.name;
  EXPECT_EQ(Snapshot(dir / "a"), sa);

  // Forcing reruns everything with the same bytes.
  opts.force = true;
  PipelineResult forced = RunPipeline(Config(dir / "a"), opts);
  for (const StageOutcome& s : forced.stages) EXPECT_FALSE(s.skipped) << s.name;
  EXPECT_EQ(Snapshot(dir / "a"), sa);
}

TEST_F(PipelineTest, ResumesAfterDownstreamDamage) {
  TempDir dir;
  PipelineOptions opts;
  opts.endpoint_identity = "mock";
  RunPipeline(Config(dir / "a"), opts);
  const auto before = Snapshot(dir / "a");
  WriteFileAtomic(dir / "a" / "expand" / "cases.jsonl", "");
  PipelineResult r = RunPipeline(Config(dir / "a"), opts);
  std::map<std::string, bool> skipped;
  for (const StageOutcome& s : r.stages) skipped[s.name] = s.skipped;
  EXPECT_TRUE(skipped["generate"]);
  EXPECT_TRUE(skipped["validity"]);
  EXPECT_FALSE(skipped["expand"]);
  EXPECT_EQ(Snapshot(dir / "a"), before);
}

TEST_F(PipelineTest, EndpointFailureNamesStage) {
  TempDir dir;
  PipelineConfig c = Config(dir / "a");
  mock_->Stop();
  c.generation.max_retries = 0;
  try {
    RunPipeline(c, {});
    FAIL() << "expected failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEndpointError);
    EXPECT_NE(std::string(e.what()).find("stage generate"), std::string::npos);
  }
}

// ---------------------------------------------------------------------------
// Annotation service
// ---------------------------------------------------------------------------

std::vector<TestCase> Candidates(size_t per_test) {
  std::vector<TestCase> out;
  for (size_t i = 0; i < per_test; ++i) {
    out.push_back(MakeCase(TaskId::kSentiment, "negated_pos",
                           {"Nobody likes flight " + std::to_string(i) + "."},
                           "negative"));
    out.push_back(MakeCase(TaskId::kSentiment, "pos_adj",
                           {"Seat " + std::to_string(i) + " was great."}, "positive"));
  }
  return out;
}

class AnnotationHttpTest : public ::testing::Test {
 protected:
  void Start(AnnotationServiceOptions opts = {}) {
    store_ = std::make_shared<AnnotationStore>(dir_ / "labels.jsonl");
    service_ = std::make_unique<AnnotationService>(AirlineSuite(5), Candidates(50),
                                                   store_, opts);
    port_ = service_->Start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    if (service_) service_->Stop();
  }
  httplib::Result PostLabel(const Json& body) {
    return client_->Post("/api/labels", body.dump(), "application/json");
  }
  Json Next(const std::string& who) {
    auto res = client_->Get("/api/next?annotator=" + who);
    if (!res || res->status != 200) return nullptr;
    return Json::parse(res->body);
  }

  TempDir dir_;
  std::shared_ptr<AnnotationStore> store_;
  std::unique_ptr<AnnotationService> service_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

TEST_F(AnnotationHttpTest, StatusCodes) {
  Start();
  Json next = Next("alice");
  ASSERT_TRUE(next.is_object());
  EXPECT_EQ(next["test_id"], "negated_pos");
  EXPECT_EQ(next["seed_examples"].size(), 3u);
  EXPECT_EQ(next["guideline_version"], "v1");
  const std::string id = next["case_id"];

  auto res = PostLabel({{"case_id", id}, {"annotator_id", "alice"}, {"valid", true},
                        {"guideline_version", "v1"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 204);
  res = PostLabel({{"case_id", "nope"}, {"annotator_id", "alice"}, {"valid", true}});
  EXPECT_EQ(res->status, 404);
  res = PostLabel({{"case_id", id}, {"annotator_id", "alice"}, {"valid", true},
                   {"guideline_version", "v0"}});
  EXPECT_EQ(res->status, 409);
  res = PostLabel({{"case_id", id}, {"valid", true}});
  EXPECT_EQ(res->status, 400);
  res = client_->Post("/api/labels", "{oops", "application/json");
  EXPECT_EQ(res->status, 400);
  res = client_->Get("/api/next");
  EXPECT_EQ(res->status, 400);

  // Reposting the same judgment is a no-op.
  const size_t n = store_->All().size();
  res = PostLabel({{"case_id", id}, {"annotator_id", "alice"}, {"valid", true}});
  EXPECT_EQ(res->status, 204);
  EXPECT_EQ(store_->All().size(), n);
  // The labeled case is not offered to the same annotator again.
  EXPECT_NE(Next("alice")["case_id"], id);
  EXPECT_EQ(Next("bob")["case_id"], id);

  res = client_->Get("/api/agreement?a=alice&b=bob");
  EXPECT_EQ(res->status, 404);
  res = client_->Get("/");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
}

TEST_F(AnnotationHttpTest, ScriptedPhaseOneRun) {
  AnnotationServiceOptions opts;
  opts.min_annotators = 2;
  Start(opts);
  // Two annotators label the whole phase-1 queue of the first test; one
  // case in ten is judged invalid by bob only.
  std::vector<std::string> first_test;
  for (const std::string who : {"alice", "bob"}) {
    size_t k = 0;
    while (true) {
      Json next = Next(who);
      ASSERT_TRUE(next.is_object());
      if (next["test_id"] != "negated_pos") break;
      if (who == "alice") first_test.push_back(next["case_id"]);
      const bool valid = who == "alice" || k % 10 != 0;
      ASSERT_EQ(PostLabel({{"case_id", next["case_id"]},
                           {"annotator_id", who},
                           {"valid", valid}})->status,
                204);
      ++k;
    }
    EXPECT_EQ(k, 40u);
  }
  EXPECT_EQ(first_test.size(), 40u);
  auto res = client_->Get("/api/progress");
  ASSERT_TRUE(res);
  Json progress = Json::parse(res->body);
  ASSERT_EQ(progress["tests"].size(), 2u);
  // 36 of 40 valid under the conjunction rule: exactly at the 0.9 threshold.
  EXPECT_EQ(progress["tests"][0]["test_id"], "negated_pos");
  EXPECT_EQ(progress["tests"][0]["phase"], "predominantly_valid");
  EXPECT_EQ(progress["tests"][0]["valid_count"], 36);
  EXPECT_EQ(progress["tests"][1]["phase"], "phase1");

  res = client_->Get("/api/agreement?a=alice&b=bob");
  ASSERT_EQ(res->status, 200);
  Json agreement = Json::parse(res->body);
  EXPECT_EQ(agreement["n_total"], 40);
  EXPECT_EQ(agreement["n_agree"], 36);

  // Service restart over the same label file recovers the state.
  service_->Stop();
  service_.reset();
  auto store = std::make_shared<AnnotationStore>(dir_ / "labels.jsonl");
  AnnotationService restarted(AirlineSuite(5), Candidates(50), store, opts);
  EXPECT_EQ(restarted.States()[0].phase, Phase::kPredominantlyValid);
}

TEST_F(AnnotationHttpTest, StaticDirectory) {
  fs::create_directories(dir_ / "ui");
  std::ofstream(dir_ / "ui" / "index.html") << "<html>annotate</html>";
  AnnotationServiceOptions opts;
  opts.static_dir = dir_ / "ui";
  Start(opts);
  auto res = client_->Get("/");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<html>annotate</html>");
  AnnotationService other(AirlineSuite(5), Candidates(2), store_, opts);
  EXPECT_EQ(CaughtCode([&] { other.Start("127.0.0.1", port_); }),
            ErrorCode::kPortInUse);
}

}  // namespace
}  // namespace testaug
