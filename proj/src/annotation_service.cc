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

#include "testaug/annotation_service.h"

#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "http_util.h"
#include "testaug/error.h"
#include "testaug/rng.h"

namespace testaug {

namespace {

constexpr const char* kPlaceholderPage =
    "<!doctype html><html><head><meta charset=\"utf-8\">"
    "<title>TestAug annotation</title></head><body>"
    "<h1>TestAug annotation service</h1>"
    "<p>No UI bundle is mounted. The JSON API lives under /api/.</p>"
    "</body></html>\n";

void JsonError(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(Json{{"error", message}}.dump(), "application/json");
}

}  // namespace

struct AnnotationService::Impl {
  TestSuite seed_suite;
  std::vector<TestCase> candidates;
  std::shared_ptr<AnnotationStore> store;
  AnnotationServiceOptions options;

  std::unordered_map<std::string, std::string> case_tests;
  std::unordered_map<std::string, const TestCase*> by_id;
  // Per test, candidates in generation order.
  std::map<std::string, std::vector<const TestCase*>> test_cases;

  std::mutex mu;
  std::map<std::string, PhaseState> states;

  httplib::Server server;
  std::thread thread;

  TestDescription Description(const std::string& test_id) const {
    const TestDescription* d = seed_suite.FindDescription(test_id);
    TestDescription desc = d != nullptr ? *d : TestDescription{};
    if (d == nullptr) desc.id = test_id;
    if (options.validity_threshold) {
      desc.validity_threshold = *options.validity_threshold;
    }
    return desc;
  }

  // Test ids in description order, then any test without a description.
  std::vector<std::string> TestOrder() const {
    std::vector<std::string> order;
    std::unordered_set<std::string> seen;
    for (const TestDescription& d : seed_suite.descriptions) {
      if (test_cases.contains(d.id) && seen.insert(d.id).second) {
        order.push_back(d.id);
      }
    }
    for (const auto& [id, cases] : test_cases) {
      if (seen.insert(id).second) order.push_back(id);
    }
    return order;
  }

  // Advances every test's state with the store's current contents.
  std::map<std::string, PhaseState> Refresh(
      const std::vector<AnnotationRecord>& latest) {
    std::map<std::string, std::vector<AnnotationRecord>> by_test;
    for (const AnnotationRecord& r : latest) {
      auto it = case_tests.find(r.case_id);
      if (it != case_tests.end()) by_test[it->second].push_back(r);
    }
    std::lock_guard<std::mutex> lock(mu);
    for (auto& [test_id, state] : states) {
      state = AdvancePhase(state, Description(test_id), by_test[test_id],
                           case_tests);
    }
    return states;
  }
};

AnnotationService::AnnotationService(TestSuite seed_suite,
                                     std::vector<TestCase> candidates,
                                     std::shared_ptr<AnnotationStore> store,
                                     AnnotationServiceOptions options)
    : impl_(std::make_unique<Impl>()) {
  Impl& m = *impl_;
  m.seed_suite = std::move(seed_suite);
  m.candidates = std::move(candidates);
  m.store = store ? std::move(store) : std::make_shared<AnnotationStore>();
  m.options = std::move(options);
  for (const TestCase& c : m.candidates) {
    m.case_tests[c.id] = c.test_id;
    m.by_id[c.id] = &c;
    m.test_cases[c.test_id].push_back(&c);
  }
  for (const auto& [test_id, cases] : m.test_cases) {
    PhaseState s;
    s.test_id = test_id;
    s.phase1_sample_size = m.options.phase1_sample_size;
    s.phase2_target = m.options.phase2_target;
    s.min_annotators = m.options.min_annotators;
    m.states.emplace(test_id, std::move(s));
  }

  httplib::Server& srv = m.server;
  srv.Get("/api/next", [this](const httplib::Request& req,
                              httplib::Response& res) {
    const std::string annotator = req.get_param_value("annotator");
    if (annotator.empty()) {
      JsonError(res, 400, "annotator parameter is required");
      return;
    }
    std::optional<Json> next = Next(annotator);
    if (!next) {
      res.status = 204;
      return;
    }
    res.set_content(next->dump(), "application/json");
  });
  srv.Post("/api/labels", [this](const httplib::Request& req,
                                 httplib::Response& res) {
    Status status = PostLabel(req.body);
    if (status.code == 204) {
      res.status = 204;
    } else {
      JsonError(res, status.code, status.error);
    }
  });
  srv.Get("/api/progress", [this](const httplib::Request&,
                                  httplib::Response& res) {
    res.set_content(Progress().dump(), "application/json");
  });
  srv.Get("/api/agreement", [this](const httplib::Request& req,
                                   httplib::Response& res) {
    const std::string a = req.get_param_value("a");
    const std::string b = req.get_param_value("b");
    if (a.empty() || b.empty()) {
      JsonError(res, 400, "parameters a and b are required");
      return;
    }
    try {
      res.set_content(
          AgreementToJson(Agreement(impl_->store->Latest(), a, b)).dump(),
          "application/json");
    } catch (const Error& e) {
      JsonError(res, e.code() == ErrorCode::kNoOverlap ? 404 : 400, e.what());
    }
  });
  if (!m.options.static_dir.empty()) {
    if (!srv.set_mount_point("/", m.options.static_dir.string())) {
      throw Error(ErrorCode::kIoError,
                  "cannot serve " + m.options.static_dir.string());
    }
  } else {
    srv.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
}

AnnotationService::~AnnotationService() { Stop(); }

int AnnotationService::Start(const std::string& host, int port) {
  return internal::BindAndServe(impl_->server, host, port, impl_->thread);
}

void AnnotationService::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void AnnotationService::Wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::optional<Json> AnnotationService::Next(const std::string& annotator_id) {
  Impl& m = *impl_;
  const std::vector<AnnotationRecord> latest = m.store->Latest();
  const std::map<std::string, PhaseState> states = m.Refresh(latest);
  std::unordered_set<std::string> done;
  for (const AnnotationRecord& r : latest) {
    if (r.annotator_id == annotator_id) done.insert(r.case_id);
  }

  const TestCase* pick = nullptr;
  const std::vector<std::string> order = m.TestOrder();
  for (Phase wanted : {Phase::kPhase1, Phase::kPhase2Collecting}) {
    for (const std::string& test_id : order) {
      const PhaseState& state = states.at(test_id);
      if (state.phase != wanted) continue;
      const std::vector<const TestCase*>& cases = m.test_cases.at(test_id);
      const size_t limit = wanted == Phase::kPhase1
                               ? std::min(cases.size(), state.phase1_sample_size)
                               : cases.size();
      for (size_t i = 0; i < limit && pick == nullptr; ++i) {
        if (cases[i]->validity == Validity::kUnknown &&
            !done.contains(cases[i]->id)) {
          pick = cases[i];
        }
      }
      if (pick != nullptr) break;
    }
    if (pick != nullptr) break;
  }
  if (pick == nullptr) return std::nullopt;

  const PhaseState& state = states.at(pick->test_id);
  const TestDescription desc = m.Description(pick->test_id);
  std::vector<const TestCase*> seeds;
  for (const TestCase& c : m.seed_suite.cases) {
    if (c.test_id == pick->test_id && c.origin == Origin::kSeed) {
      seeds.push_back(&c);
    }
  }
  Rng rng(DeriveSeed(m.options.seed, "examples:" + pick->id));
  Json examples = Json::array();
  for (size_t i : rng.SampleIndices(
           seeds.size(), std::min(seeds.size(), m.options.n_seed_examples))) {
    examples.push_back(seeds[i]->texts);
  }

  Json j;
  j["case_id"] = pick->id;
  j["test_id"] = pick->test_id;
  j["texts"] = pick->texts;
  j["label"] = pick->label;
  j["description"] = desc.description;
  j["capability"] = desc.capability.name;
  j["seed_examples"] = std::move(examples);
  j["phase"] = PhaseName(state.phase);
  j["guidelines"] = m.options.guidelines_text;
  j["guideline_version"] = m.options.guideline_version;
  j["progress"] = PhaseStateToJson(state);
  return j;
}

AnnotationService::Status AnnotationService::PostLabel(const std::string& body) {
  Impl& m = *impl_;
  Json j;
  try {
    j = Json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    return {400, "malformed JSON"};
  }
  if (!j.is_object() || !j.contains("case_id") || !j["case_id"].is_string() ||
      !j.contains("annotator_id") || !j["annotator_id"].is_string() ||
      j["annotator_id"].get<std::string>().empty() || !j.contains("valid") ||
      !j["valid"].is_boolean()) {
    return {400, "expected {case_id, annotator_id, valid}"};
  }
  if (j.contains("guideline_version")) {
    if (!j["guideline_version"].is_string()) {
      return {400, "guideline_version must be a string"};
    }
    if (j["guideline_version"].get<std::string>() != m.options.guideline_version) {
      return {409, "guidelines changed; current version is " +
                       m.options.guideline_version};
    }
  }
  const std::string case_id = j["case_id"].get<std::string>();
  if (!m.by_id.contains(case_id)) return {404, "unknown case " + case_id};

  AnnotationRecord record;
  record.case_id = case_id;
  record.annotator_id = j["annotator_id"].get<std::string>();
  record.valid = j["valid"].get<bool>();
  record.timestamp = Now();
  record.guideline_version = m.options.guideline_version;
  m.store->Add(std::move(record));
  return {204, ""};
}

std::vector<PhaseState> AnnotationService::States() {
  std::vector<PhaseState> out;
  const auto states = impl_->Refresh(impl_->store->Latest());
  for (const std::string& id : impl_->TestOrder()) out.push_back(states.at(id));
  return out;
}

Json AnnotationService::Progress() {
  Json tests = Json::array();
  for (const PhaseState& s : States()) {
    Json t = PhaseStateToJson(s);
    const TestDescription desc = impl_->Description(s.test_id);
    t["description"] = desc.description;
    t["validity_threshold"] = desc.validity_threshold;
    t["n_candidates"] = impl_->test_cases.at(s.test_id).size();
    tests.push_back(std::move(t));
  }
  Json j;
  j["guideline_version"] = impl_->options.guideline_version;
  j["tests"] = std::move(tests);
  return j;
}

}  // namespace testaug
