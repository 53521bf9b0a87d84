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

#include "testaug/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "http_util.h"
#include "testaug/error.h"
#include "testaug/rng.h"
#include "testaug/text.h"

namespace testaug {

namespace {

constexpr std::string_view kSplitFile = "split.json";

Json TaskLabelSet(TaskId task) {
  Json labels = Json::array();
  for (const std::string& l : GetTask(task).label_set) labels.push_back(l);
  return labels;
}

Json TrainingRecord(const TestCase& c) {
  Json j;
  j["case_id"] = c.id;
  j["test_id"] = c.test_id;
  j["texts"] = c.texts;
  j["label"] = c.label;
  return j;
}

}  // namespace

Json HyperparametersToJson(const TrainingHyperparameters& hp) {
  Json j;
  j["learning_rate"] = hp.learning_rate;
  j["batch_size"] = hp.batch_size;
  j["epochs"] = hp.epochs;
  j["max_seq_length"] = hp.max_seq_length;
  j["training_seed"] = hp.training_seed;
  return j;
}

EvalSplit MakeSplit(const std::vector<TestSuite>& suites, uint64_t seed,
                    double test_fraction) {
  if (!(test_fraction > 0.0 && test_fraction <= 1.0)) {
    throw Error(ErrorCode::kFractionOutOfRange,
                "test fraction must be in (0, 1], got " +
                    std::to_string(test_fraction));
  }
  if (suites.empty()) throw Error(ErrorCode::kEmptyUnion, "no suites given");

  EvalSplit split;
  split.seed = seed;
  split.test_fraction = test_fraction;
  split.task = suites.front().task;
  std::map<std::string, std::vector<std::string>> suite_ids;
  for (const TestSuite& s : suites) {
    if (s.task != split.task) {
      throw Error(ErrorCode::kInvalidArgument,
                  "suite " + s.name + " has task " +
                      std::string(TaskName(s.task)) + ", expected " +
                      std::string(TaskName(split.task)));
    }
    if (suite_ids.contains(s.name)) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate suite name " + s.name);
    }
    std::vector<std::string>& ids = suite_ids[s.name];
    for (const TestCase& c : s.cases) {
      split.cases.emplace(c.id, c);
      ids.push_back(c.id);
    }
    for (const TestDescription& d : s.descriptions) {
      split.descriptions.emplace(d.id, d);
    }
  }
  if (split.cases.empty()) {
    throw Error(ErrorCode::kEmptyUnion, "the suites contain no cases");
  }

  // split.cases is keyed by id, so each per-test list comes out sorted.
  std::map<std::string, std::vector<std::string>> by_test;
  for (const auto& [id, c] : split.cases) by_test[c.test_id].push_back(id);
  Rng rng(seed);
  std::set<std::string> test_set;
  for (const auto& [test_id, ids] : by_test) {
    const double want = std::ceil(test_fraction * ids.size() - 1e-9);
    const size_t k = std::min(ids.size(), static_cast<size_t>(want));
    for (size_t i : rng.SampleIndices(ids.size(), k)) test_set.insert(ids[i]);
  }
  split.test_set.assign(test_set.begin(), test_set.end());

  for (auto& [name, ids] : suite_ids) {
    std::set<std::string> train;
    for (const std::string& id : ids) {
      if (!test_set.contains(id)) train.insert(id);
    }
    split.train_sets[name].assign(train.begin(), train.end());
  }
  return split;
}

void SaveSplit(const EvalSplit& split, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError, "cannot create " + dir.string());
  }
  Json j;
  j["seed"] = split.seed;
  j["test_fraction"] = split.test_fraction;
  j["task"] = TaskName(split.task);
  j["test_set"] = split.test_set;
  j["train_sets"] = Json::object();
  for (const auto& [name, ids] : split.train_sets) j["train_sets"][name] = ids;
  j["hyperparameters"] = HyperparametersToJson(split.hyperparameters);
  WriteFileAtomic(dir / kSplitFile, j.dump(2) + "\n");

  std::vector<TestCase> cases;
  for (const auto& [id, c] : split.cases) cases.push_back(c);
  SaveCasesJsonl(cases, dir / "cases.jsonl");
  std::string descs;
  for (const auto& [id, d] : split.descriptions) {
    descs += ToJsonlLine(DescriptionToJson(d));
  }
  WriteFileAtomic(dir / "descriptions.jsonl", descs);
}

EvalSplit LoadSplit(const std::filesystem::path& dir) {
  const Json j = ReadJsonFile(dir / kSplitFile);
  EvalSplit split;
  try {
    split.seed = j.at("seed").get<uint64_t>();
    split.test_fraction = j.at("test_fraction").get<double>();
    split.task = ParseTaskId(j.at("task").get<std::string>());
    split.test_set = j.at("test_set").get<std::vector<std::string>>();
    for (const auto& [name, ids] : j.at("train_sets").items()) {
      split.train_sets[name] = ids.get<std::vector<std::string>>();
    }
    const Json& hp = j.at("hyperparameters");
    split.hyperparameters.learning_rate = hp.at("learning_rate").get<double>();
    split.hyperparameters.batch_size = hp.at("batch_size").get<int>();
    split.hyperparameters.epochs = hp.at("epochs").get<int>();
    split.hyperparameters.max_seq_length = hp.at("max_seq_length").get<int>();
    split.hyperparameters.training_seed =
        hp.at("training_seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError,
                (dir / kSplitFile).string() + ": " + e.what());
  }
  for (TestCase& c : LoadCasesJsonl(dir / "cases.jsonl")) {
    std::string id = c.id;
    split.cases.emplace(std::move(id), std::move(c));
  }
  for (const JsonlLine& line : ReadJsonl(dir / "descriptions.jsonl")) {
    TestDescription d = DescriptionFromJson(
        line.value, "descriptions.jsonl:" + std::to_string(line.line_number));
    std::string id = d.id;
    split.descriptions.emplace(std::move(id), std::move(d));
  }
  return split;
}

void EmitTrainingJob(const EvalSplit& split, const std::string& suite_name,
                     const std::filesystem::path& out_dir) {
  auto train = split.train_sets.find(suite_name);
  if (train == split.train_sets.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "split has no suite named " + suite_name);
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out_dir.string());

  auto lines = [&](const std::vector<std::string>& ids) {
    std::string out;
    for (const std::string& id : ids) {
      out += ToJsonlLine(TrainingRecord(split.cases.at(id)));
    }
    return out;
  };
  WriteFileAtomic(out_dir / "train.jsonl", lines(train->second));
  WriteFileAtomic(out_dir / "test.jsonl", lines(split.test_set));

  Json manifest;
  manifest["suite"] = suite_name;
  manifest["split_seed"] = split.seed;
  manifest["test_fraction"] = split.test_fraction;
  manifest["task"] = TaskName(split.task);
  manifest["label_set"] = TaskLabelSet(split.task);
  manifest["n_train"] = train->second.size();
  manifest["n_test"] = split.test_set.size();
  manifest["hyperparameters"] = HyperparametersToJson(split.hyperparameters);
  WriteFileAtomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

TestSuite DropOrigin(const TestSuite& suite, Origin drop,
                     const std::string& new_name) {
  TestSuite out = suite;
  out.name = new_name;
  out.cases.clear();
  std::unordered_set<std::string> used_templates;
  for (const TestCase& c : suite.cases) {
    if (c.origin == drop) continue;
    if (c.template_id) used_templates.insert(*c.template_id);
    out.cases.push_back(c);
  }
  if (drop == Origin::kExpanded) {
    std::erase_if(out.templates, [&](const Template& t) {
      return t.provenance == TemplateProvenance::kExpanded &&
             !used_templates.contains(t.id);
    });
  }
  return out;
}

Json PredictionToJson(const PredictionRecord& r) {
  Json j;
  j["case_id"] = r.case_id;
  j["predicted_label"] = r.predicted_label;
  j["model_tag"] = r.model_tag;
  return j;
}

std::vector<PredictionRecord> LoadPredictions(const std::filesystem::path& path) {
  std::vector<PredictionRecord> out;
  for (const JsonlLine& line : ReadJsonl(path)) {
    try {
      PredictionRecord r;
      r.case_id = line.value.at("case_id").get<std::string>();
      r.predicted_label = line.value.at("predicted_label").get<std::string>();
      r.model_tag = line.value.value("model_tag", "");
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  path.string() + ":" + std::to_string(line.line_number) +
                      ": " + e.what());
    }
  }
  return out;
}

FailureReport ScorePredictions(const EvalSplit& split,
                               const std::vector<PredictionRecord>& predictions,
                               bool strict) {
  const std::unordered_set<std::string> test_ids(split.test_set.begin(),
                                                 split.test_set.end());
  std::map<std::string, std::string> predicted;
  FailureReport report;
  for (const PredictionRecord& p : predictions) {
    if (!test_ids.contains(p.case_id)) {
      throw Error(ErrorCode::kUnknownCaseId,
                  "prediction for " + p.case_id + " outside the test set");
    }
    if (!IsLabelOf(split.task, p.predicted_label)) {
      throw Error(ErrorCode::kLabelOutOfSet,
                  "label '" + p.predicted_label + "' for " + p.case_id);
    }
    predicted[p.case_id] = p.predicted_label;
    if (report.model_tag.empty()) report.model_tag = p.model_tag;
  }
  for (const std::string& id : split.test_set) {
    const TestCase& c = split.cases.at(id);
    auto it = predicted.find(id);
    if (it == predicted.end()) {
      report.missing_ids.push_back(id);
      continue;
    }
    const bool failed = it->second != c.label;
    auto desc = split.descriptions.find(c.test_id);
    const std::string capability =
        desc == split.descriptions.end() ? "" : desc->second.capability.name;
    for (GroupRate* g : {&report.by_test[c.test_id],
                         &report.by_capability[capability]}) {
      ++g->n;
      if (failed) ++g->failures;
    }
    ++report.n_evaluated;
    if (failed) ++report.n_failures;
  }
  if (strict && !report.missing_ids.empty()) {
    throw Error(ErrorCode::kMissingPredictions,
                std::to_string(report.missing_ids.size()) +
                    " test cases have no prediction, first " +
                    report.missing_ids.front());
  }
  for (auto* groups : {&report.by_test, &report.by_capability}) {
    for (auto& [name, g] : *groups) {
      g.rate = static_cast<double>(g.failures) / static_cast<double>(g.n);
    }
  }
  report.overall_rate =
      report.n_evaluated ? static_cast<double>(report.n_failures) /
                               static_cast<double>(report.n_evaluated)
                         : 0.0;
  return report;
}

Json FailureReportToJson(const FailureReport& r) {
  auto groups = [](const std::map<std::string, GroupRate>& m) {
    Json j = Json::object();
    for (const auto& [name, g] : m) {
      j[name] = {{"n", g.n}, {"failures", g.failures}, {"rate", g.rate}};
    }
    return j;
  };
  Json j;
  j["model_tag"] = r.model_tag;
  j["overall_rate"] = r.overall_rate;
  j["n_failures"] = r.n_failures;
  j["n_evaluated"] = r.n_evaluated;
  j["by_capability"] = groups(r.by_capability);
  j["by_test"] = groups(r.by_test);
  j["missing_ids"] = r.missing_ids;
  return j;
}

std::vector<PredictionRecord> FilePredictionSource::Predict(
    const EvalSplit& split, const std::string& suite_name) {
  const std::filesystem::path path =
      root_ / std::to_string(split.seed) / (suite_name + ".jsonl");
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingPredictions,
                "seed " + std::to_string(split.seed) + ": no predictions for " +
                    suite_name + " at " + path.string());
  }
  return LoadPredictions(path);
}

EndpointPredictionSource::EndpointPredictionSource(
    std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {}

std::vector<PredictionRecord> EndpointPredictionSource::Predict(
    const EvalSplit& split, const std::string& suite_name) {
  const internal::Endpoint ep =
      internal::ParseEndpoint(internal::JoinUrl(base_url_, "/predict"));
  auto client = internal::MakeClient(ep, timeout_);
  const std::string tag = suite_name + "@" + std::to_string(split.seed);
  std::vector<PredictionRecord> out;
  for (const std::string& id : split.test_set) {
    Json body;
    body["texts"] = split.cases.at(id).texts;
    body["suite"] = suite_name;
    body["seed"] = split.seed;
    auto res = client->Post(ep.path, body.dump(), "application/json");
    if (!res || res->status != 200) {
      throw Error(ErrorCode::kEndpointError,
                  "seed " + std::to_string(split.seed) + ": /predict failed (" +
                      (res ? "HTTP " + std::to_string(res->status)
                           : httplib::to_string(res.error())) +
                      ")");
    }
    try {
      out.push_back(
          {id, Json::parse(res->body).at("label").get<std::string>(), tag});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kEndpointError,
                  "seed " + std::to_string(split.seed) +
                      ": bad /predict response: " + e.what());
    }
  }
  return out;
}

std::pair<double, double> MeanStd(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "no values");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

RunMatrixResult RunMatrix(const std::vector<TestSuite>& suites,
                          const std::vector<uint64_t>& seeds,
                          PredictionSource& source, bool strict,
                          double test_fraction) {
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "no seeds given");
  RunMatrixResult result;
  result.seeds = seeds;
  for (const TestSuite& s : suites) result.suites.push_back({s.name, {}, 0, 0, false});

  for (uint64_t seed : seeds) {
    const EvalSplit split = MakeSplit(suites, seed, test_fraction);
    for (SuiteMatrix& m : result.suites) {
      SeedRun run;
      run.seed = seed;
      try {
        run.report = ScorePredictions(split, source.Predict(split, m.suite_name),
                                      strict);
      } catch (const Error& e) {
        if (strict) {
          throw Error(e.code(), "seed " + std::to_string(seed) + ", suite " +
                                    m.suite_name + ": " + e.message());
        }
        run.error = e.what();
        m.partial = true;
      }
      m.runs.push_back(std::move(run));
    }
  }
  for (SuiteMatrix& m : result.suites) {
    std::vector<double> rates;
    for (const SeedRun& r : m.runs) {
      if (r.report) rates.push_back(r.report->overall_rate);
    }
    if (!rates.empty()) std::tie(m.mean, m.std) = MeanStd(rates);
  }
  return result;
}

Json RunMatrixToJson(const RunMatrixResult& result) {
  Json j;
  j["seeds"] = result.seeds;
  j["suites"] = Json::array();
  for (const SuiteMatrix& m : result.suites) {
    Json s;
    s["suite"] = m.suite_name;
    s["mean"] = m.mean;
    s["std"] = m.std;
    s["display"] = FormatMeanStd(m.mean, m.std);
    s["partial"] = m.partial;
    s["runs"] = Json::array();
    for (const SeedRun& r : m.runs) {
      Json run;
      run["seed"] = r.seed;
      if (r.report) {
        run["overall_rate"] = r.report->overall_rate;
        run["n_failures"] = r.report->n_failures;
        run["n_evaluated"] = r.report->n_evaluated;
      } else {
        run["error"] = r.error;
      }
      s["runs"].push_back(std::move(run));
    }
    j["suites"].push_back(std::move(s));
  }
  return j;
}

std::string FormatMeanStd(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f \xC2\xB1 %.1f", mean * 100.0, std * 100.0);
  return buf;
}

}  // namespace testaug
