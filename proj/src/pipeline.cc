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

#include "testaug/pipeline.h"

#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "testaug/annotation_store.h"
#include "testaug/classifier.h"
#include "testaug/error.h"
#include "testaug/expansion.h"
#include "testaug/filtering.h"
#include "testaug/hash.h"
#include "testaug/rng.h"
#include "testaug/text.h"

namespace testaug {

namespace {

namespace fs = std::filesystem;

std::string FileHash(const fs::path& path) { return Sha256Hex(ReadFile(path)); }

std::string SuiteHash(const fs::path& dir) {
  std::string all;
  for (const char* name :
       {"lexicon.json", "descriptions.jsonl", "templates.jsonl", "cases.jsonl"}) {
    all += name;
    all += '\x1f';
    all += fs::exists(dir / name) ? FileHash(dir / name) : "-";
    all += '\x1e';
  }
  return Sha256Hex(all);
}

std::string HashParts(const std::vector<std::string>& parts) {
  return Sha256Hex(Join(parts, "\x1e"));
}

struct Stage {
  std::string name;
  std::string input_hash;
  std::vector<std::string> outputs;  // relative to out_dir
  std::function<std::vector<std::string>()> run;  // returns warnings
};

class Runner {
 public:
  Runner(const PipelineConfig& config, const PipelineOptions& options)
      : config_(config), options_(options), out_(config.out_dir) {
    const fs::path path = out_ / kPipelineManifest;
    if (fs::exists(path)) {
      try {
        manifest_ = Json::parse(ReadFile(path));
      } catch (const nlohmann::json::exception&) {
        manifest_ = Json();
      }
    }
    if (!manifest_.is_object() ||
        manifest_.value("tool_version", "") != kToolVersion) {
      manifest_ = Json::object();
    }
    manifest_["tool_version"] = kToolVersion;
    manifest_["tokenizer_version"] = kTokenizerVersion;
    if (!manifest_.contains("stages")) manifest_["stages"] = Json::object();
  }

  StageOutcome Run(const Stage& stage) {
    StageOutcome outcome;
    outcome.name = stage.name;
    if (!options_.force && UpToDate(stage)) {
      outcome.skipped = true;
      for (const Json& w : manifest_["stages"][stage.name]["warnings"]) {
        outcome.warnings.push_back(w.get<std::string>());
      }
      Log("stage " + stage.name + ": up to date, skipped");
      return outcome;
    }
    Log("stage " + stage.name + ": running");
    try {
      fs::create_directories(out_ / stage.name);
      outcome.warnings = stage.run();
    } catch (const Error& e) {
      throw Error(e.code(), "stage " + stage.name + ": " + e.message());
    } catch (const fs::filesystem_error& e) {
      throw Error(ErrorCode::kIoError, "stage " + stage.name + ": " + e.what());
    }
    Json record;
    record["input_hash"] = stage.input_hash;
    record["outputs"] = Json::object();
    for (const std::string& rel : stage.outputs) {
      record["outputs"][rel] = FileHash(out_ / rel);
    }
    record["warnings"] = outcome.warnings;
    manifest_["stages"][stage.name] = std::move(record);
    WriteFileAtomic(out_ / kPipelineManifest, manifest_.dump(2) + "\n");
    for (const std::string& w : outcome.warnings) Log("  warning: " + w);
    return outcome;
  }

  void SetField(const std::string& key, Json value) {
    manifest_[key] = std::move(value);
  }

 private:
  bool UpToDate(const Stage& stage) const {
    const Json& stages = manifest_["stages"];
    if (!stages.contains(stage.name)) return false;
    const Json& rec = stages[stage.name];
    if (rec.value("input_hash", "") != stage.input_hash) return false;
    for (const std::string& rel : stage.outputs) {
      if (!rec["outputs"].contains(rel) || !fs::exists(out_ / rel) ||
          rec["outputs"][rel].get<std::string>() != FileHash(out_ / rel)) {
        return false;
      }
    }
    return true;
  }

  void Log(const std::string& message) const {
    if (options_.log) options_.log(message);
  }

  const PipelineConfig& config_;
  const PipelineOptions& options_;
  fs::path out_;
  Json manifest_;
};

void WriteJsonl(const std::vector<Json>& records, const fs::path& path) {
  std::string out;
  for (const Json& r : records) out += ToJsonlLine(r);
  WriteFileAtomic(path, out);
}

Json RejectionJson(const TestCase& c, const std::string& reason) {
  Json j;
  j["reason"] = reason;
  j["case"] = CaseToJson(c);
  return j;
}

TestDescription WithThreshold(TestDescription desc,
                              const std::optional<double>& threshold) {
  if (threshold) desc.validity_threshold = *threshold;
  return desc;
}

}  // namespace

PipelineResult RunPipeline(const PipelineConfig& config,
                           const PipelineOptions& options) {
  if (config.seed_suite.empty()) {
    throw Error(ErrorCode::kConfigError, "seed_suite is not set");
  }
  const fs::path out = config.out_dir;
  fs::create_directories(out);
  const TestSuite seed_suite = LoadSuite(config.seed_suite);
  if (seed_suite.task != config.task) {
    throw Error(ErrorCode::kConfigError,
                "config task " + std::string(TaskName(config.task)) +
                    " does not match seed suite task " +
                    std::string(TaskName(seed_suite.task)));
  }
  const std::string seed_hash = SuiteHash(config.seed_suite);
  Json config_json = ConfigToJson(config);
  if (!options.endpoint_identity.empty()) {
    config_json["generation"]["endpoint"] = options.endpoint_identity;
  }

  Runner runner(config, options);
  runner.SetField("task", TaskName(config.task));
  runner.SetField("seed", config.seed);
  runner.SetField("seed_suite_hash", seed_hash);
  PipelineResult result;

  // generate
  {
    Stage s;
    s.name = "generate";
    s.outputs = {"generate/cases.jsonl", "generate/raw.jsonl"};
    s.input_hash = HashParts({seed_hash, config_json["generation"].dump(),
                              std::to_string(config.seed),
                              std::to_string(config.k_demos)});
    s.run = [&]() {
      std::vector<std::string> warnings;
      std::unique_ptr<HttpCompletionClient> http;
      CompletionClient* client = options.client;
      if (client == nullptr) {
        http = std::make_unique<HttpCompletionClient>(config.generation);
        client = http.get();
      }
      std::vector<TestCase> cases;
      std::vector<Json> raw;
      for (const TestDescription& desc : seed_suite.descriptions) {
        size_t n_seeds = 0;
        for (const TestCase& c : seed_suite.cases) {
          if (c.test_id == desc.id && c.origin == Origin::kSeed) ++n_seeds;
        }
        if (n_seeds == 0) {
          warnings.push_back("test " + desc.id + " has no seed cases; skipped");
          continue;
        }
        const size_t k = std::min(config.k_demos, n_seeds);
        if (k < config.k_demos) {
          warnings.push_back("test " + desc.id + " has only " +
                             std::to_string(n_seeds) + " seed cases");
        }
        GenerationResult g =
            GenerateCases(desc, seed_suite, config.generation, *client, k,
                          DeriveSeed(config.seed, "generate:" + desc.id));
        for (TestCase& c : g.cases) cases.push_back(std::move(c));
        for (const RawGeneration& r : g.raw) {
          Json j = RawGenerationToJson(r);
          Json rec;
          rec["test_id"] = desc.id;
          for (auto& [key, value] : j.items()) rec[key] = value;
          raw.push_back(std::move(rec));
        }
      }
      SaveCasesJsonl(cases, out / "generate/cases.jsonl");
      WriteJsonl(raw, out / "generate/raw.jsonl");
      return warnings;
    };
    result.stages.push_back(runner.Run(s));
  }

  // format_filter
  {
    Stage s;
    s.name = "format_filter";
    s.outputs = {"format_filter/kept.jsonl", "format_filter/rejected.jsonl"};
    s.input_hash = HashParts({FileHash(out / "generate/cases.jsonl"),
                              std::string(TaskName(config.task))});
    s.run = [&]() {
      FormatFilterResult r =
          FormatFilter(LoadCasesJsonl(out / "generate/cases.jsonl"), config.task);
      SaveCasesJsonl(r.kept, out / "format_filter/kept.jsonl");
      std::vector<Json> rejected;
      for (const CaseRejection& rej : r.rejected) {
        rejected.push_back(RejectionJson(rej.test_case, rej.reason));
      }
      WriteJsonl(rejected, out / "format_filter/rejected.jsonl");
      return std::vector<std::string>{};
    };
    result.stages.push_back(runner.Run(s));
  }

  // validity
  {
    Stage s;
    s.name = "validity";
    s.outputs = {"validity/cases.jsonl", "validity/rejected.jsonl",
                 "validity/phase_states.json"};
    const bool has_labels = !config.labels.empty() && fs::exists(config.labels);
    s.input_hash = HashParts({FileHash(out / "format_filter/kept.jsonl"),
                              has_labels ? FileHash(config.labels) : "-",
                              config_json["filter"].dump(), seed_hash,
                              std::to_string(config.seed)});
    s.run = [&]() {
      std::vector<std::string> warnings;
      if (!config.labels.empty() && !has_labels) {
        warnings.push_back("labels file " + config.labels.string() +
                           " not found; no annotations used");
      }
      const std::vector<TestCase> cases =
          LoadCasesJsonl(out / "format_filter/kept.jsonl");
      std::unordered_map<std::string, std::string> case_tests;
      for (const TestCase& c : cases) case_tests[c.id] = c.test_id;

      std::map<std::string, std::vector<AnnotationRecord>> by_test;
      if (has_labels) {
        size_t unknown = 0;
        for (AnnotationRecord& r : LoadAnnotations(config.labels)) {
          auto it = case_tests.find(r.case_id);
          if (it == case_tests.end()) {
            ++unknown;
            continue;
          }
          by_test[it->second].push_back(std::move(r));
        }
        if (unknown > 0) {
          warnings.push_back(std::to_string(unknown) +
                             " annotations name cases outside this run");
        }
      }

      std::vector<TestCase> kept;
      std::vector<Json> rejected;
      Json states = Json::array();
      for (const TestDescription& raw_desc : seed_suite.descriptions) {
        std::vector<const TestCase*> test_cases;
        for (const TestCase& c : cases) {
          if (c.test_id == raw_desc.id) test_cases.push_back(&c);
        }
        if (test_cases.empty()) continue;
        const TestDescription desc =
            WithThreshold(raw_desc, config.filter.validity_threshold);
        const std::vector<AnnotationRecord>& records = by_test[desc.id];

        PhaseState state;
        state.test_id = desc.id;
        state.phase1_sample_size = config.filter.phase1_sample_size;
        state.phase2_target = config.filter.phase2_target;
        state.min_annotators = config.filter.min_annotators;
        state = AdvancePhase(state, desc, records, case_tests);
        const std::map<std::string, Adjudication> adjudicated =
            Adjudicate(records);

        std::shared_ptr<const ValidityClassifier> classifier;
        Json state_json = PhaseStateToJson(state);
        if (state.phase == Phase::kClassifierReady &&
            config.task != TaskId::kNli) {
          const std::unordered_set<std::string> phase1(
              state.phase1_case_ids.begin(), state.phase1_case_ids.end());
          std::vector<LabeledCase> train, test;
          for (const TestCase* c : test_cases) {
            auto a = adjudicated.find(c->id);
            if (a == adjudicated.end() ||
                a->second.n_annotators < config.filter.min_annotators) {
              continue;
            }
            (phase1.contains(c->id) ? test : train)
                .push_back({*c, a->second.valid});
          }
          TrainOptions opts;
          opts.backend = config.filter.backend;
          opts.seed = DeriveSeed(config.seed, "filter:" + desc.id);
          opts.decision_threshold = config.filter.decision_threshold;
          opts.trainer_url = config.filter.trainer_url;
          classifier = TrainFilter(train, opts);
          if (!test.empty()) {
            state_json["classifier_metrics"] =
                FilterMetricsToJson(EvaluateFilter(*classifier, test));
          }
        }

        size_t n_kept = 0;
        size_t n_rejected = 0;
        for (const TestCase* c : test_cases) {
          TestCase out_case = *c;
          std::string reason;
          auto a = adjudicated.find(c->id);
          if (a != adjudicated.end() &&
              a->second.n_annotators >= config.filter.min_annotators) {
            out_case.validity =
                a->second.valid ? Validity::kValid : Validity::kInvalid;
            if (!a->second.valid) reason = "annotated_invalid";
          } else if (state.phase == Phase::kPredominantlyValid) {
            // Tests judged predominantly valid keep every case.
          } else if (classifier) {
            if (classifier->Accepts(*c)) {
              out_case.validity = Validity::kValid;
            } else {
              out_case.validity = Validity::kInvalid;
              reason = "classifier";
            }
          } else if (!config.filter.keep_unreviewed) {
            reason = "unreviewed";
          }
          if (reason.empty()) {
            kept.push_back(std::move(out_case));
            ++n_kept;
          } else {
            rejected.push_back(RejectionJson(out_case, reason));
            ++n_rejected;
          }
        }
        state_json["n_kept"] = n_kept;
        state_json["n_rejected"] = n_rejected;
        states.push_back(std::move(state_json));
      }
      SaveCasesJsonl(kept, out / "validity/cases.jsonl");
      WriteJsonl(rejected, out / "validity/rejected.jsonl");
      WriteFileAtomic(out / "validity/phase_states.json", states.dump(2) + "\n");
      return warnings;
    };
    result.stages.push_back(runner.Run(s));
  }

  // expand
  {
    Stage s;
    s.name = "expand";
    s.outputs = {"expand/templates.jsonl", "expand/cases.jsonl"};
    s.input_hash = HashParts({FileHash(out / "validity/cases.jsonl"), seed_hash,
                              config_json["expansion"].dump(),
                              std::to_string(config.seed)});
    s.run = [&]() {
      std::vector<std::string> warnings;
      ExpandSuiteOptions opts;
      opts.per_template_cap = config.expansion.per_template_cap;
      opts.global_cap = config.expansion.global_cap;
      opts.seed = DeriveSeed(config.seed, "expand");
      opts.enable_nli = config.expansion.enable_nli;
      if (config.task == TaskId::kNli && !opts.enable_nli) {
        warnings.push_back("expansion is disabled for nli");
      }
      ExpandSuiteResult r = ExpandSuite(
          seed_suite, LoadCasesJsonl(out / "validity/cases.jsonl"), opts);
      std::vector<Json> templates;
      for (const Template& t : r.templates) templates.push_back(TemplateToJson(t));
      WriteJsonl(templates, out / "expand/templates.jsonl");
      SaveCasesJsonl(r.cases, out / "expand/cases.jsonl");
      return warnings;
    };
    result.stages.push_back(runner.Run(s));
  }

  // merge
  const std::string augmented_name = config.augmented_name.empty()
                                         ? seed_suite.name + "-testaug"
                                         : config.augmented_name;
  result.augmented_dir = out / "augmented";
  {
    Stage s;
    s.name = "merge";
    s.outputs = {"augmented/lexicon.json", "augmented/descriptions.jsonl",
                 "augmented/templates.jsonl", "augmented/cases.jsonl",
                 "merge/saving.json"};
    s.input_hash = HashParts({seed_hash, FileHash(out / "validity/cases.jsonl"),
                              FileHash(out / "expand/templates.jsonl"),
                              FileHash(out / "expand/cases.jsonl"),
                              augmented_name});
    s.run = [&]() {
      TestSuite augmented = seed_suite;
      augmented.name = augmented_name;
      for (TestCase& c : LoadCasesJsonl(out / "validity/cases.jsonl")) {
        augmented.cases.push_back(std::move(c));
      }
      for (const JsonlLine& line : ReadJsonl(out / "expand/templates.jsonl")) {
        augmented.templates.push_back(TemplateFromJson(
            line.value, "expand/templates.jsonl:" +
                            std::to_string(line.line_number)));
      }
      for (TestCase& c : LoadCasesJsonl(out / "expand/cases.jsonl")) {
        augmented.cases.push_back(std::move(c));
      }
      ValidateSuite(augmented);
      SaveSuite(augmented, result.augmented_dir);
      WriteFileAtomic(
          out / "merge/saving.json",
          SavingReportToJson(MakeSavingReport(seed_suite, augmented)).dump(2) +
              "\n");
      return std::vector<std::string>{};
    };
    result.stages.push_back(runner.Run(s));
  }

  result.augmented = LoadSuite(result.augmented_dir);
  result.saving = MakeSavingReport(seed_suite, result.augmented);
  return result;
}

}  // namespace testaug
