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

#ifndef TESTAUG_CONFIG_H_
#define TESTAUG_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "testaug/classifier.h"
#include "testaug/generation.h"
#include "testaug/jsonl.h"
#include "testaug/suite.h"

namespace testaug {

struct FilterSettings {
  ClassifierBackend backend = ClassifierBackend::kNgramLogReg;
  // Overrides the per-test threshold when set.
  std::optional<double> validity_threshold;
  size_t phase1_sample_size = 40;
  size_t phase2_target = 100;
  size_t min_annotators = 1;
  double decision_threshold = 0.5;
  // Keep cases nobody has reviewed yet for tests still in phase 1/2.
  bool keep_unreviewed = true;
  std::string trainer_url;
  std::string guideline_version = "v1";
};

struct ExpansionSettings {
  size_t per_template_cap = 10;
  size_t global_cap = 100000;
  bool enable_nli = false;
};

struct MetricSettings {
  size_t per_test_cap = 100;
  uint64_t seed = 42;
};

struct HarnessSettings {
  std::vector<uint64_t> seeds = {11, 14, 25, 42, 74};
  double test_fraction = 0.5;
};

struct PipelineConfig {
  TaskId task = TaskId::kSentiment;
  uint64_t seed = 42;
  size_t k_demos = 3;
  GenerationConfig generation;
  FilterSettings filter;
  ExpansionSettings expansion;
  MetricSettings metrics;
  HarnessSettings harness;
  // Paths. seed_suite has no default.
  std::filesystem::path seed_suite;
  std::filesystem::path out_dir = "testaug_out";
  std::filesystem::path labels;  // optional labels.jsonl
  std::string augmented_name;    // defaults to "<seed suite name>-testaug"
};

// Every setting with its default, in file layout. Relative paths in a config
// file resolve against the file's directory.
Json DefaultConfigJson();

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Reads the process environment.
std::optional<std::string> ProcessEnv(const std::string& name);

// Layers defaults <- `file` <- environment. A setting "section.key" is
// overridden by TESTAUG_SECTION_KEY and a top-level "key" by TESTAUG_KEY
// (lists are comma separated). Unknown keys, bad types and out-of-range
// values raise kConfigError.
PipelineConfig ConfigFromJson(const Json& file, const EnvLookup& env,
                              const std::filesystem::path& base_dir = {});

PipelineConfig LoadConfig(const std::filesystem::path& path,
                          const EnvLookup& env = ProcessEnv);

// Effective configuration with paths as given; holds no secrets.
Json ConfigToJson(const PipelineConfig& config);

}  // namespace testaug

#endif  // TESTAUG_CONFIG_H_
