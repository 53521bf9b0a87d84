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

#ifndef TESTAUG_PIPELINE_H_
#define TESTAUG_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "testaug/config.h"
#include "testaug/generation.h"
#include "testaug/metrics.h"
#include "testaug/suite.h"

namespace testaug {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kPipelineManifest = "pipeline_manifest.json";

struct PipelineOptions {
  // Completion backend; an HttpCompletionClient over config.generation when
  // null.
  CompletionClient* client = nullptr;
  // Rerun every stage even when the manifest says it is up to date.
  bool force = false;
  // Stands in for generation.endpoint in stage hashes, e.g. a fixture digest
  // when the endpoint is an ephemeral local mock.
  std::string endpoint_identity;
  std::function<void(const std::string&)> log;
};

struct StageOutcome {
  std::string name;
  bool skipped = false;
  std::vector<std::string> warnings;
};

struct PipelineResult {
  std::vector<StageOutcome> stages;
  std::filesystem::path augmented_dir;
  TestSuite augmented;
  SavingReport saving;
};

// Runs generate -> format_filter -> validity -> expand -> merge under
// config.out_dir, one subdirectory per stage. A stage is skipped when the
// manifest records the same input hash and its outputs are unchanged on
// disk. Output bytes depend only on the config, the seed suite, the labels
// file and the completion responses.
//
// Errors from a stage keep their code and gain a "stage <name>: " prefix.
PipelineResult RunPipeline(const PipelineConfig& config,
                           const PipelineOptions& options = {});

}  // namespace testaug

#endif  // TESTAUG_PIPELINE_H_
