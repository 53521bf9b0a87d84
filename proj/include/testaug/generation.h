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

#ifndef TESTAUG_GENERATION_H_
#define TESTAUG_GENERATION_H_

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "testaug/jsonl.h"
#include "testaug/suite.h"

namespace testaug {

inline constexpr std::string_view kDefaultPairSeparator = " ||| ";
inline constexpr size_t kDefaultDemonstrations = 3;
inline constexpr const char* kApiKeyEnv = "TESTAUG_API_KEY";

struct PromptSpec {
  std::string test_id;
  std::string instruction;
  std::vector<std::vector<std::string>> demonstrations;
  std::vector<std::string> demonstration_ids;
  std::string pair_separator{kDefaultPairSeparator};
  uint64_t rng_seed = 0;
};

struct Prompt {
  PromptSpec spec;
  std::string text;
};

// Description line, then `k` seed cases drawn without replacement as
// "- {...}" bullets, then a bare "- {" cue.
//
// Errors: kNotEnoughSeeds when fewer than k seeds are given;
// kInvalidArgument when a seed belongs to another test or is not seed-origin.
Prompt BuildPrompt(const TestDescription& desc,
                   const std::vector<TestCase>& seeds, size_t k,
                   uint64_t seed,
                   std::string_view pair_separator = kDefaultPairSeparator);

struct Rejection {
  std::string line;
  std::string reason;

  bool operator==(const Rejection&) const = default;
};

struct ParsedCompletion {
  std::vector<std::vector<std::string>> candidates;
  std::vector<Rejection> rejected;
};

// Every non-empty line yields exactly one candidate or one rejection.
// Rejection reasons: not_bullet, missing_braces, unbalanced_braces,
// multiple_spans, empty_text, wrong_field_count.
ParsedCompletion ParseCompletion(std::string_view completion, int arity,
                                 std::string_view pair_separator =
                                     kDefaultPairSeparator);

// Completions continue after the prompt's "- {" cue; this restores the
// bullet opener on the first line when the model did not repeat it.
std::string RestoreCue(std::string_view completion);

struct GenerationConfig {
  std::string endpoint_url = "http://127.0.0.1:8089/v1/completions";
  std::string model_name = "davinci-instruct-beta";
  double temperature = 0.9;
  int max_tokens = 256;
  int n_completions = 5;
  std::chrono::milliseconds request_timeout{30000};
  int max_retries = 3;
  int max_parallel = 4;
  std::chrono::milliseconds backoff_initial{500};
  std::string pair_separator{kDefaultPairSeparator};

  // Throws kConfigError.
  void Validate() const;
};

struct CompletionRequest {
  std::string model;
  std::string prompt;
  double temperature = 0.9;
  int max_tokens = 256;
  int n = 1;
};

Json CompletionRequestToJson(const CompletionRequest& request);

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  // Returns the text of every choice. Must be safe to call concurrently.
  virtual std::vector<std::string> Complete(const CompletionRequest& request) = 0;
};

// OpenAI-completions-compatible client. Retries 429, 5xx and transport
// failures with exponential backoff; other statuses fail immediately with
// kEndpointError. The bearer token comes from TESTAUG_API_KEY.
class HttpCompletionClient : public CompletionClient {
 public:
  explicit HttpCompletionClient(GenerationConfig config);
  std::vector<std::string> Complete(const CompletionRequest& request) override;

 private:
  GenerationConfig config_;
};

struct RawGeneration {
  size_t request_index = 0;
  std::string prompt_text;
  std::vector<std::string> demonstration_ids;
  std::string completion_text;
  std::vector<std::vector<std::string>> candidates;
  std::vector<Rejection> rejected_lines;
};

Json RawGenerationToJson(const RawGeneration& raw);

struct GenerationResult {
  std::vector<TestCase> cases;
  std::vector<RawGeneration> raw;
};

// Issues config.n_completions requests (at most config.max_parallel in
// flight), each with a prompt resampled under a seed derived from `seed` and
// the request index. Candidates are deduplicated after normalization and
// against the demonstrations and every case already in `suite`. Output order
// follows request index then line order, so it does not depend on
// scheduling.
GenerationResult GenerateCases(const TestDescription& desc,
                               const TestSuite& suite,
                               const GenerationConfig& config,
                               CompletionClient& client, size_t k,
                               uint64_t seed);

}  // namespace testaug

#endif  // TESTAUG_GENERATION_H_
