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

#include "testaug/generation.h"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "testaug/error.h"
#include "testaug/rng.h"
#include "testaug/text.h"

namespace testaug {

Prompt BuildPrompt(const TestDescription& desc,
                   const std::vector<TestCase>& seeds, size_t k,
                   uint64_t seed, std::string_view pair_separator) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (seeds.size() < k) {
    throw Error(ErrorCode::kNotEnoughSeeds,
                "test " + desc.id + " has " + std::to_string(seeds.size()) +
                    " seed cases, " + std::to_string(k) + " requested");
  }
  for (const TestCase& s : seeds) {
    if (s.test_id != desc.id || s.origin != Origin::kSeed) {
      throw Error(ErrorCode::kInvalidArgument,
                  "demonstration " + s.id + " is not a seed of " + desc.id);
    }
  }

  Prompt prompt;
  prompt.spec.test_id = desc.id;
  prompt.spec.instruction = desc.description;
  prompt.spec.pair_separator = std::string(pair_separator);
  prompt.spec.rng_seed = seed;

  Rng rng(seed);
  prompt.text = desc.description;
  prompt.text += '\n';
  for (size_t index : rng.SampleIndices(seeds.size(), k)) {
    const TestCase& demo = seeds[index];
    prompt.spec.demonstrations.push_back(demo.texts);
    prompt.spec.demonstration_ids.push_back(demo.id);
    prompt.text += "- {";
    prompt.text += Join(demo.texts, pair_separator);
    prompt.text += "}\n";
  }
  prompt.text += "- {";
  return prompt;
}

namespace {

// Returns a rejection reason, or empty on success with `content` set to the
// text between the braces.
std::string ExtractBraced(std::string_view line, std::string& content) {
  if (line.empty() || line.front() != '-') return "not_bullet";
  size_t open = line.find('{');
  if (open == std::string_view::npos) {
    return line.find('}') == std::string_view::npos ? "missing_braces"
                                                    : "unbalanced_braces";
  }
  if (!Trim(line.substr(1, open - 1)).empty()) return "missing_braces";
  int depth = 0;
  size_t close = std::string_view::npos;
  for (size_t i = open; i < line.size(); ++i) {
    if (line[i] == '{') {
      ++depth;
    } else if (line[i] == '}') {
      if (--depth == 0) {
        close = i;
        break;
      }
    }
  }
  if (close == std::string_view::npos) return "unbalanced_braces";
  std::string_view rest = line.substr(close + 1);
  if (rest.find('{') != std::string_view::npos) return "multiple_spans";
  if (rest.find('}') != std::string_view::npos) return "unbalanced_braces";
  content = std::string(line.substr(open + 1, close - open - 1));
  return "";
}

std::vector<std::string> SplitOn(std::string_view s, std::string_view sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t hit = sep.empty() ? std::string_view::npos : s.find(sep, start);
    if (hit == std::string_view::npos) {
      parts.emplace_back(s.substr(start));
      return parts;
    }
    parts.emplace_back(s.substr(start, hit - start));
    start = hit + sep.size();
  }
}

}  // namespace

ParsedCompletion ParseCompletion(std::string_view completion, int arity,
                                 std::string_view pair_separator) {
  if (arity != 1 && arity != 2) {
    throw Error(ErrorCode::kInvalidArgument, "arity must be 1 or 2");
  }
  // Separator matching tolerates the model trimming the padding spaces.
  const std::string_view core_separator = Trim(pair_separator);
  ParsedCompletion parsed;
  for (const std::string& raw_line : SplitLines(completion)) {
    std::string_view line = Trim(raw_line);
    if (line.empty()) continue;
    std::string content;
    std::string reason = ExtractBraced(line, content);
    if (!reason.empty()) {
      parsed.rejected.push_back({std::string(line), reason});
      continue;
    }
    std::vector<std::string> fields =
        arity == 2 ? SplitOn(content, core_separator)
                   : std::vector<std::string>{content};
    if (static_cast<int>(fields.size()) != arity) {
      parsed.rejected.push_back({std::string(line), "wrong_field_count"});
      continue;
    }
    bool empty = false;
    for (std::string& f : fields) {
      f = std::string(Trim(f));
      empty = empty || f.empty();
    }
    if (empty) {
      parsed.rejected.push_back({std::string(line), "empty_text"});
      continue;
    }
    parsed.candidates.push_back(std::move(fields));
  }
  return parsed;
}

std::string RestoreCue(std::string_view completion) {
  std::string_view trimmed = Trim(completion);
  if (trimmed.empty() || trimmed.front() == '-') return std::string(completion);
  return "- {" + std::string(completion);
}

void GenerationConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kConfigError, what);
  };
  if (endpoint_url.empty()) fail("endpoint_url is empty");
  if (!(temperature >= 0.0)) fail("temperature must be >= 0");
  if (max_tokens <= 0) fail("max_tokens must be > 0");
  if (n_completions <= 0) fail("n_completions must be > 0");
  if (max_retries < 0) fail("max_retries must be >= 0");
  if (max_parallel < 1) fail("max_parallel must be >= 1");
  if (request_timeout.count() <= 0) fail("request_timeout must be > 0");
  if (Trim(pair_separator).empty()) fail("pair_separator must not be blank");
}

Json CompletionRequestToJson(const CompletionRequest& request) {
  Json j;
  j["model"] = request.model;
  j["prompt"] = request.prompt;
  j["temperature"] = request.temperature;
  j["max_tokens"] = request.max_tokens;
  j["n"] = request.n;
  return j;
}

Json RawGenerationToJson(const RawGeneration& raw) {
  Json j;
  j["request_index"] = raw.request_index;
  j["prompt"] = raw.prompt_text;
  j["demonstration_ids"] = raw.demonstration_ids;
  j["completion"] = raw.completion_text;
  j["candidates"] = raw.candidates;
  Json rejected = Json::array();
  for (const Rejection& r : raw.rejected_lines) {
    rejected.push_back({{"line", r.line}, {"reason", r.reason}});
  }
  j["rejected"] = std::move(rejected);
  return j;
}

GenerationResult GenerateCases(const TestDescription& desc,
                               const TestSuite& suite,
                               const GenerationConfig& config,
                               CompletionClient& client, size_t k,
                               uint64_t seed) {
  config.Validate();
  const TaskId task = desc.capability.task;
  const int arity = GetTask(task).arity;

  std::vector<TestCase> seeds;
  for (const TestCase& c : suite.cases) {
    if (c.test_id == desc.id && c.origin == Origin::kSeed) seeds.push_back(c);
  }

  const size_t n_requests = static_cast<size_t>(config.n_completions);
  std::vector<Prompt> prompts;
  prompts.reserve(n_requests);
  for (size_t i = 0; i < n_requests; ++i) {
    prompts.push_back(BuildPrompt(desc, seeds, k, DeriveSeed(seed, i),
                                  config.pair_separator));
  }

  std::vector<RawGeneration> raw(n_requests);
  std::atomic<size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= n_requests) return;
      {
        std::lock_guard<std::mutex> lock(error_mu);
        if (first_error) return;
      }
      try {
        CompletionRequest request{config.model_name, prompts[i].text,
                                  config.temperature, config.max_tokens, 1};
        std::vector<std::string> choices = client.Complete(request);
        RawGeneration& r = raw[i];
        r.request_index = i;
        r.prompt_text = prompts[i].text;
        r.demonstration_ids = prompts[i].spec.demonstration_ids;
        for (size_t c = 0; c < choices.size(); ++c) {
          if (c) r.completion_text += '\n';
          r.completion_text += RestoreCue(choices[c]);
        }
        ParsedCompletion parsed =
            ParseCompletion(r.completion_text, arity, config.pair_separator);
        r.candidates = std::move(parsed.candidates);
        r.rejected_lines = std::move(parsed.rejected);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const size_t n_workers =
      std::min(n_requests, static_cast<size_t>(config.max_parallel));
  {
    std::vector<std::jthread> pool;
    for (size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::unordered_set<std::string> seen;
  for (const TestCase& c : suite.cases) seen.insert(NormalizeTextsForDedup(c.texts));

  GenerationResult result;
  for (const RawGeneration& r : raw) {
    std::unordered_set<std::string> demo_keys;
    for (const std::string& id : r.demonstration_ids) {
      for (const TestCase& s : seeds) {
        if (s.id == id) demo_keys.insert(NormalizeTextsForDedup(s.texts));
      }
    }
    for (const auto& texts : r.candidates) {
      std::string key = NormalizeTextsForDedup(texts);
      if (demo_keys.contains(key) || !seen.insert(key).second) continue;
      TestCase c;
      c.test_id = desc.id;
      c.texts = texts;
      c.label = desc.expected_label;
      c.origin = Origin::kGenerated;
      c.validity = Validity::kUnknown;
      c.meta["demonstration_ids"] = r.demonstration_ids;
      c.meta["request_index"] = r.request_index;
      c.id = CaseId(task, c);
      result.cases.push_back(std::move(c));
    }
  }
  result.raw = std::move(raw);
  return result;
}

}  // namespace testaug
