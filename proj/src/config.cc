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

#include "testaug/config.h"

#include <cstdlib>

#include "testaug/error.h"
#include "testaug/text.h"

namespace testaug {

namespace {

std::string EnvName(const std::string& section, const std::string& key) {
  std::string name = "TESTAUG_";
  if (!section.empty()) name += section + "_";
  name += key;
  for (char& c : name) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

// Parses an environment string into the JSON type of `like`.
Json ParseEnvValue(const std::string& name, const std::string& text,
                   const Json& like) {
  try {
    if (like.is_string()) return text;
    if (like.is_boolean()) {
      const std::string v = AsciiLower(Trim(text));
      if (v == "1" || v == "true" || v == "yes") return true;
      if (v == "0" || v == "false" || v == "no") return false;
      throw Error(ErrorCode::kConfigError, name + ": expected a boolean");
    }
    if (like.is_number_unsigned() || like.is_number_integer()) {
      size_t used = 0;
      const long long v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    }
    if (like.is_number() || like.is_null()) {
      size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    }
    if (like.is_array()) {
      Json out = Json::array();
      size_t start = 0;
      while (start <= text.size()) {
        size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string item(Trim(std::string_view(text).substr(start, comma - start)));
        if (!item.empty()) {
          out.push_back(like.empty() ? Json(item)
                                     : ParseEnvValue(name, item, like.front()));
        }
        start = comma + 1;
      }
      return out;
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kConfigError, name + ": cannot parse '" + text + "'");
  }
  throw Error(ErrorCode::kConfigError, name + ": not overridable");
}

void Merge(Json& base, const Json& overlay, const std::string& where) {
  if (!overlay.is_object()) {
    throw Error(ErrorCode::kConfigError, where + ": expected an object");
  }
  for (const auto& [key, value] : overlay.items()) {
    if (!base.contains(key)) {
      throw Error(ErrorCode::kConfigError,
                  "unknown setting " + (where.empty() ? key : where + "." + key));
    }
    Json& slot = base[key];
    if (slot.is_object()) {
      Merge(slot, value, where.empty() ? key : where + "." + key);
    } else {
      slot = value;
    }
  }
}

template <typename T>
T Get(const Json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kConfigError,
                "setting " + where + key + " has the wrong type");
  }
}

size_t GetCount(const Json& j, const char* key, const std::string& where) {
  const long long v = Get<long long>(j, key, where);
  if (v < 0) {
    throw Error(ErrorCode::kConfigError,
                "setting " + where + key + " must be >= 0");
  }
  return static_cast<size_t>(v);
}

std::filesystem::path ResolvePath(const std::string& p,
                                  const std::filesystem::path& base) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

}  // namespace

std::optional<std::string> ProcessEnv(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

Json DefaultConfigJson() {
  const PipelineConfig d;
  Json j;
  j["task"] = TaskName(d.task);
  j["seed"] = d.seed;
  j["k_demos"] = d.k_demos;
  j["seed_suite"] = "";
  j["out_dir"] = d.out_dir.string();
  j["labels"] = "";
  j["augmented_name"] = "";
  const GenerationConfig& g = d.generation;
  j["generation"] = {{"endpoint", g.endpoint_url},
                     {"model", g.model_name},
                     {"temperature", g.temperature},
                     {"max_tokens", g.max_tokens},
                     {"n_completions", g.n_completions},
                     {"timeout_ms", g.request_timeout.count()},
                     {"max_retries", g.max_retries},
                     {"max_parallel", g.max_parallel},
                     {"backoff_ms", g.backoff_initial.count()},
                     {"pair_separator", g.pair_separator}};
  const FilterSettings& f = d.filter;
  j["filter"] = {{"backend", BackendName(f.backend)},
                 {"validity_threshold", nullptr},
                 {"phase1_sample_size", f.phase1_sample_size},
                 {"phase2_target", f.phase2_target},
                 {"min_annotators", f.min_annotators},
                 {"decision_threshold", f.decision_threshold},
                 {"keep_unreviewed", f.keep_unreviewed},
                 {"trainer_url", f.trainer_url},
                 {"guideline_version", f.guideline_version}};
  j["expansion"] = {{"per_template_cap", d.expansion.per_template_cap},
                    {"global_cap", d.expansion.global_cap},
                    {"enable_nli", d.expansion.enable_nli}};
  j["metrics"] = {{"per_test_cap", d.metrics.per_test_cap},
                  {"seed", d.metrics.seed}};
  j["harness"] = {{"seeds", d.harness.seeds},
                  {"test_fraction", d.harness.test_fraction}};
  return j;
}

PipelineConfig ConfigFromJson(const Json& file, const EnvLookup& env,
                              const std::filesystem::path& base_dir) {
  Json j = DefaultConfigJson();
  const Json defaults = j;
  if (!file.is_null()) Merge(j, file, "");

  for (auto& [key, value] : j.items()) {
    if (value.is_object()) {
      for (auto& [sub, sub_value] : value.items()) {
        const std::string name = EnvName(key, sub);
        if (auto v = env(name)) {
          sub_value = ParseEnvValue(name, *v, defaults[key][sub]);
        }
      }
    } else {
      const std::string name = EnvName("", key);
      if (auto v = env(name)) value = ParseEnvValue(name, *v, defaults[key]);
    }
  }

  PipelineConfig c;
  c.task = ParseTaskId(Get<std::string>(j, "task", ""));
  c.seed = Get<uint64_t>(j, "seed", "");
  c.k_demos = GetCount(j, "k_demos", "");
  if (c.k_demos < 1) throw Error(ErrorCode::kConfigError, "k_demos must be >= 1");
  c.seed_suite = ResolvePath(Get<std::string>(j, "seed_suite", ""), base_dir);
  c.out_dir = ResolvePath(Get<std::string>(j, "out_dir", ""), base_dir);
  c.labels = ResolvePath(Get<std::string>(j, "labels", ""), base_dir);
  c.augmented_name = Get<std::string>(j, "augmented_name", "");

  const Json& g = j["generation"];
  const std::string gw = "generation.";
  c.generation.endpoint_url = Get<std::string>(g, "endpoint", gw);
  c.generation.model_name = Get<std::string>(g, "model", gw);
  c.generation.temperature = Get<double>(g, "temperature", gw);
  c.generation.max_tokens = Get<int>(g, "max_tokens", gw);
  c.generation.n_completions = Get<int>(g, "n_completions", gw);
  c.generation.request_timeout =
      std::chrono::milliseconds(Get<long long>(g, "timeout_ms", gw));
  c.generation.max_retries = Get<int>(g, "max_retries", gw);
  c.generation.max_parallel = Get<int>(g, "max_parallel", gw);
  c.generation.backoff_initial =
      std::chrono::milliseconds(Get<long long>(g, "backoff_ms", gw));
  c.generation.pair_separator = Get<std::string>(g, "pair_separator", gw);
  c.generation.Validate();

  const Json& f = j["filter"];
  const std::string fw = "filter.";
  try {
    c.filter.backend = ParseBackend(Get<std::string>(f, "backend", fw));
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  if (!f["validity_threshold"].is_null()) {
    c.filter.validity_threshold = Get<double>(f, "validity_threshold", fw);
    if (*c.filter.validity_threshold < 0 || *c.filter.validity_threshold > 1) {
      throw Error(ErrorCode::kConfigError,
                  "filter.validity_threshold must be in [0, 1]");
    }
  }
  c.filter.phase1_sample_size = GetCount(f, "phase1_sample_size", fw);
  c.filter.phase2_target = GetCount(f, "phase2_target", fw);
  c.filter.min_annotators = GetCount(f, "min_annotators", fw);
  c.filter.decision_threshold = Get<double>(f, "decision_threshold", fw);
  c.filter.keep_unreviewed = Get<bool>(f, "keep_unreviewed", fw);
  c.filter.trainer_url = Get<std::string>(f, "trainer_url", fw);
  c.filter.guideline_version = Get<std::string>(f, "guideline_version", fw);
  if (c.filter.phase1_sample_size < 1 || c.filter.phase2_target < 1 ||
      c.filter.min_annotators < 1) {
    throw Error(ErrorCode::kConfigError,
                "filter sample size, target and min_annotators must be >= 1");
  }
  if (c.filter.decision_threshold < 0 || c.filter.decision_threshold > 1) {
    throw Error(ErrorCode::kConfigError,
                "filter.decision_threshold must be in [0, 1]");
  }

  const Json& e = j["expansion"];
  c.expansion.per_template_cap = GetCount(e, "per_template_cap", "expansion.");
  c.expansion.global_cap = GetCount(e, "global_cap", "expansion.");
  c.expansion.enable_nli = Get<bool>(e, "enable_nli", "expansion.");
  if (c.expansion.per_template_cap < 1 || c.expansion.global_cap < 1) {
    throw Error(ErrorCode::kConfigError, "expansion caps must be >= 1");
  }

  c.metrics.per_test_cap = GetCount(j["metrics"], "per_test_cap", "metrics.");
  c.metrics.seed = Get<uint64_t>(j["metrics"], "seed", "metrics.");

  c.harness.seeds =
      Get<std::vector<uint64_t>>(j["harness"], "seeds", "harness.");
  c.harness.test_fraction =
      Get<double>(j["harness"], "test_fraction", "harness.");
  if (c.harness.seeds.empty()) {
    throw Error(ErrorCode::kConfigError, "harness.seeds must not be empty");
  }
  if (!(c.harness.test_fraction > 0 && c.harness.test_fraction <= 1)) {
    throw Error(ErrorCode::kConfigError,
                "harness.test_fraction must be in (0, 1]");
  }
  return c;
}

PipelineConfig LoadConfig(const std::filesystem::path& path,
                          const EnvLookup& env) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::kConfigError, "no config file at " + path.string());
  }
  Json file;
  try {
    file = Json::parse(ReadFile(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kConfigError, path.string() + ": " + e.what());
  }
  return ConfigFromJson(file, env, path.parent_path());
}

Json ConfigToJson(const PipelineConfig& c) {
  Json j = DefaultConfigJson();
  j["task"] = TaskName(c.task);
  j["seed"] = c.seed;
  j["k_demos"] = c.k_demos;
  j["seed_suite"] = c.seed_suite.string();
  j["out_dir"] = c.out_dir.string();
  j["labels"] = c.labels.string();
  j["augmented_name"] = c.augmented_name;
  Json& g = j["generation"];
  g["endpoint"] = c.generation.endpoint_url;
  g["model"] = c.generation.model_name;
  g["temperature"] = c.generation.temperature;
  g["max_tokens"] = c.generation.max_tokens;
  g["n_completions"] = c.generation.n_completions;
  g["timeout_ms"] = c.generation.request_timeout.count();
  g["max_retries"] = c.generation.max_retries;
  g["max_parallel"] = c.generation.max_parallel;
  g["backoff_ms"] = c.generation.backoff_initial.count();
  g["pair_separator"] = c.generation.pair_separator;
  Json& f = j["filter"];
  f["backend"] = BackendName(c.filter.backend);
  f["validity_threshold"] = c.filter.validity_threshold
                                ? Json(*c.filter.validity_threshold)
                                : Json(nullptr);
  f["phase1_sample_size"] = c.filter.phase1_sample_size;
  f["phase2_target"] = c.filter.phase2_target;
  f["min_annotators"] = c.filter.min_annotators;
  f["decision_threshold"] = c.filter.decision_threshold;
  f["keep_unreviewed"] = c.filter.keep_unreviewed;
  f["trainer_url"] = c.filter.trainer_url;
  f["guideline_version"] = c.filter.guideline_version;
  j["expansion"] = {{"per_template_cap", c.expansion.per_template_cap},
                    {"global_cap", c.expansion.global_cap},
                    {"enable_nli", c.expansion.enable_nli}};
  j["metrics"] = {{"per_test_cap", c.metrics.per_test_cap},
                  {"seed", c.metrics.seed}};
  j["harness"] = {{"seeds", c.harness.seeds},
                  {"test_fraction", c.harness.test_fraction}};
  return j;
}

}  // namespace testaug
