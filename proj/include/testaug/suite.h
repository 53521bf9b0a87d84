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

#ifndef TESTAUG_SUITE_H_
#define TESTAUG_SUITE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "testaug/jsonl.h"

namespace testaug {

enum class TaskId { kSentiment, kParaphrase, kNli };

struct Task {
  TaskId id;
  std::vector<std::string> label_set;
  int arity;
};

const Task& GetTask(TaskId id);
std::string_view TaskName(TaskId id);
// Throws kConfigError for unknown names.
TaskId ParseTaskId(std::string_view name);
bool IsLabelOf(TaskId task, std::string_view label);

// Per-task default share of valid phase-1 cases needed to call a test
// predominantly valid.
double DefaultValidityThreshold(TaskId task);

struct Capability {
  std::string name;
  TaskId task = TaskId::kSentiment;

  bool operator==(const Capability&) const = default;
};

// A requirement under a capability with a fixed expected label.
struct TestDescription {
  std::string id;
  Capability capability;
  std::string description;
  std::string expected_label;
  double validity_threshold = 0.9;
  Json meta = Json::object();

  bool operator==(const TestDescription&) const = default;
};

enum class PosHint { kNoun, kVerb, kAdj };
std::string_view PosHintName(PosHint pos);
std::optional<PosHint> ParsePosHint(std::string_view name);

struct LexiconEntry {
  std::string slot_name;
  std::vector<std::string> words;
  // Content-word slot (noun, verb or adjective). Only these are re-slotted
  // during expansion.
  bool content = false;
  std::optional<PosHint> pos_hint;

  bool operator==(const LexiconEntry&) const = default;
};

// Slot word lists in declaration order with name lookup.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::vector<LexiconEntry> entries);

  const LexiconEntry* Find(std::string_view slot) const;
  const std::vector<LexiconEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // Appends or replaces an entry by slot name.
  void Upsert(LexiconEntry entry);

  bool operator==(const Lexicon& other) const {
    return entries_ == other.entries_;
  }

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, size_t> index_;
};

enum class TemplateProvenance { kManual, kExpanded };

struct Template {
  std::string id;
  std::string test_id;
  std::vector<std::string> patterns;
  TemplateProvenance provenance = TemplateProvenance::kManual;
  Json meta = Json::object();

  bool operator==(const Template&) const = default;
};

enum class Origin { kSeed, kGenerated, kExpanded };
enum class Validity { kUnknown, kValid, kInvalid };

std::string_view OriginName(Origin origin);
std::string_view ValidityName(Validity validity);
std::string_view ProvenanceName(TemplateProvenance provenance);

// Where a slot fill landed in a rendered text. `length` covers the article
// and the space after it for "[a:name]" markers.
struct FillSpan {
  size_t text_index = 0;
  size_t begin = 0;
  size_t length = 0;
  std::string slot;
  bool article = false;

  bool operator==(const FillSpan&) const = default;
};

using Fills = std::map<std::string, std::string>;

struct TestCase {
  std::string id;
  std::string test_id;
  std::vector<std::string> texts;
  std::string label;
  Origin origin = Origin::kSeed;
  std::optional<std::string> template_id;
  std::optional<Fills> fills;
  Validity validity = Validity::kUnknown;
  // Recorded at render time; serialized inside meta as "fill_spans".
  std::vector<FillSpan> fill_spans;
  // Unknown keys found on load, plus free-form provenance such as the
  // demonstrations a generated case was prompted with.
  Json meta = Json::object();

  bool operator==(const TestCase&) const = default;
};

// Content hash over (task, test_id, texts, label).
std::string CaseId(TaskId task, std::string_view test_id,
                   const std::vector<std::string>& texts,
                   std::string_view label);
std::string CaseId(TaskId task, const TestCase& test_case);

struct TestSuite {
  std::string name;
  TaskId task = TaskId::kSentiment;
  std::vector<TestCase> cases;
  std::vector<TestDescription> descriptions;
  std::vector<Template> templates;
  Lexicon lexicon;

  const TestDescription* FindDescription(std::string_view id) const;
  const Template* FindTemplate(std::string_view id) const;

  bool operator==(const TestSuite&) const = default;
};

// Throws kInvariantViolation naming the failed invariant and record id.
void ValidateSuite(const TestSuite& suite);

Json CaseToJson(const TestCase& test_case);
// Shape errors surface as kInvariantViolation; `where` prefixes messages.
TestCase CaseFromJson(const Json& json, const std::string& where);
Json DescriptionToJson(const TestDescription& desc);
TestDescription DescriptionFromJson(const Json& json, const std::string& where);
Json TemplateToJson(const Template& tmpl);
Template TemplateFromJson(const Json& json, const std::string& where);

std::string CasesToJsonl(const std::vector<TestCase>& cases);
std::vector<TestCase> LoadCasesJsonl(const std::filesystem::path& path);
void SaveCasesJsonl(const std::vector<TestCase>& cases,
                    const std::filesystem::path& path);

// Suite bundle directory: cases.jsonl, descriptions.jsonl, templates.jsonl,
// lexicon.json (which also carries the suite name and task).
TestSuite LoadSuite(const std::filesystem::path& dir);
void SaveSuite(const TestSuite& suite, const std::filesystem::path& dir);

}  // namespace testaug

#endif  // TESTAUG_SUITE_H_
