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

#include "testaug/suite.h"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "testaug/error.h"
#include "testaug/hash.h"
#include "testaug/template.h"
#include "testaug/text.h"

namespace testaug {

namespace fs = std::filesystem;

const Task& GetTask(TaskId id) {
  static const Task kSentiment{TaskId::kSentiment, {"negative", "positive"}, 1};
  static const Task kParaphrase{
      TaskId::kParaphrase, {"not_paraphrase", "paraphrase"}, 2};
  static const Task kNli{
      TaskId::kNli, {"entailment", "neutral", "contradiction"}, 2};
  switch (id) {
    case TaskId::kSentiment: return kSentiment;
    case TaskId::kParaphrase: return kParaphrase;
    case TaskId::kNli: return kNli;
  }
  return kSentiment;
}

std::string_view TaskName(TaskId id) {
  switch (id) {
    case TaskId::kSentiment: return "sentiment";
    case TaskId::kParaphrase: return "paraphrase";
    case TaskId::kNli: return "nli";
  }
  return "sentiment";
}

TaskId ParseTaskId(std::string_view name) {
  if (name == "sentiment") return TaskId::kSentiment;
  if (name == "paraphrase") return TaskId::kParaphrase;
  if (name == "nli") return TaskId::kNli;
  throw Error(ErrorCode::kConfigError, "unknown task '" + std::string(name) +
                                           "' (sentiment|paraphrase|nli)");
}

bool IsLabelOf(TaskId task, std::string_view label) {
  const auto& labels = GetTask(task).label_set;
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

double DefaultValidityThreshold(TaskId task) {
  return task == TaskId::kNli ? 0.8 : 0.9;
}

std::string_view PosHintName(PosHint pos) {
  switch (pos) {
    case PosHint::kNoun: return "NOUN";
    case PosHint::kVerb: return "VERB";
    case PosHint::kAdj: return "ADJ";
  }
  return "NOUN";
}

std::optional<PosHint> ParsePosHint(std::string_view name) {
  if (name == "NOUN") return PosHint::kNoun;
  if (name == "VERB") return PosHint::kVerb;
  if (name == "ADJ") return PosHint::kAdj;
  return std::nullopt;
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries) {
  for (LexiconEntry& e : entries) Upsert(std::move(e));
}

const LexiconEntry* Lexicon::Find(std::string_view slot) const {
  auto it = index_.find(std::string(slot));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

void Lexicon::Upsert(LexiconEntry entry) {
  auto it = index_.find(entry.slot_name);
  if (it != index_.end()) {
    entries_[it->second] = std::move(entry);
    return;
  }
  index_.emplace(entry.slot_name, entries_.size());
  entries_.push_back(std::move(entry));
}

std::string_view OriginName(Origin origin) {
  switch (origin) {
    case Origin::kSeed: return "seed";
    case Origin::kGenerated: return "generated";
    case Origin::kExpanded: return "expanded";
  }
  return "seed";
}

std::string_view ValidityName(Validity validity) {
  switch (validity) {
    case Validity::kUnknown: return "unknown";
    case Validity::kValid: return "valid";
    case Validity::kInvalid: return "invalid";
  }
  return "unknown";
}

std::string_view ProvenanceName(TemplateProvenance provenance) {
  return provenance == TemplateProvenance::kManual ? "manual" : "expanded";
}

std::string CaseId(TaskId task, std::string_view test_id,
                   const std::vector<std::string>& texts,
                   std::string_view label) {
  std::string material(TaskName(task));
  material += '\x1f';
  material += test_id;
  material += '\x1f';
  material += Join(texts, "\x1f");
  material += '\x1f';
  material += label;
  // 128 bits of the digest keep ids short while collisions stay negligible.
  return Sha256Hex(material).substr(0, 32);
}

std::string CaseId(TaskId task, const TestCase& test_case) {
  return CaseId(task, test_case.test_id, test_case.texts, test_case.label);
}

const TestDescription* TestSuite::FindDescription(std::string_view id) const {
  for (const auto& d : descriptions) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

const Template* TestSuite::FindTemplate(std::string_view id) const {
  for (const auto& t : templates) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

namespace {

[[noreturn]] void Violation(const std::string& invariant,
                            const std::string& record) {
  throw Error(ErrorCode::kInvariantViolation, invariant + " (" + record + ")");
}

}  // namespace

void ValidateSuite(const TestSuite& suite) {
  const Task& task = GetTask(suite.task);

  for (const LexiconEntry& e : suite.lexicon.entries()) {
    const std::string rec = "lexicon slot " + e.slot_name;
    if (e.slot_name.empty()) Violation("slot name non-empty", rec);
    if (e.words.empty()) Violation("word list non-empty", rec);
    std::unordered_set<std::string> seen(e.words.begin(), e.words.end());
    if (seen.size() != e.words.size()) Violation("words unique", rec);
    if (e.content != e.pos_hint.has_value()) {
      Violation("content flag iff pos hint", rec);
    }
  }

  std::unordered_set<std::string> desc_ids;
  for (const TestDescription& d : suite.descriptions) {
    const std::string rec = "description " + d.id;
    if (d.id.empty()) Violation("description id non-empty", rec);
    if (!desc_ids.insert(d.id).second) Violation("description ids unique", rec);
    if (d.capability.name.empty()) Violation("capability name non-empty", rec);
    if (d.capability.task != suite.task) Violation("capability task", rec);
    if (!IsLabelOf(suite.task, d.expected_label)) {
      Violation("expected_label in task label set", rec);
    }
    if (!(d.validity_threshold >= 0.0 && d.validity_threshold <= 1.0)) {
      Violation("validity_threshold in [0,1]", rec);
    }
  }

  std::unordered_set<std::string> template_ids;
  for (const Template& t : suite.templates) {
    const std::string rec = "template " + t.id;
    if (!template_ids.insert(t.id).second) Violation("template ids unique", rec);
    if (!desc_ids.contains(t.test_id)) Violation("template test_id resolves", rec);
    if (static_cast<int>(t.patterns.size()) != task.arity) {
      Violation("|patterns| = task arity", rec);
    }
    for (const std::string& p : t.patterns) {
      if (p.empty()) Violation("pattern non-empty", rec);
    }
    for (const std::string& slot : SlotNames(t.patterns)) {
      if (suite.lexicon.Find(slot) == nullptr) {
        Violation("slot [" + slot + "] resolves in lexicon", rec);
      }
    }
  }

  std::unordered_set<std::string> case_ids;
  for (const TestCase& c : suite.cases) {
    const std::string rec = "case " + c.id;
    if (!case_ids.insert(c.id).second) Violation("case ids unique", rec);
    const TestDescription* d = suite.FindDescription(c.test_id);
    if (d == nullptr) Violation("case test_id resolves", rec);
    if (static_cast<int>(c.texts.size()) != task.arity) {
      Violation("|texts| = task arity", rec);
    }
    for (const std::string& text : c.texts) {
      if (Trim(text).empty()) Violation("texts non-empty", rec);
    }
    if (c.label != d->expected_label) Violation("label = expected_label", rec);
    if (c.origin == Origin::kExpanded && (!c.template_id || !c.fills)) {
      Violation("expanded case carries template_id and fills", rec);
    }
    if (c.id != CaseId(suite.task, c)) Violation("id = content hash", rec);
  }
}

Json CaseToJson(const TestCase& c) {
  Json j;
  j["id"] = c.id;
  j["test_id"] = c.test_id;
  j["texts"] = c.texts;
  j["label"] = c.label;
  j["origin"] = OriginName(c.origin);
  if (c.template_id) j["template_id"] = *c.template_id;
  if (c.fills) {
    Json fills = Json::object();
    for (const auto& [slot, word] : *c.fills) fills[slot] = word;
    j["fills"] = std::move(fills);
  }
  j["validity"] = ValidityName(c.validity);
  Json meta = c.meta.is_object() ? c.meta : Json::object();
  if (!c.fill_spans.empty()) {
    Json spans = Json::array();
    for (const FillSpan& s : c.fill_spans) {
      spans.push_back(Json::array(
          {s.text_index, s.begin, s.length, s.slot, s.article}));
    }
    meta["fill_spans"] = std::move(spans);
  }
  if (!meta.empty()) j["meta"] = std::move(meta);
  return j;
}

namespace {

const Json& Field(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::kInvariantViolation,
                where + ": missing field '" + key + "'");
  }
  return *it;
}

std::string StringField(const Json& j, const char* key,
                        const std::string& where) {
  const Json& v = Field(j, key, where);
  if (!v.is_string()) {
    throw Error(ErrorCode::kInvariantViolation,
                where + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<std::string> StringList(const Json& j, const char* key,
                                    const std::string& where) {
  const Json& v = Field(j, key, where);
  if (!v.is_array()) {
    throw Error(ErrorCode::kInvariantViolation,
                where + ": field '" + key + "' must be an array of strings");
  }
  std::vector<std::string> out;
  for (const Json& item : v) {
    if (!item.is_string()) {
      throw Error(ErrorCode::kInvariantViolation,
                  where + ": field '" + key + "' must be an array of strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

template <typename Enum, typename NameFn>
Enum ParseEnum(const std::string& value, std::initializer_list<Enum> options,
               NameFn name, const std::string& where) {
  for (Enum e : options) {
    if (name(e) == value) return e;
  }
  throw Error(ErrorCode::kInvariantViolation,
              where + ": unrecognized value '" + value + "'");
}

// Moves keys outside `known` into a meta object (merging an existing one).
Json CollectMeta(const Json& j, std::initializer_list<const char*> known) {
  Json meta = Json::object();
  if (auto it = j.find("meta"); it != j.end() && it->is_object()) meta = *it;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "meta") continue;
    bool is_known = false;
    for (const char* k : known) is_known = is_known || it.key() == k;
    if (!is_known) meta[it.key()] = it.value();
  }
  return meta;
}

}  // namespace

TestCase CaseFromJson(const Json& j, const std::string& where) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvariantViolation, where + ": expected object");
  }
  TestCase c;
  if (j.contains("id")) c.id = StringField(j, "id", where);
  c.test_id = StringField(j, "test_id", where);
  c.texts = StringList(j, "texts", where);
  c.label = StringField(j, "label", where);
  c.origin = ParseEnum(StringField(j, "origin", where),
                       {Origin::kSeed, Origin::kGenerated, Origin::kExpanded},
                       OriginName, where);
  if (j.contains("template_id")) {
    c.template_id = StringField(j, "template_id", where);
  }
  if (j.contains("fills")) {
    const Json& f = j["fills"];
    if (!f.is_object()) {
      throw Error(ErrorCode::kInvariantViolation, where + ": fills not object");
    }
    Fills fills;
    for (auto it = f.begin(); it != f.end(); ++it) {
      if (!it->is_string()) {
        throw Error(ErrorCode::kInvariantViolation,
                    where + ": fill values must be strings");
      }
      fills[it.key()] = it->get<std::string>();
    }
    c.fills = std::move(fills);
  }
  c.validity = j.contains("validity")
                   ? ParseEnum(StringField(j, "validity", where),
                               {Validity::kUnknown, Validity::kValid,
                                Validity::kInvalid},
                               ValidityName, where)
                   : Validity::kUnknown;
  c.meta = CollectMeta(j, {"id", "test_id", "texts", "label", "origin",
                           "template_id", "fills", "validity"});
  if (auto it = c.meta.find("fill_spans"); it != c.meta.end()) {
    try {
      for (const Json& s : *it) {
        c.fill_spans.push_back({s.at(0).get<size_t>(), s.at(1).get<size_t>(),
                                s.at(2).get<size_t>(),
                                s.at(3).get<std::string>(), s.at(4).get<bool>()});
      }
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kInvariantViolation,
                  where + ": malformed meta.fill_spans");
    }
    c.meta.erase(it);
  }
  return c;
}

Json DescriptionToJson(const TestDescription& d) {
  Json j;
  j["id"] = d.id;
  j["capability"] = d.capability.name;
  j["task"] = TaskName(d.capability.task);
  j["description"] = d.description;
  j["expected_label"] = d.expected_label;
  j["validity_threshold"] = d.validity_threshold;
  if (!d.meta.empty()) j["meta"] = d.meta;
  return j;
}

TestDescription DescriptionFromJson(const Json& j, const std::string& where) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvariantViolation, where + ": expected object");
  }
  TestDescription d;
  d.id = StringField(j, "id", where);
  d.capability.name = StringField(j, "capability", where);
  try {
    d.capability.task = ParseTaskId(StringField(j, "task", where));
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvariantViolation, where + ": " + e.what());
  }
  d.description = StringField(j, "description", where);
  d.expected_label = StringField(j, "expected_label", where);
  if (j.contains("validity_threshold")) {
    if (!j["validity_threshold"].is_number()) {
      throw Error(ErrorCode::kInvariantViolation,
                  where + ": validity_threshold must be a number");
    }
    d.validity_threshold = j["validity_threshold"].get<double>();
  } else {
    d.validity_threshold = DefaultValidityThreshold(d.capability.task);
  }
  d.meta = CollectMeta(j, {"id", "capability", "task", "description",
                           "expected_label", "validity_threshold"});
  return d;
}

Json TemplateToJson(const Template& t) {
  Json j;
  j["id"] = t.id;
  j["test_id"] = t.test_id;
  j["patterns"] = t.patterns;
  j["provenance"] = ProvenanceName(t.provenance);
  if (!t.meta.empty()) j["meta"] = t.meta;
  return j;
}

Template TemplateFromJson(const Json& j, const std::string& where) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvariantViolation, where + ": expected object");
  }
  Template t;
  t.id = StringField(j, "id", where);
  t.test_id = StringField(j, "test_id", where);
  t.patterns = StringList(j, "patterns", where);
  t.provenance =
      j.contains("provenance")
          ? ParseEnum(StringField(j, "provenance", where),
                      {TemplateProvenance::kManual,
                       TemplateProvenance::kExpanded},
                      ProvenanceName, where)
          : TemplateProvenance::kManual;
  t.meta = CollectMeta(j, {"id", "test_id", "patterns", "provenance"});
  return t;
}

std::string CasesToJsonl(const std::vector<TestCase>& cases) {
  std::string out;
  for (const TestCase& c : cases) out += ToJsonlLine(CaseToJson(c));
  return out;
}

std::vector<TestCase> LoadCasesJsonl(const fs::path& path) {
  std::vector<TestCase> cases;
  for (const JsonlLine& line : ReadJsonl(path)) {
    cases.push_back(CaseFromJson(
        line.value, path.filename().string() + ":" +
                        std::to_string(line.line_number)));
  }
  return cases;
}

void SaveCasesJsonl(const std::vector<TestCase>& cases, const fs::path& path) {
  WriteFileAtomic(path, CasesToJsonl(cases));
}

namespace {

Json LexiconToJson(const TestSuite& suite) {
  Json j;
  j["name"] = suite.name;
  j["task"] = TaskName(suite.task);
  Json slots = Json::array();
  for (const LexiconEntry& e : suite.lexicon.entries()) {
    Json s;
    s["slot"] = e.slot_name;
    s["words"] = e.words;
    s["content"] = e.content;
    if (e.pos_hint) s["pos"] = PosHintName(*e.pos_hint);
    slots.push_back(std::move(s));
  }
  j["slots"] = std::move(slots);
  return j;
}

}  // namespace

TestSuite LoadSuite(const fs::path& dir) {
  TestSuite suite;
  const fs::path lexicon_path = dir / "lexicon.json";
  Json lex = ReadJsonFile(lexicon_path);
  const std::string lex_where = lexicon_path.filename().string();
  if (!lex.is_object()) {
    throw Error(ErrorCode::kInvariantViolation, lex_where + ": expected object");
  }
  suite.name = lex.contains("name") ? StringField(lex, "name", lex_where)
                                    : dir.filename().string();
  try {
    suite.task = ParseTaskId(StringField(lex, "task", lex_where));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvariantViolation) throw;
    throw Error(ErrorCode::kInvariantViolation, lex_where + ": " + e.what());
  }
  if (lex.contains("slots")) {
    if (!lex["slots"].is_array()) {
      throw Error(ErrorCode::kInvariantViolation, lex_where + ": slots array");
    }
    std::vector<LexiconEntry> entries;
    std::set<std::string> names;
    for (const Json& s : lex["slots"]) {
      LexiconEntry e;
      e.slot_name = StringField(s, "slot", lex_where);
      e.words = StringList(s, "words", lex_where);
      e.content = s.value("content", false);
      if (s.contains("pos")) {
        e.pos_hint = ParsePosHint(StringField(s, "pos", lex_where));
        if (!e.pos_hint) {
          throw Error(ErrorCode::kInvariantViolation,
                      lex_where + ": slot " + e.slot_name +
                          " has pos outside NOUN|VERB|ADJ");
        }
      }
      if (!names.insert(e.slot_name).second) {
        throw Error(ErrorCode::kInvariantViolation,
                    lex_where + ": duplicate slot " + e.slot_name);
      }
      entries.push_back(std::move(e));
    }
    suite.lexicon = Lexicon(std::move(entries));
  }

  for (const JsonlLine& line : ReadJsonl(dir / "descriptions.jsonl")) {
    suite.descriptions.push_back(DescriptionFromJson(
        line.value, "descriptions.jsonl:" + std::to_string(line.line_number)));
  }
  if (fs::exists(dir / "templates.jsonl")) {
    for (const JsonlLine& line : ReadJsonl(dir / "templates.jsonl")) {
      suite.templates.push_back(TemplateFromJson(
          line.value, "templates.jsonl:" + std::to_string(line.line_number)));
    }
  }
  for (const JsonlLine& line : ReadJsonl(dir / "cases.jsonl")) {
    const std::string where =
        "cases.jsonl:" + std::to_string(line.line_number);
    TestCase c = CaseFromJson(line.value, where);
    if (c.id.empty()) c.id = CaseId(suite.task, c);
    suite.cases.push_back(std::move(c));
  }
  ValidateSuite(suite);
  return suite;
}

void SaveSuite(const TestSuite& suite, const fs::path& dir) {
  ValidateSuite(suite);
  fs::create_directories(dir);
  std::string descriptions;
  for (const auto& d : suite.descriptions) {
    descriptions += ToJsonlLine(DescriptionToJson(d));
  }
  std::string templates;
  for (const auto& t : suite.templates) {
    templates += ToJsonlLine(TemplateToJson(t));
  }
  WriteFileAtomic(dir / "lexicon.json", LexiconToJson(suite).dump(2) + "\n");
  WriteFileAtomic(dir / "descriptions.jsonl", descriptions);
  WriteFileAtomic(dir / "templates.jsonl", templates);
  WriteFileAtomic(dir / "cases.jsonl", CasesToJsonl(suite.cases));
}

}  // namespace testaug
