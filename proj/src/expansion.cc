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

#include "testaug/expansion.h"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "testaug/error.h"
#include "testaug/hash.h"
#include "testaug/rng.h"
#include "testaug/template.h"
#include "testaug/text.h"

namespace testaug {

namespace {

bool IsWordAt(std::string_view s, size_t i) {
  return i < s.size() && IsWordByte(static_cast<unsigned char>(s[i]));
}

// Start offsets of whitespace/punctuation tokens.
std::vector<size_t> TokenStarts(std::string_view s) {
  std::vector<size_t> starts;
  for (size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) continue;
    if (IsAsciiPunct(c) || i == 0 || !IsWordAt(s, i - 1)) starts.push_back(i);
  }
  return starts;
}

bool IsContentSlot(const LexiconEntry& entry, const std::string& word,
                   const PosOverride* pos_override) {
  if (pos_override != nullptr) {
    auto it = pos_override->find(AsciiLower(word));
    if (it != pos_override->end()) {
      return it->second == "NOUN" || it->second == "PROPN" ||
             it->second == "VERB" || it->second == "ADJ";
    }
  }
  return entry.content;
}

struct Variant {
  std::string slot;
  std::string surface;
  std::string replacement;

  bool operator<(const Variant& o) const {
    return std::tie(slot, surface, replacement) <
           std::tie(o.slot, o.surface, o.replacement);
  }
};

struct Hit {
  size_t text_index;
  size_t begin;
  size_t end;
  const Variant* variant;
};

}  // namespace

std::string ExpandedTemplateId(const std::string& test_id,
                               const std::vector<std::string>& patterns) {
  return "exp-" + Sha256Hex(test_id + "\x1f" + Join(patterns, "\x1f")).substr(0, 16);
}

std::optional<CaseExpansion> ExpandCase(const TestCase& seed,
                                        const TestCase& generated,
                                        const Lexicon& lexicon,
                                        const PosOverride* pos_override) {
  if (!seed.fills || (!seed.fills->empty() && seed.fill_spans.empty())) {
    throw Error(ErrorCode::kMissingProvenance,
                "seed " + seed.id + " has no recorded fills");
  }
  if (seed.test_id != generated.test_id) {
    throw Error(ErrorCode::kInvalidArgument,
                "seed " + seed.id + " and generated " + generated.id +
                    " belong to different tests");
  }

  // Surface variants per content slot. An "[a:name]" span also yields a bare
  // variant for reappearances without the article.
  std::set<Variant> variants;
  for (const FillSpan& span : seed.fill_spans) {
    const LexiconEntry* entry = lexicon.Find(span.slot);
    auto fill = seed.fills->find(span.slot);
    if (entry == nullptr || fill == seed.fills->end() ||
        std::find(entry->words.begin(), entry->words.end(), fill->second) ==
            entry->words.end()) {
      throw Error(ErrorCode::kLexiconMismatch,
                  "seed " + seed.id + " fill for [" + span.slot +
                      "] does not match the lexicon");
    }
    if (span.text_index >= seed.texts.size() ||
        span.begin + span.length > seed.texts[span.text_index].size()) {
      throw Error(ErrorCode::kMissingProvenance,
                  "seed " + seed.id + " fill span out of range");
    }
    if (!IsContentSlot(*entry, fill->second, pos_override)) continue;

    const std::string& text = seed.texts[span.text_index];
    size_t prefix_begin = span.begin;
    while (prefix_begin > 0 && IsWordAt(text, prefix_begin - 1)) --prefix_begin;
    size_t suffix_end = span.begin + span.length;
    while (IsWordAt(text, suffix_end)) ++suffix_end;
    const std::string prefix = text.substr(prefix_begin, span.begin - prefix_begin);
    const std::string suffix =
        text.substr(span.begin + span.length, suffix_end - span.begin - span.length);

    variants.insert({span.slot,
                     prefix + text.substr(span.begin, span.length) + suffix,
                     prefix + SlotMarker(span.slot, span.article) + suffix});
    if (span.article) {
      variants.insert({span.slot, fill->second + suffix,
                       SlotMarker(span.slot, false) + suffix});
    }
  }

  // Generated text that already contains bracket markup cannot be turned
  // into an unambiguous pattern.
  for (const std::string& text : generated.texts) {
    if (text.find('[') != std::string::npos) return std::nullopt;
  }

  std::vector<Hit> hits;
  for (size_t t = 0; t < generated.texts.size(); ++t) {
    const std::string& text = generated.texts[t];
    for (const Variant& v : variants) {
      if (v.surface.empty()) continue;
      for (size_t pos = text.find(v.surface); pos != std::string::npos;
           pos = text.find(v.surface, pos + 1)) {
        const size_t end = pos + v.surface.size();
        if ((pos > 0 && IsWordAt(text, pos - 1) && IsWordAt(text, pos)) ||
            (IsWordAt(text, end) && IsWordAt(text, end - 1))) {
          continue;
        }
        hits.push_back({t, pos, end, &v});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.text_index != b.text_index) return a.text_index < b.text_index;
    if (a.begin != b.begin) return a.begin < b.begin;
    if (a.end != b.end) return a.end > b.end;
    return *a.variant < *b.variant;
  });
  std::vector<Hit> chosen;
  for (const Hit& h : hits) {
    if (!chosen.empty() && chosen.back().text_index == h.text_index &&
        h.begin < chosen.back().end) {
      continue;
    }
    chosen.push_back(h);
  }
  if (chosen.empty()) return std::nullopt;

  CaseExpansion out;
  out.tmpl.test_id = generated.test_id;
  out.tmpl.provenance = TemplateProvenance::kExpanded;
  std::map<std::pair<std::string, size_t>, size_t> match_index;
  for (size_t t = 0; t < generated.texts.size(); ++t) {
    const std::string& text = generated.texts[t];
    const std::vector<size_t> starts = TokenStarts(text);
    std::string pattern;
    size_t cursor = 0;
    for (const Hit& h : chosen) {
      if (h.text_index != t) continue;
      pattern += text.substr(cursor, h.begin - cursor);
      pattern += h.variant->replacement;
      cursor = h.end;

      const std::string& slot = h.variant->slot;
      out.fills[slot] = seed.fills->at(slot);
      auto key = std::make_pair(slot, t);
      auto [it, inserted] = match_index.try_emplace(key, out.matches.size());
      if (inserted) {
        out.matches.push_back({slot, h.variant->surface, t, {}});
      }
      auto token = std::lower_bound(starts.begin(), starts.end(), h.begin);
      out.matches[it->second].positions.push_back(
          static_cast<size_t>(token - starts.begin()));
    }
    pattern += text.substr(cursor);
    out.tmpl.patterns.push_back(std::move(pattern));
  }

  // Re-rendering must give back the generated texts; a mismatch means a
  // marker landed somewhere the grammar reads differently.
  RenderedTexts check = RenderPatterns(out.tmpl.patterns, lexicon, out.fills);
  if (check.texts != generated.texts) return std::nullopt;

  out.tmpl.id = ExpandedTemplateId(out.tmpl.test_id, out.tmpl.patterns);
  out.tmpl.meta["source_case"] = generated.id;
  out.tmpl.meta["seed_case"] = seed.id;
  return out;
}

ExpandSuiteResult ExpandSuite(const TestSuite& seed_suite,
                              const std::vector<TestCase>& generated,
                              const ExpandSuiteOptions& options) {
  if (options.per_template_cap < 1 || options.global_cap < 1) {
    throw Error(ErrorCode::kInvalidArgument, "caps must be >= 1");
  }
  ExpandSuiteResult result;
  if (seed_suite.task == TaskId::kNli && !options.enable_nli) return result;

  std::vector<const TestCase*> ordered;
  for (const TestCase& g : generated) {
    if (g.validity != Validity::kInvalid) ordered.push_back(&g);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const TestCase* a, const TestCase* b) { return a->id < b->id; });

  std::unordered_set<std::string> seen_patterns;
  for (const Template& t : seed_suite.templates) {
    seen_patterns.insert(t.test_id + "\x1e" + NormalizeTextsForDedup(t.patterns));
  }
  std::vector<Template> templates;
  for (const TestCase* g : ordered) {
    std::vector<const TestCase*> partners;
    if (auto it = g->meta.find("demonstration_ids");
        it != g->meta.end() && it->is_array()) {
      for (const Json& id : *it) {
        for (const TestCase& s : seed_suite.cases) {
          if (id.is_string() && s.id == id.get<std::string>() && s.fills) {
            partners.push_back(&s);
          }
        }
      }
    } else {
      for (const TestCase& s : seed_suite.cases) {
        if (s.test_id == g->test_id && s.origin == Origin::kSeed && s.fills) {
          partners.push_back(&s);
        }
      }
    }
    for (const TestCase* s : partners) {
      if (s->test_id != g->test_id) continue;
      std::optional<CaseExpansion> e =
          ExpandCase(*s, *g, seed_suite.lexicon, options.pos_override);
      if (!e) continue;
      std::string key =
          e->tmpl.test_id + "\x1e" + NormalizeTextsForDedup(e->tmpl.patterns);
      if (seen_patterns.insert(std::move(key)).second) {
        templates.push_back(std::move(e->tmpl));
      }
    }
  }

  std::sort(templates.begin(), templates.end(),
            [](const Template& a, const Template& b) { return a.id < b.id; });
  Rng rng(options.seed);
  rng.Shuffle(templates);

  std::unordered_set<std::string> seen_cases;
  for (const TestCase& c : seed_suite.cases) {
    seen_cases.insert(c.test_id + "\x1e" + NormalizeTextsForDedup(c.texts));
  }
  for (const TestCase& c : generated) {
    seen_cases.insert(c.test_id + "\x1e" + NormalizeTextsForDedup(c.texts));
  }
  for (Template& t : templates) {
    if (result.cases.size() >= options.global_cap) break;
    const TestDescription* desc = seed_suite.FindDescription(t.test_id);
    if (desc == nullptr) continue;
    for (TestCase& c : EnumerateTemplate(t, seed_suite.lexicon, *desc,
                                         options.per_template_cap)) {
      if (result.cases.size() >= options.global_cap) break;
      if (!seen_cases.insert(c.test_id + "\x1e" + NormalizeTextsForDedup(c.texts))
               .second) {
        continue;
      }
      c.origin = Origin::kExpanded;
      result.cases.push_back(std::move(c));
    }
    result.templates.push_back(std::move(t));
  }
  return result;
}

}  // namespace testaug
