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

#include "testaug/template.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <unordered_set>

#include "testaug/error.h"

namespace testaug {

namespace {

bool IsSlotNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

void AppendLiteral(std::vector<PatternSegment>& segments,
                   std::string_view text) {
  if (text.empty()) return;
  if (!segments.empty() &&
      segments.back().kind == PatternSegment::Kind::kLiteral) {
    segments.back().text += text;
  } else {
    segments.push_back({PatternSegment::Kind::kLiteral, std::string(text)});
  }
}

const LexiconEntry& RequireSlot(const Lexicon& lexicon,
                                const std::string& slot) {
  const LexiconEntry* entry = lexicon.Find(slot);
  if (entry == nullptr) {
    throw Error(ErrorCode::kUnknownSlot, "slot [" + slot + "] not in lexicon");
  }
  return *entry;
}

}  // namespace

std::vector<PatternSegment> ParsePattern(std::string_view pattern) {
  std::vector<PatternSegment> segments;
  size_t pos = 0;
  while (pos < pattern.size()) {
    size_t open = pattern.find('[', pos);
    if (open == std::string_view::npos) {
      AppendLiteral(segments, pattern.substr(pos));
      break;
    }
    AppendLiteral(segments, pattern.substr(pos, open - pos));
    size_t name_begin = open + 1;
    bool article = false;
    if (pattern.substr(name_begin, 2) == "a:") {
      article = true;
      name_begin += 2;
    }
    size_t name_end = name_begin;
    while (name_end < pattern.size() && IsSlotNameChar(pattern[name_end])) {
      ++name_end;
    }
    if (name_end > name_begin && name_end < pattern.size() &&
        pattern[name_end] == ']') {
      segments.push_back(
          {PatternSegment::Kind::kSlot,
           std::string(pattern.substr(name_begin, name_end - name_begin)),
           article});
      pos = name_end + 1;
    } else {
      AppendLiteral(segments, pattern.substr(open, 1));
      pos = open + 1;
    }
  }
  return segments;
}

std::string SlotMarker(std::string_view slot, bool article) {
  std::string marker = "[";
  if (article) marker += "a:";
  marker += slot;
  marker += "]";
  return marker;
}

std::vector<std::string> SlotNames(const std::vector<std::string>& patterns) {
  std::vector<std::string> names;
  for (const std::string& pattern : patterns) {
    for (const PatternSegment& seg : ParsePattern(pattern)) {
      if (seg.kind == PatternSegment::Kind::kSlot &&
          std::find(names.begin(), names.end(), seg.text) == names.end()) {
        names.push_back(seg.text);
      }
    }
  }
  return names;
}

std::string_view IndefiniteArticle(std::string_view word) {
  if (word.empty()) return "a";
  switch (std::tolower(static_cast<unsigned char>(word.front()))) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return "an";
    default:
      return "a";
  }
}

RenderedTexts RenderPatterns(const std::vector<std::string>& patterns,
                             const Lexicon& lexicon, const Fills& fills) {
  RenderedTexts out;
  std::unordered_set<std::string> used;
  for (size_t t = 0; t < patterns.size(); ++t) {
    std::string text;
    for (const PatternSegment& seg : ParsePattern(patterns[t])) {
      if (seg.kind == PatternSegment::Kind::kLiteral) {
        text += seg.text;
        continue;
      }
      const LexiconEntry& entry = RequireSlot(lexicon, seg.text);
      auto fill = fills.find(seg.text);
      if (fill == fills.end()) {
        throw Error(ErrorCode::kMissingFill, "no fill for [" + seg.text + "]");
      }
      if (std::find(entry.words.begin(), entry.words.end(), fill->second) ==
          entry.words.end()) {
        throw Error(ErrorCode::kFillNotInLexicon,
                    "'" + fill->second + "' not listed for [" + seg.text + "]");
      }
      used.insert(seg.text);
      FillSpan span{t, text.size(), 0, seg.text, seg.article};
      if (seg.article) {
        text += IndefiniteArticle(fill->second);
        text += ' ';
      }
      text += fill->second;
      span.length = text.size() - span.begin;
      out.spans.push_back(std::move(span));
    }
    out.texts.push_back(std::move(text));
  }
  for (const auto& [slot, word] : fills) {
    if (!used.contains(slot)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "fill for [" + slot + "] matches no slot in the template");
    }
  }
  return out;
}

TestCase RenderTemplate(const Template& tmpl, const Lexicon& lexicon,
                        const Fills& fills, const TestDescription& desc) {
  RenderedTexts rendered = RenderPatterns(tmpl.patterns, lexicon, fills);
  TestCase c;
  c.test_id = desc.id;
  c.texts = std::move(rendered.texts);
  c.label = desc.expected_label;
  c.origin = Origin::kSeed;
  c.template_id = tmpl.id;
  c.fills = fills;
  c.fill_spans = std::move(rendered.spans);
  c.id = CaseId(desc.capability.task, c);
  return c;
}

size_t TemplateProductSize(const Template& tmpl, const Lexicon& lexicon) {
  size_t product = 1;
  for (const std::string& slot : SlotNames(tmpl.patterns)) {
    size_t n = RequireSlot(lexicon, slot).words.size();
    if (n != 0 && product > std::numeric_limits<size_t>::max() / n) {
      return std::numeric_limits<size_t>::max();
    }
    product *= n;
  }
  return product;
}

std::vector<TestCase> EnumerateTemplate(const Template& tmpl,
                                        const Lexicon& lexicon,
                                        const TestDescription& desc,
                                        size_t cap) {
  if (cap < 1) throw Error(ErrorCode::kInvalidArgument, "cap must be >= 1");
  std::vector<std::string> slots = SlotNames(tmpl.patterns);
  std::vector<const LexiconEntry*> entries;
  for (const std::string& slot : slots) {
    entries.push_back(&RequireSlot(lexicon, slot));
    if (entries.back()->words.empty()) return {};
  }

  std::vector<TestCase> out;
  std::unordered_set<std::string> seen;
  // Odometer over word indices; the last slot varies fastest.
  std::vector<size_t> digits(slots.size(), 0);
  while (out.size() < cap) {
    Fills fills;
    for (size_t i = 0; i < slots.size(); ++i) {
      fills[slots[i]] = entries[i]->words[digits[i]];
    }
    TestCase c = RenderTemplate(tmpl, lexicon, fills, desc);
    if (seen.insert(c.id).second) out.push_back(std::move(c));

    size_t pos = slots.size();
    while (pos > 0) {
      --pos;
      if (++digits[pos] < entries[pos]->words.size()) break;
      digits[pos] = 0;
      if (pos == 0) return out;
    }
    if (slots.empty()) break;
  }
  return out;
}

}  // namespace testaug
