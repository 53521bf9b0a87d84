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

#ifndef TESTAUG_TEMPLATE_H_
#define TESTAUG_TEMPLATE_H_

#include <string>
#include <string_view>
#include <vector>

#include "testaug/suite.h"

namespace testaug {

// A pattern is literal text interleaved with slot markers "[name]" and
// "[a:name]". Slot names are [A-Za-z0-9_]+; any other bracketed text is
// literal.
struct PatternSegment {
  enum class Kind { kLiteral, kSlot };
  Kind kind = Kind::kLiteral;
  std::string text;  // literal text or slot name
  bool article = false;

  bool operator==(const PatternSegment&) const = default;
};

std::vector<PatternSegment> ParsePattern(std::string_view pattern);
std::string SlotMarker(std::string_view slot, bool article);

// Distinct slot names in order of first appearance across all patterns.
std::vector<std::string> SlotNames(const std::vector<std::string>& patterns);

// "an" iff `word` starts with a, e, i, o or u (any case).
std::string_view IndefiniteArticle(std::string_view word);

struct RenderedTexts {
  std::vector<std::string> texts;
  std::vector<FillSpan> spans;
};

// Substitutes fills into every pattern. Errors: kUnknownSlot, kMissingFill,
// kFillNotInLexicon.
RenderedTexts RenderPatterns(const std::vector<std::string>& patterns,
                             const Lexicon& lexicon, const Fills& fills);

// Renders a seed-origin case with id, fills and fill spans recorded.
TestCase RenderTemplate(const Template& tmpl, const Lexicon& lexicon,
                        const Fills& fills, const TestDescription& desc);

// Cartesian instantiation in lexicographic order (slots by first appearance,
// words in lexicon order), truncated at `cap` unique texts.
std::vector<TestCase> EnumerateTemplate(const Template& tmpl,
                                        const Lexicon& lexicon,
                                        const TestDescription& desc,
                                        size_t cap);

// Product of the word-list sizes of the template's slots (1 when slotless),
// saturating at SIZE_MAX.
size_t TemplateProductSize(const Template& tmpl, const Lexicon& lexicon);

}  // namespace testaug

#endif  // TESTAUG_TEMPLATE_H_
