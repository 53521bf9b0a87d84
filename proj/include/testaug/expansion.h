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

#ifndef TESTAUG_EXPANSION_H_
#define TESTAUG_EXPANSION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "testaug/suite.h"

namespace testaug {

// Lowercased word -> UPOS tag, e.g. from CoNLL-U parses of the seed cases.
// When a fill word has an entry it overrides the lexicon's content flag:
// NOUN, PROPN, VERB and ADJ count as content words.
using PosOverride = std::map<std::string, std::string>;

struct ExpansionMatch {
  std::string slot_name;
  // Rendered fill as it appears in the seed, including the article of an
  // "[a:name]" marker and any word characters glued to it by the pattern.
  std::string seed_surface;
  size_t text_index = 0;
  // Token indices in the generated text where the surface starts.
  std::vector<size_t> positions;
};

struct CaseExpansion {
  Template tmpl;
  std::vector<ExpansionMatch> matches;
  // The seed's fills for the slots the template uses; rendering `tmpl` with
  // these reproduces the generated texts.
  Fills fills;
};

// Re-slots content-word fills of `seed` that reappear in `generated`.
//
// A reappearance is a byte-identical occurrence of the seed surface bounded
// by non-word characters. Every occurrence is replaced; overlapping
// candidates resolve leftmost-longest. Returns nullopt when nothing was
// replaced.
//
// Errors: kMissingProvenance when the seed lacks fills or fill spans;
// kLexiconMismatch when a fill is not listed for its slot.
std::optional<CaseExpansion> ExpandCase(const TestCase& seed,
                                        const TestCase& generated,
                                        const Lexicon& lexicon,
                                        const PosOverride* pos_override = nullptr);

std::string ExpandedTemplateId(const std::string& test_id,
                               const std::vector<std::string>& patterns);

struct ExpandSuiteOptions {
  size_t per_template_cap = 10;
  size_t global_cap = 100000;
  uint64_t seed = 42;
  // Expansion for NLI is off unless requested.
  bool enable_nli = false;
  const PosOverride* pos_override = nullptr;
};

struct ExpandSuiteResult {
  std::vector<Template> templates;
  std::vector<TestCase> cases;
};

// Pairs each generated case with the demonstrations recorded in its
// meta.demonstration_ids (falling back to every seed of the same test),
// expands, dedups templates by normalized pattern, and instantiates them in
// a seeded order until global_cap cases exist. New cases never duplicate a
// seed-suite case, a generated case or each other.
ExpandSuiteResult ExpandSuite(const TestSuite& seed_suite,
                              const std::vector<TestCase>& generated,
                              const ExpandSuiteOptions& options);

}  // namespace testaug

#endif  // TESTAUG_EXPANSION_H_
