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

#ifndef TESTAUG_FILTERING_H_
#define TESTAUG_FILTERING_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "testaug/annotation_store.h"
#include "testaug/jsonl.h"
#include "testaug/suite.h"

namespace testaug {

// ---------------------------------------------------------------------------
// Structural checks
// ---------------------------------------------------------------------------

struct CaseRejection {
  TestCase test_case;
  std::string reason;  // wrong_arity | empty_text | identical_pair
};

struct FormatFilterResult {
  std::vector<TestCase> kept;
  std::vector<CaseRejection> rejected;
};

FormatFilterResult FormatFilter(const std::vector<TestCase>& cases,
                                TaskId task);

// ---------------------------------------------------------------------------
// Two-phase annotation protocol
// ---------------------------------------------------------------------------

enum class Phase { kPhase1, kPredominantlyValid, kPhase2Collecting,
                   kClassifierReady };

std::string_view PhaseName(Phase phase);
Phase ParsePhase(std::string_view name);

inline constexpr size_t kDefaultPhase1SampleSize = 40;
inline constexpr size_t kDefaultPhase2Target = 100;

struct PhaseState {
  std::string test_id;
  Phase phase = Phase::kPhase1;
  size_t phase1_sample_size = kDefaultPhase1SampleSize;
  // Phase-1 sample counts while in phase1/predominantly_valid; counts over
  // cases outside the phase-1 sample once collecting for phase 2.
  size_t valid_count = 0;
  size_t invalid_count = 0;
  size_t phase2_target = kDefaultPhase2Target;
  // A case counts as adjudicated once this many annotators have labeled it.
  size_t min_annotators = 1;
  // Frozen when phase 1 closes; these cases form the classifier test set.
  std::vector<std::string> phase1_case_ids;

  bool operator==(const PhaseState&) const = default;
};

Json PhaseStateToJson(const PhaseState& state);

struct Adjudication {
  size_t n_annotators = 0;
  bool valid = false;  // true iff no annotator marked the case invalid
  Timestamp first_labeled{};
};

// Conjunction rule over the latest record of each annotator.
std::map<std::string, Adjudication> Adjudicate(
    const std::vector<AnnotationRecord>& records);

// Moves the state forward as far as the annotations allow:
//   phase1 -> predominantly_valid   once phase1_sample_size cases are
//                                   adjudicated and the valid share reaches
//                                   desc.validity_threshold
//   phase1 -> phase2_collecting     otherwise, at the same point
//   phase2_collecting -> classifier_ready
//                                   when valid and invalid counts outside the
//                                   phase-1 sample both reach phase2_target
// Never moves backwards; repeated calls with the same data are no-ops.
//
// `case_tests` maps every known case id to its test id. Errors: kWrongTest
// when a record names a case of another test (or an unknown case).
PhaseState AdvancePhase(
    PhaseState state, const TestDescription& desc,
    const std::vector<AnnotationRecord>& annotations,
    const std::unordered_map<std::string, std::string>& case_tests);

// ---------------------------------------------------------------------------
// Agreement
// ---------------------------------------------------------------------------

struct AgreementReport {
  size_t n_total = 0;
  size_t n_agree = 0;
  double agreement_rate = 0.0;
  double cohen_kappa = 0.0;
  // confusion[i][j]: annotator a said i, b said j; index 0 = valid.
  std::array<std::array<size_t, 2>, 2> confusion{};
};

// Two-rater Cohen's kappa from a 2x2 confusion table. When chance agreement
// is 1 (both raters constant on the same label) kappa is reported as 0.
AgreementReport AgreementFromConfusion(
    const std::array<std::array<size_t, 2>, 2>& confusion);

// Over cases labeled by both annotators (latest record each).
// Errors: kNoOverlap.
AgreementReport Agreement(const std::vector<AnnotationRecord>& annotations,
                          const std::string& annotator_a,
                          const std::string& annotator_b);

Json AgreementToJson(const AgreementReport& report);

}  // namespace testaug

#endif  // TESTAUG_FILTERING_H_
