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

#include "testaug/filtering.h"

#include <algorithm>
#include <set>

#include "testaug/error.h"
#include "testaug/text.h"

namespace testaug {

FormatFilterResult FormatFilter(const std::vector<TestCase>& cases,
                                TaskId task) {
  const size_t arity = static_cast<size_t>(GetTask(task).arity);
  FormatFilterResult out;
  for (const TestCase& c : cases) {
    std::string reason;
    if (c.texts.size() != arity) {
      reason = "wrong_arity";
    } else if (std::any_of(c.texts.begin(), c.texts.end(),
                           [](const std::string& t) { return Trim(t).empty(); })) {
      reason = "empty_text";
    } else if (arity == 2 &&
               NormalizeForDedup(c.texts[0]) == NormalizeForDedup(c.texts[1])) {
      reason = "identical_pair";
    }
    if (reason.empty()) {
      out.kept.push_back(c);
    } else {
      out.rejected.push_back({c, std::move(reason)});
    }
  }
  return out;
}

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kPhase1: return "phase1";
    case Phase::kPredominantlyValid: return "predominantly_valid";
    case Phase::kPhase2Collecting: return "phase2_collecting";
    case Phase::kClassifierReady: return "classifier_ready";
  }
  return "phase1";
}

Phase ParsePhase(std::string_view name) {
  for (Phase p : {Phase::kPhase1, Phase::kPredominantlyValid,
                  Phase::kPhase2Collecting, Phase::kClassifierReady}) {
    if (PhaseName(p) == name) return p;
  }
  throw Error(ErrorCode::kParseError, "unknown phase '" + std::string(name) + "'");
}

Json PhaseStateToJson(const PhaseState& s) {
  Json j;
  j["test_id"] = s.test_id;
  j["phase"] = PhaseName(s.phase);
  j["phase1_sample_size"] = s.phase1_sample_size;
  j["valid_count"] = s.valid_count;
  j["invalid_count"] = s.invalid_count;
  j["phase2_target"] = s.phase2_target;
  j["min_annotators"] = s.min_annotators;
  j["phase1_case_ids"] = s.phase1_case_ids;
  return j;
}

std::map<std::string, Adjudication> Adjudicate(
    const std::vector<AnnotationRecord>& records) {
  std::map<std::string, Adjudication> out;
  for (const AnnotationRecord& r : LatestRecords(records)) {
    auto [it, inserted] = out.try_emplace(r.case_id);
    Adjudication& a = it->second;
    if (inserted) {
      a.valid = true;
      a.first_labeled = r.timestamp;
    }
    ++a.n_annotators;
    a.valid = a.valid && r.valid;
    a.first_labeled = std::min(a.first_labeled, r.timestamp);
  }
  return out;
}

PhaseState AdvancePhase(
    PhaseState state, const TestDescription& desc,
    const std::vector<AnnotationRecord>& annotations,
    const std::unordered_map<std::string, std::string>& case_tests) {
  if (state.test_id != desc.id) {
    throw Error(ErrorCode::kInvalidArgument,
                "state for " + state.test_id + " advanced with " + desc.id);
  }
  for (const AnnotationRecord& r : annotations) {
    auto it = case_tests.find(r.case_id);
    if (it == case_tests.end() || it->second != state.test_id) {
      throw Error(ErrorCode::kWrongTest,
                  "annotation for case " + r.case_id + " outside test " +
                      state.test_id);
    }
  }

  // Adjudicated cases in the order they were first labeled.
  std::vector<std::pair<std::string, Adjudication>> done;
  for (auto& [id, a] : Adjudicate(annotations)) {
    if (a.n_annotators >= std::max<size_t>(1, state.min_annotators)) {
      done.emplace_back(id, a);
    }
  }
  std::stable_sort(done.begin(), done.end(), [](const auto& x, const auto& y) {
    return x.second.first_labeled < y.second.first_labeled;
  });

  if (state.phase == Phase::kPhase1) {
    const size_t sample = std::min(done.size(), state.phase1_sample_size);
    size_t valid = 0;
    for (size_t i = 0; i < sample; ++i) valid += done[i].second.valid ? 1 : 0;
    state.valid_count = valid;
    state.invalid_count = sample - valid;
    if (sample >= state.phase1_sample_size && sample > 0) {
      state.phase1_case_ids.clear();
      for (size_t i = 0; i < sample; ++i) {
        state.phase1_case_ids.push_back(done[i].first);
      }
      const double share =
          static_cast<double>(valid) / static_cast<double>(sample);
      // The tolerance keeps exact boundary shares (36/40 vs 0.9) inclusive.
      state.phase = share + 1e-12 >= desc.validity_threshold
                        ? Phase::kPredominantlyValid
                        : Phase::kPhase2Collecting;
    }
  }

  if (state.phase == Phase::kPhase2Collecting ||
      state.phase == Phase::kClassifierReady) {
    std::set<std::string> held_out(state.phase1_case_ids.begin(),
                                   state.phase1_case_ids.end());
    size_t valid = 0, invalid = 0;
    for (const auto& [id, a] : done) {
      if (held_out.contains(id)) continue;
      (a.valid ? valid : invalid) += 1;
    }
    state.valid_count = valid;
    state.invalid_count = invalid;
    if (state.phase == Phase::kPhase2Collecting &&
        valid >= state.phase2_target && invalid >= state.phase2_target) {
      state.phase = Phase::kClassifierReady;
    }
  }
  return state;
}

AgreementReport AgreementFromConfusion(
    const std::array<std::array<size_t, 2>, 2>& confusion) {
  AgreementReport r;
  r.confusion = confusion;
  r.n_total = confusion[0][0] + confusion[0][1] + confusion[1][0] +
              confusion[1][1];
  r.n_agree = confusion[0][0] + confusion[1][1];
  if (r.n_total == 0) return r;
  const double n = static_cast<double>(r.n_total);
  const double p_o = static_cast<double>(r.n_agree) / n;
  const double a_valid = static_cast<double>(confusion[0][0] + confusion[0][1]) / n;
  const double b_valid = static_cast<double>(confusion[0][0] + confusion[1][0]) / n;
  const double p_e = a_valid * b_valid + (1.0 - a_valid) * (1.0 - b_valid);
  r.agreement_rate = p_o;
  r.cohen_kappa = p_e >= 1.0 ? 0.0 : (p_o - p_e) / (1.0 - p_e);
  return r;
}

AgreementReport Agreement(const std::vector<AnnotationRecord>& annotations,
                          const std::string& annotator_a,
                          const std::string& annotator_b) {
  std::map<std::string, bool> a_labels, b_labels;
  for (const AnnotationRecord& r : LatestRecords(annotations)) {
    if (r.annotator_id == annotator_a) a_labels[r.case_id] = r.valid;
    if (r.annotator_id == annotator_b) b_labels[r.case_id] = r.valid;
  }
  std::array<std::array<size_t, 2>, 2> confusion{};
  for (const auto& [case_id, a_valid] : a_labels) {
    auto it = b_labels.find(case_id);
    if (it == b_labels.end()) continue;
    ++confusion[a_valid ? 0 : 1][it->second ? 0 : 1];
  }
  AgreementReport report = AgreementFromConfusion(confusion);
  if (report.n_total == 0) {
    throw Error(ErrorCode::kNoOverlap, annotator_a + " and " + annotator_b +
                                           " share no labeled case");
  }
  return report;
}

Json AgreementToJson(const AgreementReport& r) {
  Json j;
  j["n_total"] = r.n_total;
  j["n_agree"] = r.n_agree;
  j["agreement_rate"] = r.agreement_rate;
  j["cohen_kappa"] = r.cohen_kappa;
  j["confusion"] = {{r.confusion[0][0], r.confusion[0][1]},
                    {r.confusion[1][0], r.confusion[1][1]}};
  return j;
}

}  // namespace testaug
