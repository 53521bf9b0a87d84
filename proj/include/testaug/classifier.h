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

#ifndef TESTAUG_CLASSIFIER_H_
#define TESTAUG_CLASSIFIER_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "testaug/jsonl.h"
#include "testaug/suite.h"

namespace testaug {

enum class ClassifierBackend { kRemoteHttp, kNgramLogReg };

std::string_view BackendName(ClassifierBackend backend);
// Accepts "ngram", "ngram_logreg", "remote", "remote_http".
ClassifierBackend ParseBackend(std::string_view name);

// Scores the probability that a case is valid. Immutable after training;
// safe for concurrent scoring.
class ValidityClassifier {
 public:
  explicit ValidityClassifier(double decision_threshold)
      : decision_threshold_(decision_threshold) {}
  virtual ~ValidityClassifier() = default;

  virtual ClassifierBackend backend() const = 0;
  virtual double Score(const TestCase& test_case) const = 0;
  virtual Json ToJson() const = 0;

  double decision_threshold() const { return decision_threshold_; }
  // Inclusive: a score equal to the threshold is accepted.
  bool Accepts(const TestCase& test_case) const {
    return Score(test_case) >= decision_threshold_;
  }

 private:
  double decision_threshold_;
};

struct LabeledCase {
  TestCase test_case;
  bool valid = false;
};

// Word unigram + bigram and character trigram counts, L2-normalized. The two
// texts of a pair are joined with a separator token.
std::vector<std::string> NgramFeatures(const std::vector<std::string>& texts);

struct TrainOptions {
  ClassifierBackend backend = ClassifierBackend::kNgramLogReg;
  uint64_t seed = 42;
  double decision_threshold = 0.5;
  // ngram_logreg
  int epochs = 40;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  // remote_http: base URL exposing POST /train and POST /score
  std::string trainer_url;
  int timeout_ms = 60000;
};

// Errors: kDegenerateData when fewer than two classes are present;
// kTrainerEndpointError for remote failures.
std::shared_ptr<const ValidityClassifier> TrainFilter(
    const std::vector<LabeledCase>& data, const TrainOptions& options);

void SaveClassifier(const ValidityClassifier& classifier,
                    const std::filesystem::path& path);
std::shared_ptr<const ValidityClassifier> LoadClassifier(
    const std::filesystem::path& path);
std::shared_ptr<const ValidityClassifier> ClassifierFromJson(const Json& json);

struct FilterMetrics {
  double accuracy = 0.0;
  double f1_valid = 0.0;
  size_t true_positive = 0;
  size_t false_positive = 0;
  size_t true_negative = 0;
  size_t false_negative = 0;
};

// Metrics from predictions (positive class = valid).
FilterMetrics MetricsFromPredictions(const std::vector<bool>& predicted,
                                     const std::vector<bool>& actual);

// Errors: kEmptyTestSet.
FilterMetrics EvaluateFilter(const ValidityClassifier& classifier,
                             const std::vector<LabeledCase>& test_set);

Json FilterMetricsToJson(const FilterMetrics& metrics);

struct ApplyResult {
  std::vector<TestCase> kept;      // validity = valid
  std::vector<TestCase> rejected;  // validity = invalid
};

// Errors: kModelNotLoaded when `classifier` is null.
ApplyResult ApplyFilter(const std::shared_ptr<const ValidityClassifier>& classifier,
                        const std::vector<TestCase>& cases);

}  // namespace testaug

#endif  // TESTAUG_CLASSIFIER_H_
