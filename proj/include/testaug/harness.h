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

#ifndef TESTAUG_HARNESS_H_
#define TESTAUG_HARNESS_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "testaug/jsonl.h"
#include "testaug/suite.h"

namespace testaug {

inline constexpr uint64_t kDefaultSeeds[] = {11, 14, 25, 42, 74};
inline constexpr double kDefaultTestFraction = 0.5;

// Fine-tuning hyperparameters handed to external trainers.
struct TrainingHyperparameters {
  double learning_rate = 5e-6;
  int batch_size = 16;
  int epochs = 10;
  int max_seq_length = 128;
  uint64_t training_seed = 42;
};

Json HyperparametersToJson(const TrainingHyperparameters& hp);

struct EvalSplit {
  uint64_t seed = 0;
  double test_fraction = kDefaultTestFraction;
  TaskId task = TaskId::kSentiment;
  // Sorted case ids.
  std::vector<std::string> test_set;
  // Suite name -> sorted case ids of that suite not in test_set.
  std::map<std::string, std::vector<std::string>> train_sets;
  TrainingHyperparameters hyperparameters;
  // Deduplicated union of all suites' cases, and their descriptions.
  std::map<std::string, TestCase> cases;
  std::map<std::string, TestDescription> descriptions;
};

// Samples the test set from the union of `suites` (deduplicated by case id):
// per test, in test id order, ceil(fraction * n) of its ids, drawn from the
// sorted id list with one RNG seeded by `seed`.
//
// Errors: kEmptyUnion; kFractionOutOfRange unless 0 < fraction <= 1;
// kInvalidArgument for mixed tasks or repeated suite names.
EvalSplit MakeSplit(const std::vector<TestSuite>& suites, uint64_t seed,
                    double test_fraction = kDefaultTestFraction);

// Directory with split.json, cases.jsonl and descriptions.jsonl.
void SaveSplit(const EvalSplit& split, const std::filesystem::path& dir);
EvalSplit LoadSplit(const std::filesystem::path& dir);

// Writes train.jsonl, test.jsonl and manifest.json into `out_dir`.
// Errors: kInvalidArgument for an unknown suite; kIoError.
void EmitTrainingJob(const EvalSplit& split, const std::string& suite_name,
                     const std::filesystem::path& out_dir);

// Keeps every case whose origin is not `drop`; templates of dropped expanded
// cases go too.
TestSuite DropOrigin(const TestSuite& suite, Origin drop,
                     const std::string& new_name);

struct PredictionRecord {
  std::string case_id;
  std::string predicted_label;
  std::string model_tag;
};

Json PredictionToJson(const PredictionRecord& record);
std::vector<PredictionRecord> LoadPredictions(const std::filesystem::path& path);

struct GroupRate {
  size_t n = 0;
  size_t failures = 0;
  double rate = 0.0;
};

struct FailureReport {
  std::string model_tag;
  double overall_rate = 0.0;
  size_t n_failures = 0;  // the unnormalized indicator sum
  size_t n_evaluated = 0;
  std::map<std::string, GroupRate> by_capability;
  std::map<std::string, GroupRate> by_test;
  std::vector<std::string> missing_ids;
};

// Failure = predicted label differs from the case label, over test-set
// cases with a prediction. Duplicate predictions: the last one wins.
//
// Errors: kUnknownCaseId (id outside the test set); kLabelOutOfSet;
// kMissingPredictions in strict mode when a test case has no prediction.
FailureReport ScorePredictions(const EvalSplit& split,
                               const std::vector<PredictionRecord>& predictions,
                               bool strict);

Json FailureReportToJson(const FailureReport& report);

// Supplies predictions for the model patched on `suite_name` under `seed`.
class PredictionSource {
 public:
  virtual ~PredictionSource() = default;
  virtual std::vector<PredictionRecord> Predict(const EvalSplit& split,
                                                const std::string& suite_name) = 0;
};

// Reads <root>/<seed>/<suite_name>.jsonl. Errors: kMissingPredictions.
class FilePredictionSource : public PredictionSource {
 public:
  explicit FilePredictionSource(std::filesystem::path root)
      : root_(std::move(root)) {}
  std::vector<PredictionRecord> Predict(const EvalSplit& split,
                                        const std::string& suite_name) override;

 private:
  std::filesystem::path root_;
};

// POSTs {"texts": [...], "suite": name, "seed": n} to <base>/predict for
// every test case and reads {"label": ...}. Errors: kEndpointError.
class EndpointPredictionSource : public PredictionSource {
 public:
  EndpointPredictionSource(std::string base_url,
                           std::chrono::milliseconds timeout);
  std::vector<PredictionRecord> Predict(const EvalSplit& split,
                                        const std::string& suite_name) override;

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

struct SeedRun {
  uint64_t seed = 0;
  std::optional<FailureReport> report;
  std::string error;  // set when the run failed in non-strict mode
};

struct SuiteMatrix {
  std::string suite_name;
  std::vector<SeedRun> runs;
  double mean = 0.0;
  double std = 0.0;  // population
  bool partial = false;
};

struct RunMatrixResult {
  std::vector<uint64_t> seeds;
  std::vector<SuiteMatrix> suites;
};

// Population mean and standard deviation. Errors: kEmptyInput.
std::pair<double, double> MeanStd(const std::vector<double>& values);

// One split per seed over all suites; each suite's model is scored on the
// common test set. In strict mode any failure aborts with an error naming
// the seed; otherwise failed runs are recorded and the suite is flagged
// partial.
RunMatrixResult RunMatrix(const std::vector<TestSuite>& suites,
                          const std::vector<uint64_t>& seeds,
                          PredictionSource& source, bool strict,
                          double test_fraction = kDefaultTestFraction);

Json RunMatrixToJson(const RunMatrixResult& result);

// "12.3 ± 0.4" in percent, as in failure-rate tables.
std::string FormatMeanStd(double mean, double std);

}  // namespace testaug

#endif  // TESTAUG_HARNESS_H_
