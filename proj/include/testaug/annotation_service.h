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

#ifndef TESTAUG_ANNOTATION_SERVICE_H_
#define TESTAUG_ANNOTATION_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "testaug/annotation_store.h"
#include "testaug/filtering.h"
#include "testaug/jsonl.h"
#include "testaug/suite.h"

namespace testaug {

struct AnnotationServiceOptions {
  std::string guideline_version = "v1";
  std::string guidelines_text =
      "Mark a case valid only if it is fluent and satisfies the test "
      "description with the expected label.";
  // Directory served at "/"; a placeholder page is served when empty.
  std::filesystem::path static_dir;
  size_t phase1_sample_size = kDefaultPhase1SampleSize;
  size_t phase2_target = kDefaultPhase2Target;
  size_t min_annotators = 1;
  std::optional<double> validity_threshold;
  size_t n_seed_examples = 3;
  uint64_t seed = 42;
};

// HTTP backend for validity annotation.
//
//   GET  /api/next?annotator=ID   200 next case with context, 204 when done
//   POST /api/labels              204; 400 malformed, 404 unknown case,
//                                 409 stale guideline_version
//   GET  /api/progress            per-test PhaseState
//   GET  /api/agreement?a=&b=     AgreementReport; 404 without overlap
//
// The queue holds phase-1 tests before phase-2 tests (description order),
// and within a test the candidates in generation order; phase-1 tests only
// offer their first phase1_sample_size candidates. Cases the annotator has
// already labeled are never offered again.
class AnnotationService {
 public:
  AnnotationService(TestSuite seed_suite, std::vector<TestCase> candidates,
                    std::shared_ptr<AnnotationStore> store,
                    AnnotationServiceOptions options = {});
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws kPortInUse.
  int Start(const std::string& host = "127.0.0.1", int port = 0);
  void Stop();
  void Wait();

  // Transport-free handlers used by the HTTP routes.
  std::optional<Json> Next(const std::string& annotator_id);
  struct Status {
    int code = 204;
    std::string error;
  };
  Status PostLabel(const std::string& body);
  Json Progress();
  std::vector<PhaseState> States();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace testaug

#endif  // TESTAUG_ANNOTATION_SERVICE_H_
