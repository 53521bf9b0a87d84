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

#ifndef TESTAUG_ERROR_H_
#define TESTAUG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace testaug {

enum class ErrorCode {
  // suite-core
  kUnknownSlot,
  kFillNotInLexicon,
  kMissingFill,
  kParseError,
  kInvariantViolation,
  kIoError,
  // generation
  kNotEnoughSeeds,
  kEndpointError,
  kConfigError,
  kPortInUse,
  kFixtureParseError,
  // filtering
  kWrongTest,
  kDegenerateData,
  kTrainerEndpointError,
  kEmptyTestSet,
  kModelNotLoaded,
  kNoOverlap,
  // expansion
  kMissingProvenance,
  kLexiconMismatch,
  // metrics
  kEmptyInput,
  kTooFewSentences,
  kMalformedTree,
  kMissingParses,
  // harness
  kEmptyUnion,
  kFractionOutOfRange,
  kUnknownCaseId,
  kMissingPredictions,
  kLabelOutOfSet,
  // generic precondition failure
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// Broad classes used by the CLI to choose an exit status.
enum class ErrorClass { kUsage, kData, kEndpoint };
ErrorClass ClassOf(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }
  // The message without the code-name prefix.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace testaug

#endif  // TESTAUG_ERROR_H_
