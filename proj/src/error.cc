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

#include "testaug/error.h"

namespace testaug {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSlot: return "UnknownSlot";
    case ErrorCode::kFillNotInLexicon: return "FillNotInLexicon";
    case ErrorCode::kMissingFill: return "MissingFill";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kNotEnoughSeeds: return "NotEnoughSeeds";
    case ErrorCode::kEndpointError: return "EndpointError";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kPortInUse: return "PortInUse";
    case ErrorCode::kFixtureParseError: return "FixtureParseError";
    case ErrorCode::kWrongTest: return "WrongTest";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kTrainerEndpointError: return "TrainerEndpointError";
    case ErrorCode::kEmptyTestSet: return "EmptyTestSet";
    case ErrorCode::kModelNotLoaded: return "ModelNotLoaded";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kMissingProvenance: return "MissingProvenance";
    case ErrorCode::kLexiconMismatch: return "LexiconMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTooFewSentences: return "TooFewSentences";
    case ErrorCode::kMalformedTree: return "MalformedTree";
    case ErrorCode::kMissingParses: return "MissingParses";
    case ErrorCode::kEmptyUnion: return "EmptyUnion";
    case ErrorCode::kFractionOutOfRange: return "FractionOutOfRange";
    case ErrorCode::kUnknownCaseId: return "UnknownCaseId";
    case ErrorCode::kMissingPredictions: return "MissingPredictions";
    case ErrorCode::kLabelOutOfSet: return "LabelOutOfSet";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorClass ClassOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEndpointError:
    case ErrorCode::kTrainerEndpointError:
    case ErrorCode::kPortInUse:
      return ErrorClass::kEndpoint;
    case ErrorCode::kConfigError:
    case ErrorCode::kInvalidArgument:
      return ErrorClass::kUsage;
    default:
      return ErrorClass::kData;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code),
      message_(message) {}

}  // namespace testaug
