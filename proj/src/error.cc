// Copyright 2026 The kgsyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kgsyn/error.h"

namespace kgsyn {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownEntity: return "UnknownEntity";
    case ErrorCode::kKindMismatch: return "KindMismatch";
    case ErrorCode::kDuplicateTriple: return "DuplicateTriple";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMissingEmbedding: return "MissingEmbedding";
    case ErrorCode::kExhaustedCandidates: return "ExhaustedCandidates";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kEmptySurface: return "EmptySurface";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kEmptyCandidates: return "EmptyCandidates";
    case ErrorCode::kEmptySplit: return "EmptySplit";
    case ErrorCode::kGoldMissing: return "GoldMissing";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kBadSplitTag: return "BadSplitTag";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptChecksum: return "CorruptChecksum";
    case ErrorCode::kSpecInvalid: return "SpecInvalid";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

ErrorClass error_class(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFiniteLoss:
      return ErrorClass::kNumeric;
    case ErrorCode::kConfigError:
      return ErrorClass::kUsage;
    default:
      return ErrorClass::kData;
  }
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

void check_dims(std::size_t a, std::size_t b, std::string_view what) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " (" + std::to_string(a) + " vs " +
                    std::to_string(b) + ")");
  }
}

}  // namespace kgsyn
