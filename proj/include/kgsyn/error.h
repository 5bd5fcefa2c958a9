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

#ifndef KGSYN_ERROR_H_
#define KGSYN_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgsyn {

enum class ErrorCode {
  kUnknownEntity,
  kKindMismatch,
  kDuplicateTriple,
  kDimensionMismatch,
  kMissingEmbedding,
  kExhaustedCandidates,
  kNonFiniteLoss,
  kEmptySurface,
  kEmptyCorpus,
  kEmptyCandidates,
  kEmptySplit,
  kGoldMissing,
  kParseError,
  kBadSplitTag,
  kVersionMismatch,
  kCorruptChecksum,
  kSpecInvalid,
  kConfigError,
  kIoError,
};

// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorClass { kUsage, kData, kNumeric };

std::string_view error_code_name(ErrorCode code);
ErrorClass error_class(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Throws kDimensionMismatch naming `what` unless a == b.
void check_dims(std::size_t a, std::size_t b, std::string_view what);

}  // namespace kgsyn

#endif  // KGSYN_ERROR_H_
