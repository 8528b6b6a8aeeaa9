// Copyright 2026 The stegtok Authors.
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

#ifndef STEGTOK_ERROR_H_
#define STEGTOK_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace stegtok {

// Every failure the library reports carries one of these codes, so callers
// (the CLI exit-code mapping, the trial classifier) can branch without
// parsing messages.
enum class Errc {
  kInvalidArgument,
  kIo,
  // vocab
  kEmptyCorpus,
  kMalformedFile,
  kUnsupportedVersion,
  kDuplicateId,
  kNonDenseIds,
  kEmptySurface,
  kIncompleteByteCoverage,
  // codec
  kDesynchronized,
  kTruncatedCover,
  kTokenNotInCandidateSet,
  kInsufficientCandidates,
  kStepLimitExceeded,
  kThresholdBelowModelFloor,
  // bridge
  kVocabularyMismatch,
  kTimeout,
  kMalformedResponse,
  kServerError,
  kTransport,
};

// Short fixed description of a code, e.g. "desynchronized".
std::string_view ErrcName(Errc code);

class Error : public std::runtime_error {
 public:
  explicit Error(Errc code)
      : std::runtime_error(std::string(ErrcName(code))), code_(code) {}
  Error(Errc code, const std::string &detail)
      : std::runtime_error(std::string(ErrcName(code)) + ": " + detail),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace stegtok

#endif  // STEGTOK_ERROR_H_
