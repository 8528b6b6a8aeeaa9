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

#include "stegtok/error.h"

namespace stegtok {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid argument";
    case Errc::kIo: return "i/o error";
    case Errc::kEmptyCorpus: return "empty corpus";
    case Errc::kMalformedFile: return "malformed file";
    case Errc::kUnsupportedVersion: return "unsupported version";
    case Errc::kDuplicateId: return "duplicate id";
    case Errc::kNonDenseIds: return "non-dense ids";
    case Errc::kEmptySurface: return "empty surface";
    case Errc::kIncompleteByteCoverage: return "incomplete byte coverage";
    case Errc::kDesynchronized: return "desynchronized";
    case Errc::kTruncatedCover: return "truncated cover";
    case Errc::kTokenNotInCandidateSet: return "token not in candidate set";
    case Errc::kInsufficientCandidates: return "insufficient candidates";
    case Errc::kStepLimitExceeded: return "step limit exceeded";
    case Errc::kThresholdBelowModelFloor:
      return "threshold below model score floor";
    case Errc::kVocabularyMismatch: return "vocabulary mismatch";
    case Errc::kTimeout: return "timeout";
    case Errc::kMalformedResponse: return "malformed response";
    case Errc::kServerError: return "server error";
    case Errc::kTransport: return "transport error";
  }
  return "unknown error";
}

}  // namespace stegtok
