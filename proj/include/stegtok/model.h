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

#ifndef STEGTOK_MODEL_H_
#define STEGTOK_MODEL_H_

#include <span>
#include <vector>

#include "stegtok/rational.h"
#include "stegtok/vocab.h"

namespace stegtok {

struct ScoredToken {
  TokenId id = 0;
  BigInt numerator;

  friend bool operator==(const ScoredToken &, const ScoredToken &) = default;
};

// Exact next-token scores: entries[i] scores numerator / denominator. A
// shared denominator lets the codec rank tokens by comparing integers.
// Entries have distinct ids and come in no particular order. Models that
// omit low-scoring tokens return a partial vector; omitted tokens score 0.
struct ScoreVector {
  BigInt denominator = 1;
  std::vector<ScoredToken> entries;

  Rational Score(std::size_t index) const {
    return Rational(entries[index].numerator, denominator);
  }

  friend bool operator==(const ScoreVector &, const ScoreVector &) = default;
};

// Conditional distribution over a vocabulary, shared by sender and
// receiver. Implementations must be pure: the same context always yields the
// same vector, on every platform.
class NextTokenModel {
 public:
  virtual ~NextTokenModel() = default;

  virtual std::size_t vocab_size() const = 0;

  virtual ScoreVector Distribution(std::span<const TokenId> context) const = 0;

  // Tokens scoring below this value may be missing from Distribution(). The
  // codec refuses thresholds below it.
  virtual Rational ScoreFloor() const { return Rational(0); }

  // False when queries share one connection or other mutable state.
  virtual bool SupportsConcurrentQueries() const { return true; }
};

}  // namespace stegtok

#endif  // STEGTOK_MODEL_H_
