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

#ifndef STEGTOK_NGRAM_H_
#define STEGTOK_NGRAM_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stegtok/model.h"

namespace stegtok {

// Count-based n-gram model with interpolated add-one backoff, evaluated in
// exact rational arithmetic:
//
//   s_{-1}(t) = 1 / V
//   s_j(t)    = (count(ctx_j -> t) + s_{j-1}(t)) / (total(ctx_j) + 1)
//
// where ctx_j is the last j ids of the query context, j = 0..min(k-1, len).
// Unseen contexts leave the score unchanged. Every score is positive and
// the vector sums to exactly 1.
class NGramModel : public NextTokenModel {
 public:
  struct ContextCounts {
    std::vector<std::pair<TokenId, std::uint64_t>> next;  // ascending id
    std::uint64_t total = 0;

    friend bool operator==(const ContextCounts &,
                           const ContextCounts &) = default;
  };
  using CountTable = std::map<std::vector<TokenId>, ContextCounts>;

  // An untrained model: uniform for every context. Throws
  // Error(kInvalidArgument) for order < 1 or vocab_size == 0.
  NGramModel(int order, std::size_t vocab_size);

  // Counts every m-gram context, 0 <= m < order, left to right. Throws
  // Error(kInvalidArgument) for order < 1 or ids outside the vocabulary.
  static NGramModel Train(std::span<const TokenId> corpus, int order,
                          std::size_t vocab_size);

  // Validates the count table (positive counts, ids in range, context
  // lengths below order, backoff contexts present). Throws
  // Error(kMalformedFile).
  NGramModel(int order, std::size_t vocab_size, CountTable counts);

  int order() const { return order_; }
  std::size_t vocab_size() const override { return vocab_size_; }
  const CountTable &counts() const { return counts_; }

  std::uint64_t Count(std::span<const TokenId> context, TokenId next) const;
  std::uint64_t Total(std::span<const TokenId> context) const;

  ScoreVector Distribution(std::span<const TokenId> context) const override;

  friend bool operator==(const NGramModel &a, const NGramModel &b) {
    return a.order_ == b.order_ && a.vocab_size_ == b.vocab_size_ &&
           a.counts_ == b.counts_;
  }

 private:
  const ContextCounts *Find(std::span<const TokenId> context) const;

  int order_;
  std::size_t vocab_size_;
  CountTable counts_;
};

// {"counts":[{"ctx":[...],"next":[[id,count],...]},...],"order":k,
//  "version":1,"vocab_size":V}, compact with sorted keys; entries sorted by
// context, then id. The empty context is always written.
std::string SerializeNGram(const NGramModel &model);
// Throws Error(kMalformedFile | kUnsupportedVersion).
NGramModel ParseNGram(std::string_view text);

void SaveNGram(const NGramModel &model, const std::filesystem::path &path);
NGramModel LoadNGram(const std::filesystem::path &path);

}  // namespace stegtok

#endif  // STEGTOK_NGRAM_H_
