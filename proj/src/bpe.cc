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

#include "stegtok/bpe.h"

#include <string>
#include <unordered_map>
#include <vector>

#include "stegtok/error.h"

namespace stegtok {
namespace {

using Pair = std::uint64_t;

Pair MakePair(TokenId left, TokenId right) {
  return (static_cast<Pair>(left) << 32) | right;
}
TokenId Left(Pair pair) { return static_cast<TokenId>(pair >> 32); }
TokenId Right(Pair pair) { return static_cast<TokenId>(pair & 0xffffffffu); }

class PairCounts {
 public:
  void Add(TokenId left, TokenId right, std::int64_t delta) {
    auto it = counts_.try_emplace(MakePair(left, right), 0).first;
    it->second += delta;
    if (it->second == 0) counts_.erase(it);
  }

  const std::unordered_map<Pair, std::int64_t> &counts() const {
    return counts_;
  }

 private:
  std::unordered_map<Pair, std::int64_t> counts_;
};

}  // namespace

Vocabulary TrainBpe(std::string_view corpus, std::size_t target_size) {
  if (corpus.empty()) throw Error(Errc::kEmptyCorpus);
  if (target_size < 256) {
    throw Error(Errc::kInvalidArgument, "target size below 256");
  }

  std::vector<std::string> surfaces;
  for (int byte = 0; byte < 256; ++byte) {
    surfaces.emplace_back(1, static_cast<char>(byte));
  }

  std::vector<TokenId> seq(corpus.begin(), corpus.end());
  for (auto &id : seq) id = static_cast<unsigned char>(id);

  PairCounts pairs;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    pairs.Add(seq[i], seq[i + 1], 1);
  }

  while (surfaces.size() < target_size) {
    Pair best = 0;
    std::int64_t best_count = 0;
    std::string best_surface;
    for (const auto &[pair, count] : pairs.counts()) {
      if (count < best_count) continue;
      std::string merged = surfaces[Left(pair)] + surfaces[Right(pair)];
      if (count > best_count || merged < best_surface ||
          (merged == best_surface && pair < best)) {
        best = pair;
        best_count = count;
        best_surface = std::move(merged);
      }
    }
    if (best_count < 2) break;

    const TokenId left = Left(best);
    const TokenId right = Right(best);
    const auto merged_id = static_cast<TokenId>(surfaces.size());
    surfaces.push_back(std::move(best_surface));

    // Rewrite left to right. For each replaced occurrence, the neighbour on
    // the left is taken from the rewritten output, the one on the right from
    // the original sequence; this keeps the counts exact across runs of
    // adjacent or overlapping occurrences.
    std::vector<TokenId> out;
    out.reserve(seq.size());
    std::size_t i = 0;
    while (i < seq.size()) {
      if (i + 1 < seq.size() && seq[i] == left && seq[i + 1] == right) {
        if (!out.empty()) {
          pairs.Add(out.back(), left, -1);
          pairs.Add(out.back(), merged_id, 1);
        }
        pairs.Add(left, right, -1);
        if (i + 2 < seq.size()) {
          pairs.Add(right, seq[i + 2], -1);
          pairs.Add(merged_id, seq[i + 2], 1);
        }
        out.push_back(merged_id);
        i += 2;
      } else {
        out.push_back(seq[i]);
        ++i;
      }
    }
    seq = std::move(out);
  }

  return Vocabulary::FromSurfaces(std::move(surfaces));
}

}  // namespace stegtok
