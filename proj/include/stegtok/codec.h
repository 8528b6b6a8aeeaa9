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

#ifndef STEGTOK_CODEC_H_
#define STEGTOK_CODEC_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stegtok/bits.h"
#include "stegtok/model.h"
#include "stegtok/rational.h"
#include "stegtok/vocab.h"

namespace stegtok {

enum class Method {
  // Receiver retokenizes the cover with GreedyTokenize. May fail.
  kUnaware,
  // Prefix-free candidate sets and stepwise tokenization at the receiver.
  kProposed,
};

std::string_view MethodName(Method method);  // "unaware" / "proposed"
Method ParseMethod(std::string_view name);   // throws kInvalidArgument

// Parameters both parties agree on out of band.
struct CodecParams {
  Rational p{1, 100};  // candidate threshold, 0 <= p < 1
  Method method = Method::kProposed;
  std::size_t msg_len_bits = 64;
  // Upper bound on generated tokens; 0 selects 16 * msg_len_bits + 256.
  // Guards against models that force a token at every step.
  std::size_t max_steps = 0;

  // Throws Error(kInvalidArgument) when an invariant is broken.
  void Validate() const;
  std::size_t StepLimit() const {
    return max_steps != 0 ? max_steps : 16 * msg_len_bits + 256;
  }
};

// Candidates are ranked by (score desc, id asc); rank is the 0-based
// position in that order.
struct Candidate {
  TokenId id = 0;
  std::string_view surface;  // points into the Vocabulary
  Rational score;
  std::size_t rank = 0;
};

// Every token scoring >= p, ranked. If none qualifies, the single top token
// (ties to the smallest id) is returned so the step emits a forced token.
// Throws Error(kInsufficientCandidates) for an empty score vector.
std::vector<Candidate> FilterCandidates(const ScoreVector &scores,
                                        const Vocabulary &vocab,
                                        const Rational &p);

// Drops every candidate whose surface is a byte-prefix of another
// candidate's surface. Of several equal surfaces the best-ranked survives,
// unless a longer candidate extends them all. Survivors keep their order and
// are re-ranked densely. The result is prefix-free.
std::vector<Candidate> Disambiguate(std::span<const Candidate> candidates);

// floor(log2(count)). Throws Error(kInvalidArgument) for count == 0.
int BlockSize(std::size_t count);

// Bit chunks for the top 2^n candidates: rank r gets the n-bit value r,
// read MSB-first. Lower-ranked candidates get no chunk.
class ChunkTable {
 public:
  // Throws Error(kInvalidArgument) if fewer than 2^n candidates are given.
  ChunkTable(std::span<const Candidate> candidates, int n);

  int bits() const { return bits_; }
  std::size_t size() const { return tokens_.size(); }
  const Candidate &TokenFor(std::uint64_t chunk) const {
    return tokens_.at(chunk);
  }
  std::optional<std::uint64_t> ChunkOf(TokenId id) const;
  std::span<const Candidate> entries() const { return tokens_; }

 private:
  int bits_;
  std::vector<Candidate> tokens_;
};

// The candidate construction both parties run at every step: threshold
// filter, then (proposed only) disambiguation, then n from the surviving
// count, then chunk assignment.
struct StepPlan {
  std::vector<Candidate> filtered;
  std::vector<Candidate> candidates;  // == filtered for kUnaware
  int n = 0;
  ChunkTable Chunks() const { return ChunkTable(candidates, n); }
};

StepPlan PlanStep(const NextTokenModel &model, const Vocabulary &vocab,
                  std::span<const TokenId> context, const CodecParams &params);

// Audit record of one generation step.
struct StepRecord {
  std::size_t step = 0;
  std::vector<TokenId> filtered;    // before disambiguation, rank order
  std::vector<TokenId> candidates;  // after disambiguation, rank order
  int n = 0;
  TokenId chosen = 0;
  BitString bits;  // n bits, fewer only on the final padded step

  friend bool operator==(const StepRecord &, const StepRecord &) = default;
};
using Trace = std::vector<StepRecord>;

struct EncodeResult {
  std::vector<TokenId> tokens;  // generated tokens, prompt excluded
  std::string cover;            // Detokenize(tokens)
  Trace trace;
};

// Generates tokens after the greedily tokenized prompt, emitting at each step
// the candidate whose chunk equals the next n message bits. The last chunk is
// right-padded with zeros; generation stops right after the step that
// consumes the final bit.
//
// Throws Error(kInvalidArgument) if message.size() != params.msg_len_bits,
// Error(kThresholdBelowModelFloor), Error(kStepLimitExceeded), and whatever
// the model throws.
EncodeResult Encode(const BitString &message, std::string_view prompt,
                    const NextTokenModel &model, const Vocabulary &vocab,
                    const CodecParams &params);

struct ProposedDecodeResult {
  BitString message;
  std::size_t consumed_bytes = 0;
  Trace trace;
};

// Stepwise tokenization: replays the sender's candidate sets and at each step
// consumes the unique chunk-bearing candidate whose surface prefixes the rest
// of the cover.
//
// Throws Error(kDesynchronized) when no candidate matches and
// Error(kTruncatedCover) when the cover runs out first.
ProposedDecodeResult DecodeProposed(std::string_view cover,
                                    std::string_view prompt,
                                    const NextTokenModel &model,
                                    const Vocabulary &vocab,
                                    const CodecParams &params);

struct UnawareDecodeResult {
  BitString message;
  std::vector<TokenId> retokenization;  // GreedyTokenize(cover)
  Trace trace;
};

// The naive receiver: GreedyTokenize the cover, then look each token up in
// the replayed candidate sets. Silent wrong bits are possible.
//
// Throws Error(kTokenNotInCandidateSet) and Error(kTruncatedCover).
UnawareDecodeResult DecodeUnaware(std::string_view cover,
                                  std::string_view prompt,
                                  const NextTokenModel &model,
                                  const Vocabulary &vocab,
                                  const CodecParams &params);

}  // namespace stegtok

#endif  // STEGTOK_CODEC_H_
