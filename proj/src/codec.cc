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

#include "stegtok/codec.h"

#include <algorithm>
#include <bit>
#include <numeric>

#include "stegtok/error.h"

namespace stegtok {
namespace {

void Rerank(std::vector<Candidate> &candidates) {
  for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i].rank = i;
}

std::vector<TokenId> Ids(std::span<const Candidate> candidates) {
  std::vector<TokenId> ids;
  ids.reserve(candidates.size());
  for (const Candidate &c : candidates) ids.push_back(c.id);
  return ids;
}

void CheckModel(const NextTokenModel &model, const Vocabulary &vocab,
                const CodecParams &params) {
  params.Validate();
  if (model.vocab_size() != vocab.size()) {
    throw Error(Errc::kInvalidArgument,
                "model and vocabulary sizes differ");
  }
  if (params.p < model.ScoreFloor()) throw Error(Errc::kThresholdBelowModelFloor);
}

}  // namespace

std::string_view MethodName(Method method) {
  return method == Method::kProposed ? "proposed" : "unaware";
}

Method ParseMethod(std::string_view name) {
  if (name == "proposed") return Method::kProposed;
  if (name == "unaware") return Method::kUnaware;
  throw Error(Errc::kInvalidArgument, "unknown method '" + std::string(name) +
                                          "'");
}

void CodecParams::Validate() const {
  if (p < 0 || p >= 1) throw Error(Errc::kInvalidArgument, "p must be in [0,1)");
  if (msg_len_bits < 1) {
    throw Error(Errc::kInvalidArgument, "msg_len_bits must be >= 1");
  }
}

std::vector<Candidate> FilterCandidates(const ScoreVector &scores,
                                        const Vocabulary &vocab,
                                        const Rational &p) {
  if (scores.entries.empty()) throw Error(Errc::kInsufficientCandidates);

  // score >= p  <=>  numerator * den(p) >= num(p) * denominator
  const BigInt scaled_threshold = numerator(p) * scores.denominator;
  const BigInt &p_den = denominator(p);

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < scores.entries.size(); ++i) {
    if (scores.entries[i].numerator * p_den >= scaled_threshold) {
      kept.push_back(i);
    }
  }
  auto better = [&](std::size_t a, std::size_t b) {
    const ScoredToken &x = scores.entries[a];
    const ScoredToken &y = scores.entries[b];
    if (x.numerator != y.numerator) return x.numerator > y.numerator;
    return x.id < y.id;
  };
  if (kept.empty()) {
    std::vector<std::size_t> all(scores.entries.size());
    std::iota(all.begin(), all.end(), 0);
    kept.push_back(*std::min_element(all.begin(), all.end(), better));
  }
  std::sort(kept.begin(), kept.end(), better);

  std::vector<Candidate> candidates;
  candidates.reserve(kept.size());
  for (std::size_t i : kept) {
    TokenId id = scores.entries[i].id;
    candidates.push_back({id, vocab.surface(id), scores.Score(i), 0});
  }
  Rerank(candidates);
  return candidates;
}

std::vector<Candidate> Disambiguate(std::span<const Candidate> candidates) {
  // In byte-lexicographic order every string that extends s sits directly
  // after s (and after any copies of s), so one look at the next distinct
  // surface decides whether a group of equal surfaces is a proper prefix.
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Candidate &x = candidates[a];
    const Candidate &y = candidates[b];
    if (x.surface != y.surface) return x.surface < y.surface;
    return x.rank < y.rank;
  });

  std::vector<bool> keep(candidates.size(), false);
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    const std::string_view surface = candidates[order[i]].surface;
    while (j < order.size() && candidates[order[j]].surface == surface) ++j;
    bool extended =
        j < order.size() && candidates[order[j]].surface.starts_with(surface);
    if (!extended) keep[order[i]] = true;
    i = j;
  }

  std::vector<Candidate> survivors;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (keep[i]) survivors.push_back(candidates[i]);
  }
  Rerank(survivors);
  return survivors;
}

int BlockSize(std::size_t count) {
  if (count == 0) throw Error(Errc::kInvalidArgument, "empty candidate set");
  return static_cast<int>(std::bit_width(count)) - 1;
}

ChunkTable::ChunkTable(std::span<const Candidate> candidates, int n)
    : bits_(n) {
  if (n < 0 || n >= 63 || candidates.size() < (std::size_t{1} << n)) {
    throw Error(Errc::kInvalidArgument, "fewer than 2^n candidates");
  }
  tokens_.assign(candidates.begin(),
                 candidates.begin() + (std::size_t{1} << n));
}

std::optional<std::uint64_t> ChunkTable::ChunkOf(TokenId id) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].id == id) return i;
  }
  return std::nullopt;
}

StepPlan PlanStep(const NextTokenModel &model, const Vocabulary &vocab,
                  std::span<const TokenId> context, const CodecParams &params) {
  StepPlan plan;
  plan.filtered = FilterCandidates(model.Distribution(context), vocab, params.p);
  plan.candidates = params.method == Method::kProposed
                        ? Disambiguate(plan.filtered)
                        : plan.filtered;
  plan.n = BlockSize(plan.candidates.size());
  return plan;
}

EncodeResult Encode(const BitString &message, std::string_view prompt,
                    const NextTokenModel &model, const Vocabulary &vocab,
                    const CodecParams &params) {
  CheckModel(model, vocab, params);
  if (message.size() != params.msg_len_bits) {
    throw Error(Errc::kInvalidArgument, "message length != msg_len_bits");
  }

  EncodeResult result;
  std::vector<TokenId> context = GreedyTokenize(prompt, vocab);
  std::size_t pos = 0;
  while (pos < message.size()) {
    if (result.trace.size() >= params.StepLimit()) {
      throw Error(Errc::kStepLimitExceeded);
    }
    StepPlan plan = PlanStep(model, vocab, context, params);
    ChunkTable chunks = plan.Chunks();
    std::uint64_t chunk = message.ReadPadded(pos, plan.n);
    const Candidate &chosen = chunks.TokenFor(chunk);

    StepRecord record;
    record.step = result.trace.size();
    record.filtered = Ids(plan.filtered);
    record.candidates = Ids(plan.candidates);
    record.n = plan.n;
    record.chosen = chosen.id;
    std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(plan.n),
                              message.size() - pos);
    for (std::size_t i = 0; i < take; ++i) record.bits.push_back(message[pos + i]);
    pos += take;

    result.tokens.push_back(chosen.id);
    result.cover += chosen.surface;
    context.push_back(chosen.id);
    result.trace.push_back(std::move(record));
  }
  return result;
}

ProposedDecodeResult DecodeProposed(std::string_view cover,
                                    std::string_view prompt,
                                    const NextTokenModel &model,
                                    const Vocabulary &vocab,
                                    const CodecParams &params) {
  CheckModel(model, vocab, params);
  if (params.method != Method::kProposed) {
    throw Error(Errc::kInvalidArgument, "DecodeProposed needs kProposed");
  }

  ProposedDecodeResult result;
  std::vector<TokenId> context = GreedyTokenize(prompt, vocab);
  std::string_view rest = cover;
  while (result.message.size() < params.msg_len_bits) {
    if (rest.empty()) throw Error(Errc::kTruncatedCover);
    StepPlan plan = PlanStep(model, vocab, context, params);
    ChunkTable chunks = plan.Chunks();

    std::optional<std::uint64_t> match;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      if (rest.starts_with(chunks.TokenFor(i).surface)) {
        match = i;
        break;  // unique: the set is prefix-free
      }
    }
    if (!match) {
      throw Error(Errc::kDesynchronized,
                  "no candidate at step " + std::to_string(result.trace.size()) +
                      ", cover byte " + std::to_string(cover.size() - rest.size()));
    }
    const Candidate &chosen = chunks.TokenFor(*match);

    StepRecord record;
    record.step = result.trace.size();
    record.filtered = Ids(plan.filtered);
    record.candidates = Ids(plan.candidates);
    record.n = plan.n;
    record.chosen = chosen.id;
    BitString chunk_bits;
    chunk_bits.AppendWord(*match, plan.n);
    std::size_t take = std::min<std::size_t>(
        static_cast<std::size_t>(plan.n),
        params.msg_len_bits - result.message.size());
    for (std::size_t i = 0; i < take; ++i) record.bits.push_back(chunk_bits[i]);
    result.message.Append(record.bits);

    rest.remove_prefix(chosen.surface.size());
    context.push_back(chosen.id);
    result.trace.push_back(std::move(record));
  }
  result.consumed_bytes = cover.size() - rest.size();
  return result;
}

UnawareDecodeResult DecodeUnaware(std::string_view cover,
                                  std::string_view prompt,
                                  const NextTokenModel &model,
                                  const Vocabulary &vocab,
                                  const CodecParams &params) {
  CheckModel(model, vocab, params);
  if (params.method != Method::kUnaware) {
    throw Error(Errc::kInvalidArgument, "DecodeUnaware needs kUnaware");
  }

  UnawareDecodeResult result;
  result.retokenization = GreedyTokenize(cover, vocab);
  std::vector<TokenId> context = GreedyTokenize(prompt, vocab);
  for (TokenId token : result.retokenization) {
    if (result.message.size() >= params.msg_len_bits) break;
    StepPlan plan = PlanStep(model, vocab, context, params);
    ChunkTable chunks = plan.Chunks();
    std::optional<std::uint64_t> chunk = chunks.ChunkOf(token);
    if (!chunk) {
      throw Error(Errc::kTokenNotInCandidateSet,
                  "token " + std::to_string(token) + " at step " +
                      std::to_string(result.trace.size()));
    }

    StepRecord record;
    record.step = result.trace.size();
    record.filtered = Ids(plan.filtered);
    record.candidates = Ids(plan.candidates);
    record.n = plan.n;
    record.chosen = token;
    BitString chunk_bits;
    chunk_bits.AppendWord(*chunk, plan.n);
    std::size_t take = std::min<std::size_t>(
        static_cast<std::size_t>(plan.n),
        params.msg_len_bits - result.message.size());
    for (std::size_t i = 0; i < take; ++i) record.bits.push_back(chunk_bits[i]);
    result.message.Append(record.bits);

    context.push_back(token);
    result.trace.push_back(std::move(record));
  }
  if (result.message.size() < params.msg_len_bits) {
    throw Error(Errc::kTruncatedCover);
  }
  return result;
}

}  // namespace stegtok
