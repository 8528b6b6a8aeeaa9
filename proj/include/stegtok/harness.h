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

#ifndef STEGTOK_HARNESS_H_
#define STEGTOK_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stegtok/bits.h"
#include "stegtok/codec.h"
#include "stegtok/model.h"
#include "stegtok/rational.h"
#include "stegtok/vocab.h"

namespace stegtok {

// Identifier of the message generator. Trial t of a run seeded with s draws
// its message from std::mt19937_64 seeded with
//   splitmix64_finalize(s + 0x9E3779B97F4A7C15 * (t + 1))
// taking successive 64-bit outputs MSB-first. splitmix64_finalize is
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z ^ (z >> 31)
// with wrap-around 64-bit arithmetic.
inline constexpr std::string_view kPrngId = "mt19937_64+splitmix64-seed/v1";

BitString TrialMessage(std::uint64_t seed, std::size_t trial,
                       std::size_t bit_count);

struct TrialConfig {
  std::size_t trials = 1;
  std::filesystem::path corpus;      // one prompt per non-empty line
  std::size_t max_prompt_bytes = 0;  // 0: whole line
  std::size_t msg_len_bits = 64;
  std::uint64_t seed = 0;
  Rational p{1, 100};
  std::vector<Method> methods{Method::kProposed, Method::kUnaware};
  std::string prng_id{kPrngId};
  std::size_t exemplars = 5;  // failing trials kept per method
  // Execution only; never affects report contents.
  std::size_t threads = 1;
  // Used by the bench command to locate models; echoed in reports.
  std::filesystem::path vocab;
  std::filesystem::path lm;

  // Throws Error(kInvalidArgument).
  void Validate() const;
};

// Reads the structured-text form of TrialConfig. Relative paths are
// resolved against `base_dir`. Throws Error(kInvalidArgument | kMalformedFile).
TrialConfig ParseTrialConfig(std::string_view text,
                             const std::filesystem::path &base_dir);

// Non-empty lines of the corpus, each truncated to max_prompt_bytes when
// that is non-zero. Throws Error(kIo) and Error(kEmptyCorpus).
std::vector<std::string> LoadPrompts(const std::filesystem::path &corpus,
                                     std::size_t max_prompt_bytes);

enum class FailureKind {
  kNone,
  kRetokenizationMismatch,
  kCandidateMiss,
  kTruncated,
};
std::string_view FailureKindName(FailureKind kind);

struct TrialOutcome {
  std::size_t trial = 0;
  Method method = Method::kProposed;
  std::size_t prompt_index = 0;
  bool success = false;
  FailureKind failure = FailureKind::kNone;
  std::size_t tokens = 0;  // generated by the sender
  std::size_t bits = 0;    // embedded
  std::vector<TokenId> sender_tokens;
  std::vector<TokenId> receiver_tokens;
  std::string error;  // decoder error text, if any

  Rational BitsPerToken() const {
    return tokens == 0 ? Rational(0) : Rational(bits, tokens);
  }
};

struct MethodSummary {
  Method method = Method::kProposed;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::size_t total_tokens = 0;
  std::size_t total_bits = 0;
  std::size_t retokenization_mismatches = 0;
  std::size_t candidate_misses = 0;
  std::size_t truncations = 0;
  // Set when a proposed-method trial failed or a matching retokenization
  // still decoded wrongly; either indicates a bug, not noise.
  bool protocol_violation = false;
  std::vector<std::size_t> exemplar_trials;

  Rational ErrorRatePct() const { return Rational(100 * failures, trials); }
  // Total embedded bits over total generated tokens.
  Rational BitsPerToken() const {
    return total_tokens == 0 ? Rational(0)
                             : Rational(total_bits, total_tokens);
  }
};

struct TrialReport {
  TrialConfig config;
  std::string corpus_sha256;
  std::size_t prompt_count = 0;
  std::size_t prompt_wraparounds = 0;  // full passes over the prompts - 1
  std::vector<std::string> prompts;    // as used, for exemplar rendering
  std::vector<MethodSummary> methods;
  std::vector<TrialOutcome> outcomes;  // trial-major, config.methods order

  const MethodSummary &Summary(Method method) const;
};

// Runs config.trials trials for each configured method: draw the message,
// encode after the trial's prompt, decode with the method's receiver, and
// classify. A trial fails when the receiver recovers a token sequence
// different from the sender's, even if the bits happen to match. The result
// depends only on (config minus threads, corpus, model, vocab).
TrialReport RunTrials(const TrialConfig &config, const NextTokenModel &model,
                      const Vocabulary &vocab);

// Single trial, exposed for tests.
TrialOutcome RunTrial(std::size_t trial, Method method,
                      std::string_view prompt, std::size_t prompt_index,
                      const TrialConfig &config, const NextTokenModel &model,
                      const Vocabulary &vocab);

enum class ReportFormat { kJson, kCsv };

// JSON: sorted keys, two-space indent, rationals as {"exact":"n/d",
// "decimal":"..."} strings, so parse-and-dump reproduces the bytes. CSV: one
// row per method, columns method,error_rate_pct,bits_per_token,trials,seed.
std::string EmitReport(const TrialReport &report, ReportFormat format,
                       const Vocabulary &vocab);

// Token sequence rendered as "tok | tok | ...", bytes outside printable
// ASCII (and '|' and '\\') escaped as \xHH.
std::string RenderTokens(const Vocabulary &vocab,
                         std::span<const TokenId> tokens);

// [{"bits":"01","candidates":[...],"chosen":t,"filtered":[...],"n":2,
//   "step":0},...] with two-space indent.
std::string TraceJson(const Trace &trace);

}  // namespace stegtok

#endif  // STEGTOK_HARNESS_H_
