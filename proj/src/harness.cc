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

#include "stegtok/harness.h"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "encoding.h"
#include "stegtok/error.h"
#include "stegtok/io.h"

namespace stegtok {
namespace {

std::uint64_t SplitMix64Finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

FailureKind KindOf(const Error &error) {
  switch (error.code()) {
    case Errc::kDesynchronized:
    case Errc::kTokenNotInCandidateSet:
      return FailureKind::kCandidateMiss;
    case Errc::kTruncatedCover:
      return FailureKind::kTruncated;
    default:
      throw error;  // model or configuration trouble, not a decoding result
  }
}

}  // namespace

BitString TrialMessage(std::uint64_t seed, std::size_t trial,
                       std::size_t bit_count) {
  std::mt19937_64 engine(
      SplitMix64Finalize(seed + 0x9E3779B97F4A7C15ull * (trial + 1)));
  BitString bits;
  while (bits.size() < bit_count) {
    std::uint64_t word = engine();
    std::size_t take = std::min<std::size_t>(64, bit_count - bits.size());
    bits.Append(BitString::FromWord(word, take));
  }
  return bits;
}

void TrialConfig::Validate() const {
  if (trials < 1) throw Error(Errc::kInvalidArgument, "trials must be >= 1");
  if (msg_len_bits < 1) {
    throw Error(Errc::kInvalidArgument, "msg_len_bits must be >= 1");
  }
  if (p < 0 || p >= 1) throw Error(Errc::kInvalidArgument, "p must be in [0,1)");
  if (methods.empty()) throw Error(Errc::kInvalidArgument, "no methods");
  if (prng_id != kPrngId) {
    throw Error(Errc::kInvalidArgument, "unsupported prng '" + prng_id + "'");
  }
  if (threads < 1) throw Error(Errc::kInvalidArgument, "threads must be >= 1");
}

TrialConfig ParseTrialConfig(std::string_view text,
                             const std::filesystem::path &base_dir) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(Errc::kMalformedFile, e.what());
  }
  if (!doc.is_object()) throw Error(Errc::kMalformedFile, "expected object");
  auto resolve = [&](const std::string &path) {
    std::filesystem::path p(path);
    return p.is_absolute() ? p : base_dir / p;
  };
  TrialConfig config;
  try {
    for (const auto &[key, value] : doc.items()) {
      if (key == "trials") {
        config.trials = value.get<std::size_t>();
      } else if (key == "corpus") {
        config.corpus = resolve(value.get<std::string>());
      } else if (key == "max_prompt_bytes") {
        config.max_prompt_bytes = value.get<std::size_t>();
      } else if (key == "msg_len_bits") {
        config.msg_len_bits = value.get<std::size_t>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "p") {
        config.p = ParseFraction(value.get<std::string>());
      } else if (key == "methods") {
        config.methods.clear();
        for (const json &m : value) {
          config.methods.push_back(ParseMethod(m.get<std::string>()));
        }
      } else if (key == "prng_id") {
        config.prng_id = value.get<std::string>();
      } else if (key == "exemplars") {
        config.exemplars = value.get<std::size_t>();
      } else if (key == "threads") {
        config.threads = value.get<std::size_t>();
      } else if (key == "vocab") {
        config.vocab = resolve(value.get<std::string>());
      } else if (key == "lm") {
        config.lm = resolve(value.get<std::string>());
      } else {
        throw Error(Errc::kInvalidArgument, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception &e) {
    throw Error(Errc::kMalformedFile, e.what());
  }
  if (config.corpus.empty()) {
    throw Error(Errc::kInvalidArgument, "config needs a corpus");
  }
  config.Validate();
  return config;
}

std::vector<std::string> LoadPrompts(const std::filesystem::path &corpus,
                                     std::size_t max_prompt_bytes) {
  std::string text = ReadFile(corpus);
  std::vector<std::string> prompts;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (max_prompt_bytes != 0 && line.size() > max_prompt_bytes) {
      line.resize(max_prompt_bytes);
    }
    prompts.push_back(std::move(line));
  }
  if (prompts.empty()) throw Error(Errc::kEmptyCorpus, corpus.string());
  return prompts;
}

std::string_view FailureKindName(FailureKind kind) {
  switch (kind) {
    case FailureKind::kNone: return "none";
    case FailureKind::kRetokenizationMismatch: return "retokenization-mismatch";
    case FailureKind::kCandidateMiss: return "candidate-miss";
    case FailureKind::kTruncated: return "truncated";
  }
  return "unknown";
}

const MethodSummary &TrialReport::Summary(Method method) const {
  for (const MethodSummary &summary : methods) {
    if (summary.method == method) return summary;
  }
  throw Error(Errc::kInvalidArgument,
              "method not in report: " + std::string(MethodName(method)));
}

TrialOutcome RunTrial(std::size_t trial, Method method,
                      std::string_view prompt, std::size_t prompt_index,
                      const TrialConfig &config, const NextTokenModel &model,
                      const Vocabulary &vocab) {
  CodecParams params;
  params.p = config.p;
  params.method = method;
  params.msg_len_bits = config.msg_len_bits;

  const BitString message = TrialMessage(config.seed, trial, config.msg_len_bits);
  EncodeResult sent = Encode(message, prompt, model, vocab, params);

  TrialOutcome outcome;
  outcome.trial = trial;
  outcome.method = method;
  outcome.prompt_index = prompt_index;
  outcome.tokens = sent.tokens.size();
  outcome.bits = message.size();
  outcome.sender_tokens = sent.tokens;

  BitString received;
  bool decoded = false;
  if (method == Method::kProposed) {
    try {
      ProposedDecodeResult result =
          DecodeProposed(sent.cover, prompt, model, vocab, params);
      for (const StepRecord &step : result.trace) {
        outcome.receiver_tokens.push_back(step.chosen);
      }
      received = std::move(result.message);
      decoded = result.consumed_bytes == sent.cover.size();
    } catch (const Error &e) {
      outcome.failure = KindOf(e);
      outcome.error = e.what();
    }
  } else {
    outcome.receiver_tokens = GreedyTokenize(sent.cover, vocab);
    try {
      received = DecodeUnaware(sent.cover, prompt, model, vocab, params).message;
      decoded = true;
    } catch (const Error &e) {
      outcome.failure = KindOf(e);
      outcome.error = e.what();
    }
  }

  const bool same_tokens = outcome.receiver_tokens == outcome.sender_tokens;
  outcome.success = decoded && same_tokens && received == message;
  if (!outcome.success && outcome.failure == FailureKind::kNone) {
    outcome.failure = FailureKind::kRetokenizationMismatch;
  }
  return outcome;
}

TrialReport RunTrials(const TrialConfig &config, const NextTokenModel &model,
                      const Vocabulary &vocab) {
  config.Validate();
  TrialReport report;
  report.config = config;
  report.prompts = LoadPrompts(config.corpus, config.max_prompt_bytes);
  report.corpus_sha256 = internal::Sha256Hex(ReadFile(config.corpus));
  report.prompt_count = report.prompts.size();
  report.prompt_wraparounds = (config.trials - 1) / report.prompt_count;

  const std::size_t per_trial = config.methods.size();
  const std::size_t jobs = config.trials * per_trial;
  report.outcomes.resize(jobs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t trial = job / per_trial;
      const std::size_t prompt_index = trial % report.prompt_count;
      try {
        report.outcomes[job] =
            RunTrial(trial, config.methods[job % per_trial],
                     report.prompts[prompt_index], prompt_index, config, model,
                     vocab);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs;
      }
    }
  };
  std::size_t threads = model.SupportsConcurrentQueries() ? config.threads : 1;
  threads = std::min(threads, jobs);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (Method method : config.methods) {
    MethodSummary summary;
    summary.method = method;
    for (const TrialOutcome &outcome : report.outcomes) {
      if (outcome.method != method) continue;
      ++summary.trials;
      summary.total_tokens += outcome.tokens;
      summary.total_bits += outcome.bits;
      if (outcome.success) continue;
      ++summary.failures;
      switch (outcome.failure) {
        case FailureKind::kRetokenizationMismatch:
          ++summary.retokenization_mismatches;
          break;
        case FailureKind::kCandidateMiss:
          ++summary.candidate_misses;
          break;
        case FailureKind::kTruncated:
          ++summary.truncations;
          break;
        case FailureKind::kNone:
          break;
      }
      if (method == Method::kProposed) summary.protocol_violation = true;
      if (method == Method::kUnaware &&
          outcome.sender_tokens == outcome.receiver_tokens) {
        summary.protocol_violation = true;
      }
      if (summary.exemplar_trials.size() < config.exemplars) {
        summary.exemplar_trials.push_back(outcome.trial);
      }
    }
    report.methods.push_back(std::move(summary));
  }
  return report;
}

}  // namespace stegtok
