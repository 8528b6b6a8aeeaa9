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

#include <cstdio>

#include <json.hpp>

#include "stegtok/harness.h"

namespace stegtok {
namespace {

using nlohmann::json;

std::string EscapeBytes(std::string_view bytes) {
  std::string out;
  for (unsigned char c : bytes) {
    if (c < 0x20 || c >= 0x7f || c == '|' || c == '\\') {
      char buf[5];
      std::snprintf(buf, sizeof(buf), "\\x%02X", c);
      out += buf;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

json RationalJson(const Rational &value, int places) {
  return {{"exact", FormatFraction(value)},
          {"decimal", FormatFixed(value, places)}};
}

const TrialOutcome &FindOutcome(const TrialReport &report, std::size_t trial,
                                Method method) {
  const std::size_t per_trial = report.config.methods.size();
  for (std::size_t i = trial * per_trial; i < (trial + 1) * per_trial; ++i) {
    if (report.outcomes[i].method == method) return report.outcomes[i];
  }
  return report.outcomes.at(trial * per_trial);
}

std::string JsonReport(const TrialReport &report, const Vocabulary &vocab) {
  const TrialConfig &config = report.config;
  json methods_echo = json::array();
  for (Method m : config.methods) methods_echo.push_back(MethodName(m));

  json doc;
  doc["config"] = {
      {"trials", config.trials},
      {"corpus", config.corpus.filename().string()},
      {"corpus_sha256", report.corpus_sha256},
      {"max_prompt_bytes", config.max_prompt_bytes},
      {"msg_len_bits", config.msg_len_bits},
      {"seed", config.seed},
      {"p", FormatFraction(config.p)},
      {"methods", methods_echo},
      {"prng_id", config.prng_id},
      {"exemplars", config.exemplars},
      {"vocab", config.vocab.filename().string()},
      {"lm", config.lm.filename().string()},
  };
  doc["prompts"] = {{"count", report.prompt_count},
                    {"wraparounds", report.prompt_wraparounds}};

  json methods = json::array();
  for (const MethodSummary &summary : report.methods) {
    json exemplars = json::array();
    for (std::size_t trial : summary.exemplar_trials) {
      const TrialOutcome &o = FindOutcome(report, trial, summary.method);
      exemplars.push_back({
          {"trial", o.trial},
          {"prompt", EscapeBytes(report.prompts[o.prompt_index])},
          {"kind", FailureKindName(o.failure)},
          {"error", EscapeBytes(o.error)},
          {"sender", RenderTokens(vocab, o.sender_tokens)},
          {"receiver", RenderTokens(vocab, o.receiver_tokens)},
      });
    }
    methods.push_back({
        {"method", MethodName(summary.method)},
        {"trials", summary.trials},
        {"failures", summary.failures},
        {"error_rate_pct", RationalJson(summary.ErrorRatePct(), 4)},
        {"bits_per_token", RationalJson(summary.BitsPerToken(), 12)},
        {"total_bits", summary.total_bits},
        {"total_tokens", summary.total_tokens},
        {"failure_kinds",
         {{"retokenization-mismatch", summary.retokenization_mismatches},
          {"candidate-miss", summary.candidate_misses},
          {"truncated", summary.truncations}}},
        {"protocol_violation", summary.protocol_violation},
        {"exemplars", std::move(exemplars)},
    });
  }
  doc["methods"] = std::move(methods);

  json outcomes = json::array();
  for (const TrialOutcome &o : report.outcomes) {
    outcomes.push_back({{"trial", o.trial},
                        {"method", MethodName(o.method)},
                        {"success", o.success},
                        {"kind", FailureKindName(o.failure)},
                        {"tokens", o.tokens},
                        {"bits", o.bits}});
  }
  doc["outcomes"] = std::move(outcomes);
  return doc.dump(2) + "\n";
}

std::string CsvReport(const TrialReport &report) {
  std::string out = "method,error_rate_pct,bits_per_token,trials,seed\n";
  for (const MethodSummary &summary : report.methods) {
    out += std::string(MethodName(summary.method)) + "," +
           FormatFixed(summary.ErrorRatePct(), 4) + "," +
           FormatFixed(summary.BitsPerToken(), 12) + "," +
           std::to_string(summary.trials) + "," +
           std::to_string(report.config.seed) + "\n";
  }
  return out;
}

}  // namespace

std::string RenderTokens(const Vocabulary &vocab,
                         std::span<const TokenId> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += " | ";
    out += EscapeBytes(vocab.surface(tokens[i]));
  }
  return out;
}

std::string TraceJson(const Trace &trace) {
  json steps = json::array();
  for (const StepRecord &step : trace) {
    steps.push_back({{"step", step.step},
                     {"filtered", step.filtered},
                     {"candidates", step.candidates},
                     {"n", step.n},
                     {"chosen", step.chosen},
                     {"bits", step.bits.ToBinary()}});
  }
  return steps.dump(2) + "\n";
}

std::string EmitReport(const TrialReport &report, ReportFormat format,
                       const Vocabulary &vocab) {
  return format == ReportFormat::kJson ? JsonReport(report, vocab)
                                       : CsvReport(report);
}

}  // namespace stegtok
