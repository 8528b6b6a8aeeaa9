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

#include <doctest.h>

#include <json.hpp>
#include <random>

#include "stegtok/codec.h"
#include "stegtok/error.h"
#include "stegtok/harness.h"
#include "test_util.h"

namespace stegtok {
namespace {

TrialConfig SmallConfig(std::size_t trials) {
  TrialConfig config;
  config.trials = trials;
  config.corpus = testing::CorpusPath();
  config.max_prompt_bytes = 40;
  config.msg_len_bits = 64;
  config.seed = 42;
  return config;
}

TEST_CASE("trial messages follow the documented generator") {
  auto finalize = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  for (std::uint64_t seed : {0ull, 42ull, 0xFFFFFFFFFFFFFFFFull}) {
    for (std::size_t trial : {0u, 1u, 999u}) {
      std::mt19937_64 rng(finalize(seed + 0x9E3779B97F4A7C15ull * (trial + 1)));
      std::uint64_t w0 = rng(), w1 = rng();
      BitString expected = BitString::FromWord(w0, 64);
      expected.Append(BitString::FromWord(w1, 16));
      CHECK(TrialMessage(seed, trial, 80) == expected);
      CHECK(TrialMessage(seed, trial, 64) == BitString::FromWord(w0, 64));
    }
  }
  CHECK_FALSE(TrialMessage(1, 0, 64) == TrialMessage(1, 1, 64));
}

TEST_CASE("single proposed trial") {
  const auto &models = testing::TrainedOnCorpus();
  TrialConfig config = SmallConfig(1);
  TrialOutcome o = RunTrial(0, Method::kProposed, "The farmer found the", 0,
                            config, models.model, models.vocab);
  CHECK(o.success);
  CHECK(o.failure == FailureKind::kNone);
  CHECK(o.bits == 64);
  CHECK(o.tokens == o.sender_tokens.size());
  CHECK(o.sender_tokens == o.receiver_tokens);
  CHECK(o.BitsPerToken() == Rational(64, o.tokens));
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  const auto &models = testing::TrainedOnCorpus();
  TrialConfig config = SmallConfig(24);
  std::string serial = EmitReport(RunTrials(config, models.model, models.vocab),
                                  ReportFormat::kJson, models.vocab);
  std::string again = EmitReport(RunTrials(config, models.model, models.vocab),
                                 ReportFormat::kJson, models.vocab);
  config.threads = 4;
  std::string parallel = EmitReport(RunTrials(config, models.model, models.vocab),
                                    ReportFormat::kJson, models.vocab);
  CHECK(serial == again);
  CHECK(serial == parallel);

  // Parse-and-dump reproduces the bytes.
  CHECK(nlohmann::json::parse(serial).dump(2) + "\n" == serial);
}

TEST_CASE("report contents") {
  const auto &models = testing::TrainedOnCorpus();
  TrialConfig config = SmallConfig(30);
  TrialReport report = RunTrials(config, models.model, models.vocab);
  REQUIRE(report.outcomes.size() == 60);
  const MethodSummary &proposed = report.Summary(Method::kProposed);
  CHECK(proposed.failures == 0);
  CHECK_FALSE(proposed.protocol_violation);
  CHECK(proposed.total_bits == 30 * 64);

  // Every unaware failure is a real token-sequence mismatch and every
  // success is an exact match.
  for (const TrialOutcome &o : report.outcomes) {
    if (o.method != Method::kUnaware) continue;
    bool same = o.sender_tokens ==
                GreedyTokenize(Detokenize(models.vocab, o.sender_tokens), models.vocab);
    CHECK(o.success == same);
  }

  nlohmann::json doc = nlohmann::json::parse(
      EmitReport(report, ReportFormat::kJson, models.vocab));
  CHECK(doc["config"]["seed"] == 42);
  CHECK(doc["config"]["p"] == "1/100");
  CHECK(doc["config"]["corpus"] == "corpus.txt");
  CHECK(doc["prompts"]["count"] == report.prompt_count);
  auto &m0 = doc["methods"][0];
  CHECK(m0["method"] == "proposed");
  CHECK(m0["error_rate_pct"]["decimal"] == "0.0000");
  Rational exact = ParseFraction(m0["bits_per_token"]["exact"].get<std::string>());
  Rational shown = ParseDecimal(m0["bits_per_token"]["decimal"].get<std::string>());
  CHECK(exact == proposed.BitsPerToken());
  Rational diff = exact > shown ? exact - shown : shown - exact;
  CHECK(diff <= Rational(1, 1000000000));

  std::string csv = EmitReport(report, ReportFormat::kCsv, models.vocab);
  CHECK(csv.starts_with("method,error_rate_pct,bits_per_token,trials,seed\n"
                        "proposed,0.0000,"));
  CHECK(csv.find("\nunaware,") != std::string::npos);
}

TEST_CASE("unaware failures are counted with the exhibit model") {
  testing::UnUsAbleFixture fx;
  TrialConfig config = SmallConfig(1);
  config.msg_len_bits = 3;
  // RunTrial draws its own message; search for a trial whose message is 101.
  std::size_t trial = 0;
  while (!(TrialMessage(config.seed, trial, 3) == BitString::FromBinary("101"))) {
    ++trial;
  }
  TrialOutcome o = RunTrial(trial, Method::kUnaware, "", 0, config, fx.model, fx.vocab);
  CHECK_FALSE(o.success);
  CHECK(o.sender_tokens == std::vector<TokenId>{fx.kUn, fx.kUs, fx.kAble});
  CHECK(o.receiver_tokens == std::vector<TokenId>{fx.kUn, fx.kUsable});
  CHECK(o.failure != FailureKind::kNone);
  CHECK(RenderTokens(fx.vocab, o.sender_tokens) == "un | us | able");

  TrialOutcome safe = RunTrial(trial, Method::kProposed, "", 0, config, fx.model, fx.vocab);
  CHECK(safe.success);
}

TEST_CASE("config parsing") {
  std::string text = R"({"trials": 10, "corpus": "c.txt", "seed": 7, "p": "1/50",
                        "methods": ["unaware"], "msg_len_bits": 32,
                        "vocab": "/abs/v.json", "lm": "lm.json"})";
  TrialConfig config = ParseTrialConfig(text, "/base");
  CHECK(config.trials == 10);
  CHECK(config.corpus == std::filesystem::path("/base/c.txt"));
  CHECK(config.vocab == std::filesystem::path("/abs/v.json"));
  CHECK(config.lm == std::filesystem::path("/base/lm.json"));
  CHECK(config.seed == 7);
  CHECK(config.p == Rational(1, 50));
  CHECK(config.methods == std::vector<Method>{Method::kUnaware});
  CHECK(config.msg_len_bits == 32);

  CHECK_THROWS_AS(ParseTrialConfig(R"({"corpus":"c","bogus":1})", "/"), Error);
  CHECK_THROWS_AS(ParseTrialConfig(R"({"trials":5})", "/"), Error);
  CHECK_THROWS_AS(ParseTrialConfig("[1]", "/"), Error);
  CHECK_THROWS_AS(ParseTrialConfig(R"({"corpus":"c","prng_id":"other"})", "/"),
                  Error);
  CHECK_THROWS_AS(ParseTrialConfig(R"({"corpus":"c","p":"3/2"})", "/"), Error);
}

TEST_CASE("prompts") {
  auto dir = std::filesystem::temp_directory_path();
  auto path = dir / "stegtok_prompts.txt";
  WriteFile(path, "first line\n\nsecond\n");
  CHECK(LoadPrompts(path, 0) == std::vector<std::string>{"first line", "second"});
  CHECK(LoadPrompts(path, 3) == std::vector<std::string>{"fir", "sec"});
  WriteFile(path, "\n\n");
  try {
    LoadPrompts(path, 0);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::kEmptyCorpus);
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(LoadPrompts(dir / "stegtok_missing_file.txt", 0), Error);

  const auto &models = testing::TrainedOnCorpus();
  TrialConfig config = SmallConfig(3);
  config.corpus = dir / "stegtok_two_prompts.txt";
  WriteFile(config.corpus, "The cat\nA dog\n");
  TrialReport report = RunTrials(config, models.model, models.vocab);
  CHECK(report.prompt_count == 2);
  CHECK(report.prompt_wraparounds == 1);
  CHECK(report.outcomes[4].prompt_index == 0);
  std::filesystem::remove(config.corpus);
}

}  // namespace
}  // namespace stegtok
