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

#include <algorithm>
#include <random>
#include <set>

#include "stegtok/codec.h"
#include "stegtok/error.h"
#include "stegtok/ngram.h"
#include "test_util.h"

namespace stegtok {
namespace {

using testing::BytesPlus;
using testing::TableModel;

// Candidates over owned surfaces, ranked in the given order.
struct CandidateSet {
  std::vector<std::string> surfaces;
  std::vector<Candidate> candidates;

  explicit CandidateSet(std::vector<std::string> s) : surfaces(std::move(s)) {
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
      candidates.push_back({static_cast<TokenId>(i), surfaces[i],
                            Rational(1, i + 2), i});
    }
  }
};

std::vector<std::string> SurfacesOf(std::span<const Candidate> candidates) {
  std::vector<std::string> out;
  for (const Candidate &c : candidates) out.emplace_back(c.surface);
  return out;
}

// Keep i unless a longer surface extends it or an equal surface ranks higher
// (the latter only matters when nothing extends them).
std::vector<std::size_t> DisambiguateOracle(const std::vector<std::string> &s) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < s.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (j == i) continue;
      if (s[j].size() > s[i].size() && s[j].starts_with(s[i])) keep = false;
      if (s[j] == s[i] && j < i) keep = false;
    }
    if (keep) kept.push_back(i);
  }
  return kept;
}

ScoreVector Scores(std::vector<std::pair<TokenId, Rational>> row) {
  BigInt den = 1;
  for (const auto &[id, p] : row) {
    den = boost::multiprecision::lcm(den, BigInt(denominator(p)));
  }
  ScoreVector out;
  out.denominator = den;
  for (const auto &[id, p] : row) {
    out.entries.push_back({id, numerator(p) * (den / denominator(p))});
  }
  return out;
}

std::vector<TokenId> Ids(std::span<const Candidate> candidates) {
  std::vector<TokenId> out;
  for (const Candidate &c : candidates) out.push_back(c.id);
  return out;
}

CodecParams Params(Method method, std::size_t bits, Rational p = Rational(1, 100)) {
  CodecParams params;
  params.method = method;
  params.msg_len_bits = bits;
  params.p = p;
  return params;
}

TEST_CASE("threshold filter") {
  Vocabulary vocab = Vocabulary::Bytes();
  ScoreVector scores = Scores({{'d', Rational(1, 20)},
                               {'b', Rational(3, 10)},
                               {'a', Rational(1, 2)},
                               {'c', Rational(3, 20)}});
  auto kept = FilterCandidates(scores, vocab, Rational(1, 10));
  CHECK(Ids(kept) == std::vector<TokenId>{'a', 'b', 'c'});
  CHECK(kept[2].rank == 2);
  CHECK(kept[1].score == Rational(3, 10));
  CHECK(kept[0].surface == "a");

  SUBCASE("boundary is inclusive") {
    CHECK(FilterCandidates(scores, vocab, Rational(3, 20)).size() == 3);
  }
  SUBCASE("uniform keeps all, ties by id") {
    std::vector<std::pair<TokenId, Rational>> row;
    for (TokenId id : {9u, 3u, 7u, 1u}) row.push_back({id, Rational(1, 4)});
    auto all = FilterCandidates(Scores(row), vocab, Rational(1, 4));
    CHECK(Ids(all) == std::vector<TokenId>{1, 3, 7, 9});
  }
  SUBCASE("forced top-1 when nothing qualifies") {
    auto forced = FilterCandidates(scores, vocab, Rational(9, 10));
    CHECK(Ids(forced) == std::vector<TokenId>{'a'});
    ScoreVector tie = Scores({{'y', Rational(1, 2)}, {'x', Rational(1, 2)}});
    CHECK(Ids(FilterCandidates(tie, vocab, Rational(9, 10))) ==
          std::vector<TokenId>{'x'});
  }
  SUBCASE("empty") {
    CHECK_THROWS_AS(FilterCandidates(ScoreVector{}, vocab, Rational(0)), Error);
  }
}

TEST_CASE("disambiguation examples") {
  CandidateSet a({"a", "ab", "abc", "b"});
  auto out = Disambiguate(a.candidates);
  CHECK(SurfacesOf(out) == std::vector<std::string>{"abc", "b"});
  CHECK(out[0].rank == 0);
  CHECK(out[1].rank == 1);
  CHECK(out[0].id == 2);

  CandidateSet b({"usable", "un", "us", "able"});
  CHECK(SurfacesOf(Disambiguate(b.candidates)) ==
        std::vector<std::string>{"usable", "un", "able"});

  CandidateSet twins({"x", "ab", "ab"});
  auto kept = Disambiguate(twins.candidates);
  CHECK(Ids(kept) == std::vector<TokenId>{0, 1});

  CandidateSet extended({"ab", "ab", "abc"});
  CHECK(Ids(Disambiguate(extended.candidates)) == std::vector<TokenId>{2});

  CHECK(Disambiguate(std::span<const Candidate>{}).empty());
}

TEST_CASE("disambiguation matches the brute-force oracle") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 2000; ++round) {
    std::vector<std::string> surfaces;
    for (std::size_t k = 1 + rng() % 12; k > 0; --k) {
      surfaces.push_back(testing::RandomBytes(rng, 1 + rng() % 4, "ab"));
    }
    CandidateSet set(surfaces);
    auto out = Disambiguate(set.candidates);
    std::vector<TokenId> expected;
    for (std::size_t i : DisambiguateOracle(surfaces)) {
      expected.push_back(static_cast<TokenId>(i));
    }
    CHECK(Ids(out) == expected);
    CHECK(testing::IsPrefixFree(SurfacesOf(out)));
    for (std::size_t r = 0; r < out.size(); ++r) CHECK(out[r].rank == r);
  }
}

TEST_CASE("block size") {
  CHECK(BlockSize(1) == 0);
  CHECK(BlockSize(2) == 1);
  CHECK(BlockSize(5) == 2);
  CHECK(BlockSize(8) == 3);
  CHECK(BlockSize(258) == 8);
  CHECK_THROWS_AS(BlockSize(0), Error);
}

TEST_CASE("chunk table assigns rank order") {
  CandidateSet set({"a", "b", "c", "d", "e"});
  ChunkTable table(set.candidates, BlockSize(5));
  CHECK(table.bits() == 2);
  CHECK(table.size() == 4);
  CHECK(table.TokenFor(0).surface == "a");
  CHECK(table.TokenFor(3).surface == "d");
  CHECK(table.ChunkOf(2) == 2u);
  CHECK_FALSE(table.ChunkOf(4).has_value());
  CHECK_THROWS_AS(ChunkTable(set.candidates, 3), Error);
}

TEST_CASE("encoding stops after the last bit") {
  Vocabulary vocab = BytesPlus({"a", "b"});
  NGramModel uniform(2, vocab.size());
  CodecParams params = Params(Method::kProposed, 1, Rational(0));
  EncodeResult one = Encode(BitString::FromBinary("1"), "", uniform, vocab, params);
  REQUIRE(one.tokens.size() == 1);
  CHECK(one.tokens[0] == 128);  // "1" padded to 10000000
  CHECK(one.trace[0].bits.ToBinary() == "1");
  CHECK(one.trace[0].n == 8);
}

TEST_CASE("micro vocabulary against the step oracle") {
  std::vector<std::string> surfaces;
  for (int b = 0; b < 256; ++b) surfaces.emplace_back(1, static_cast<char>(b));
  surfaces.push_back("a");
  surfaces.push_back("b");
  Vocabulary vocab = Vocabulary::FromSurfaces(surfaces);
  NGramModel uniform(3, vocab.size());

  for (Method method : {Method::kProposed, Method::kUnaware}) {
    CAPTURE(MethodName(method));
    SUBCASE("message 0xA") {
      BitString msg = BitString::FromHex("a");
      EncodeResult r = Encode(msg, "", uniform, vocab, Params(method, 4, 0));
      CHECK(r.tokens == std::vector<TokenId>{0xA0});
      CHECK(r.tokens == testing::UniformStepOracle(
                            surfaces, {true, false, true, false},
                            method == Method::kProposed));
      CHECK(r.trace[0].filtered.size() == 258);
      CHECK(r.trace[0].candidates.size() ==
            (method == Method::kProposed ? 256u : 258u));
    }
    SUBCASE("random 16-bit messages") {
      std::mt19937_64 rng(21);
      for (int i = 0; i < 50; ++i) {
        BitString msg = BitString::FromWord(rng(), 16);
        std::vector<bool> bits;
        for (std::size_t j = 0; j < msg.size(); ++j) bits.push_back(msg[j]);
        EncodeResult r = Encode(msg, "", uniform, vocab, Params(method, 16, 0));
        CHECK(r.tokens == testing::UniformStepOracle(
                              surfaces, bits, method == Method::kProposed));
        CHECK(r.tokens.size() == 2);
      }
    }
  }
}

TEST_CASE("the un|us|able exhibit") {
  testing::UnUsAbleFixture fx;
  BitString msg = BitString::FromBinary("101");

  CodecParams unaware = Params(Method::kUnaware, 3);
  EncodeResult sent = Encode(msg, "", fx.model, fx.vocab, unaware);
  CHECK(sent.tokens == std::vector<TokenId>{fx.kUn, fx.kUs, fx.kAble});
  CHECK(sent.cover == "unusable");
  CHECK(GreedyTokenize(sent.cover, fx.vocab) ==
        std::vector<TokenId>{fx.kUn, fx.kUsable});
  bool failed = false;
  try {
    UnawareDecodeResult got = DecodeUnaware(sent.cover, "", fx.model, fx.vocab, unaware);
    failed = !(got.message == msg) || got.retokenization != sent.tokens;
  } catch (const Error &) {
    failed = true;
  }
  CHECK(failed);

  // With disambiguation "us" never appears next to "usable".
  CodecParams proposed = Params(Method::kProposed, 3);
  EncodeResult safe = Encode(msg, "", fx.model, fx.vocab, proposed);
  for (const StepRecord &step : safe.trace) {
    std::set<TokenId> cands(step.candidates.begin(), step.candidates.end());
    CHECK_FALSE((cands.count(fx.kUs) && cands.count(fx.kUsable)));
  }
  CHECK(std::find(safe.tokens.begin(), safe.tokens.end(), fx.kUs) ==
        safe.tokens.end());
  ProposedDecodeResult back = DecodeProposed(safe.cover, "", fx.model, fx.vocab, proposed);
  CHECK(back.message == msg);
  CHECK(back.trace == safe.trace);
  CHECK(back.consumed_bytes == safe.cover.size());
}

TEST_CASE("roundtrips on the corpus model") {
  const auto &models = testing::TrainedOnCorpus();
  std::vector<std::string> prompts = {"The farmer found the", "", "un",
                                      "She said that the"};
  std::mt19937_64 rng(17);
  for (int i = 0; i < 12; ++i) {
    const std::string &prompt = prompts[i % prompts.size()];
    BitString msg = BitString::FromWord(rng(), 64);
    CodecParams params = Params(Method::kProposed, 64);
    EncodeResult sent = Encode(msg, prompt, models.model, models.vocab, params);
    CHECK(sent.cover == Detokenize(models.vocab, sent.tokens));
    ProposedDecodeResult got =
        DecodeProposed(sent.cover, prompt, models.model, models.vocab, params);
    CHECK(got.message == msg);
    CHECK(got.trace == sent.trace);
    CHECK(got.consumed_bytes == sent.cover.size());
    std::size_t bits = 0;
    for (const StepRecord &step : sent.trace) {
      CHECK(testing::IsPrefixFree(
          [&] {
            std::vector<std::string> s;
            for (TokenId id : step.candidates) s.emplace_back(models.vocab.surface(id));
            return s;
          }()));
      bits += step.bits.size();
    }
    CHECK(bits == 64);
  }
}

TEST_CASE("corrupted covers fail cleanly") {
  const auto &models = testing::TrainedOnCorpus();
  std::mt19937_64 rng(23);
  CodecParams params = Params(Method::kProposed, 32);
  for (int i = 0; i < 10; ++i) {
    BitString msg = BitString::FromWord(rng(), 32);
    EncodeResult sent = Encode(msg, "The", models.model, models.vocab, params);
    std::string cover = sent.cover;
    cover[rng() % cover.size()] ^= static_cast<char>(1 + rng() % 255);
    try {
      ProposedDecodeResult got =
          DecodeProposed(cover, "The", models.model, models.vocab, params);
      CHECK((!(got.message == msg) || got.consumed_bytes != cover.size() ||
             got.trace != sent.trace));
    } catch (const Error &e) {
      CHECK((e.code() == Errc::kDesynchronized ||
             e.code() == Errc::kTruncatedCover));
    }
  }
}

TEST_CASE("per-step capacity never grows under disambiguation") {
  Vocabulary vocab = BytesPlus({"un", "us", "usable", "able", "ab", "abl",
                                "u", "usa", "bl", "le"});
  std::mt19937_64 rng(29);
  for (int i = 0; i < 500; ++i) {
    TableModel model(vocab.size());
    TableModel::Row row;
    for (int k = 0; k < 12; ++k) {
      TokenId id = rng() % 2 ? static_cast<TokenId>(256 + rng() % 10)
                             : static_cast<TokenId>('a' + rng() % 26);
      row[id] = Rational(1 + rng() % 50, 1000);
    }
    model.SetFallback(row);
    CodecParams p = Params(Method::kProposed, 8, Rational(1, 100));
    CodecParams u = Params(Method::kUnaware, 8, Rational(1, 100));
    StepPlan sp = PlanStep(model, vocab, {}, p);
    StepPlan su = PlanStep(model, vocab, {}, u);
    CHECK(sp.n <= su.n);
    CHECK(Ids(sp.filtered) == Ids(su.candidates));
  }
}

TEST_CASE("forced steps carry no bits") {
  Vocabulary vocab = BytesPlus({});
  TableModel model(vocab.size());
  model.Set({}, {{'x', Rational(1, 4)}, {'y', Rational(1, 4)}});
  model.Set({'x'}, {{'!', Rational(1, 20)}, {'?', Rational(1, 25)}});
  CodecParams params = Params(Method::kProposed, 2, Rational(1, 10));
  EncodeResult r = Encode(BitString::FromBinary("10"), "", model, vocab, params);
  // Step 1 offers x,y and takes bit 1 -> y. Context [y] falls back to the
  // root row again.
  CHECK(r.tokens.size() == 2);
  EncodeResult forced = Encode(BitString::FromBinary("01"), "", model, vocab, params);
  // Step 1 -> x (bit 0); step 2 has nothing >= 1/10 so '!' is forced; step 3
  // context [x,!] backs off to the root row and embeds bit 1 -> y.
  REQUIRE(forced.tokens.size() == 3);
  CHECK(forced.tokens[1] == '!');
  CHECK(forced.trace[1].n == 0);
  CHECK(forced.trace[1].bits.size() == 0);
  CHECK(forced.tokens[2] == 'y');
  CHECK(DecodeProposed(forced.cover, "", model, vocab, params).message ==
        BitString::FromBinary("01"));
  CHECK(DecodeUnaware(forced.cover, "", model, vocab,
                      Params(Method::kUnaware, 2, Rational(1, 10)))
            .message == BitString::FromBinary("01"));
}

TEST_CASE("determinism") {
  const auto &models = testing::TrainedOnCorpus();
  CodecParams params = Params(Method::kProposed, 64);
  BitString msg = BitString::FromHex("0123456789abcdef");
  EncodeResult a = Encode(msg, "The", models.model, models.vocab, params);
  EncodeResult b = Encode(msg, "The", models.model, models.vocab, params);
  CHECK(a.tokens == b.tokens);
  CHECK(a.trace == b.trace);
}

Errc CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::kInvalidArgument;
}

class FlooredModel : public TableModel {
 public:
  using TableModel::TableModel;
  Rational ScoreFloor() const override { return Rational(1, 10); }
};

TEST_CASE("error paths") {
  testing::UnUsAbleFixture fx;
  CodecParams p3 = Params(Method::kProposed, 3);
  CHECK(CodeOf([&] { Encode(BitString::FromBinary("10"), "", fx.model, fx.vocab, p3); }) ==
        Errc::kInvalidArgument);
  CHECK(CodeOf([&] { DecodeProposed("", "", fx.model, fx.vocab, p3); }) ==
        Errc::kTruncatedCover);
  CHECK(CodeOf([&] { DecodeProposed("zzz", "", fx.model, fx.vocab, p3); }) ==
        Errc::kDesynchronized);
  CHECK(CodeOf([&] { DecodeProposed("un", "", fx.model, fx.vocab, p3); }) ==
        Errc::kTruncatedCover);
  CodecParams u3 = Params(Method::kUnaware, 3);
  CHECK(CodeOf([&] { DecodeUnaware("zzz", "", fx.model, fx.vocab, u3); }) ==
        Errc::kTokenNotInCandidateSet);
  CHECK(CodeOf([&] { DecodeUnaware("un", "", fx.model, fx.vocab, u3); }) ==
        Errc::kTruncatedCover);

  // A model that forces one token forever.
  TableModel stuck(fx.vocab.size());
  stuck.SetFallback({{'a', Rational(1)}});
  CodecParams limited = p3;
  limited.max_steps = 10;
  CHECK(CodeOf([&] { Encode(BitString::FromBinary("101"), "", stuck, fx.vocab, limited); }) ==
        Errc::kStepLimitExceeded);

  FlooredModel floored(fx.vocab.size());
  CHECK(CodeOf([&] { Encode(BitString::FromBinary("101"), "", floored, fx.vocab, p3); }) ==
        Errc::kThresholdBelowModelFloor);

  TableModel wrong_size(7);
  CHECK(CodeOf([&] { Encode(BitString::FromBinary("101"), "", wrong_size, fx.vocab, p3); }) ==
        Errc::kInvalidArgument);

  CodecParams bad = p3;
  bad.p = Rational(1);
  CHECK_THROWS_AS(bad.Validate(), Error);
  CHECK(ParseMethod("proposed") == Method::kProposed);
  CHECK(ParseMethod("unaware") == Method::kUnaware);
  CHECK_THROWS_AS(ParseMethod("other"), Error);
}

}  // namespace
}  // namespace stegtok
