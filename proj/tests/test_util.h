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

#ifndef STEGTOK_TESTS_TEST_UTIL_H_
#define STEGTOK_TESTS_TEST_UTIL_H_

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "stegtok/bpe.h"
#include "stegtok/error.h"
#include "stegtok/io.h"
#include "stegtok/model.h"
#include "stegtok/ngram.h"
#include "stegtok/transport.h"
#include "stegtok/vocab.h"

namespace stegtok::testing {

inline std::filesystem::path DataDir() { return STEGTOK_DATA_DIR; }
inline std::filesystem::path CorpusPath() { return DataDir() / "corpus.txt"; }

// The 256 byte tokens followed by `extra` surfaces (ids 256, 257, ...).
inline Vocabulary BytesPlus(const std::vector<std::string> &extra) {
  std::vector<std::string> surfaces;
  for (int b = 0; b < 256; ++b) surfaces.emplace_back(1, static_cast<char>(b));
  surfaces.insert(surfaces.end(), extra.begin(), extra.end());
  return Vocabulary::FromSurfaces(std::move(surfaces));
}

// Vocabulary and order-3 model trained on the bundled corpus, built once.
struct CorpusModels {
  Vocabulary vocab;
  NGramModel model;
};
inline const CorpusModels &TrainedOnCorpus(std::size_t vocab_size = 1000) {
  static std::map<std::size_t, CorpusModels> cache;
  auto it = cache.find(vocab_size);
  if (it == cache.end()) {
    std::string corpus = ReadFile(CorpusPath());
    Vocabulary vocab = TrainBpe(corpus, vocab_size);
    NGramModel model =
        NGramModel::Train(GreedyTokenize(corpus, vocab), 3, vocab.size());
    it = cache.emplace(vocab_size, CorpusModels{std::move(vocab),
                                                std::move(model)})
             .first;
  }
  return it->second;
}

// Model defined by a lookup table of exact probabilities. Contexts not in
// the table fall back to `fallback` (or to uniform when it is empty).
class TableModel : public NextTokenModel {
 public:
  using Row = std::map<TokenId, Rational>;

  explicit TableModel(std::size_t vocab_size) : vocab_size_(vocab_size) {}

  void Set(std::vector<TokenId> context, Row row) {
    rows_[std::move(context)] = std::move(row);
  }
  void SetFallback(Row row) { fallback_ = std::move(row); }

  std::size_t vocab_size() const override { return vocab_size_; }

  ScoreVector Distribution(std::span<const TokenId> context) const override {
    // Longest suffix of the context present in the table.
    const Row *row = nullptr;
    for (std::size_t m = context.size() + 1; m-- > 0;) {
      auto it = rows_.find(std::vector<TokenId>(context.end() - m, context.end()));
      if (it != rows_.end()) {
        row = &it->second;
        break;
      }
    }
    if (row == nullptr && !fallback_.empty()) row = &fallback_;
    ScoreVector scores;
    if (row == nullptr) {
      scores.denominator = vocab_size_;
      for (std::size_t i = 0; i < vocab_size_; ++i) {
        scores.entries.push_back({static_cast<TokenId>(i), 1});
      }
      return scores;
    }
    BigInt den = 1;
    for (const auto &[id, p] : *row) {
      den = boost::multiprecision::lcm(den, BigInt(denominator(p)));
    }
    scores.denominator = den;
    for (std::size_t i = 0; i < vocab_size_; ++i) {
      auto it = row->find(static_cast<TokenId>(i));
      BigInt num = 0;
      if (it != row->end()) num = numerator(it->second) * (den / denominator(it->second));
      scores.entries.push_back({static_cast<TokenId>(i), num});
    }
    return scores;
  }

 private:
  std::size_t vocab_size_;
  std::map<std::vector<TokenId>, Row> rows_;
  Row fallback_;
};

// Calls a handler in-process instead of talking to a real server. Lines
// queued with Inject() are returned before handler output.
class LoopbackTransport : public LineTransport {
 public:
  explicit LoopbackTransport(std::function<std::string(std::string_view)> handler)
      : handler_(std::move(handler)) {}

  void SendLine(std::string_view line) override {
    ++requests_;
    replies_.push_back(handler_(line));
  }
  std::string ReceiveLine(std::chrono::milliseconds) override {
    if (replies_.empty()) throw Error(Errc::kTimeout);
    std::string line = replies_.front();
    replies_.pop_front();
    return line;
  }
  std::size_t requests() const { return requests_; }

 private:
  std::function<std::string(std::string_view)> handler_;
  std::deque<std::string> replies_;
  std::size_t requests_ = 0;
};

inline std::string RandomBytes(std::mt19937_64 &rng, std::size_t length,
                               std::string_view alphabet) {
  std::string out;
  for (std::size_t i = 0; i < length; ++i) {
    out.push_back(alphabet[rng() % alphabet.size()]);
  }
  return out;
}

// Brute-force prefix test on every ordered pair.
template <typename Surfaces>
bool IsPrefixFree(const Surfaces &surfaces) {
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    for (std::size_t j = 0; j < surfaces.size(); ++j) {
      if (i != j && std::string_view(surfaces[j]).starts_with(surfaces[i])) {
        return false;
      }
    }
  }
  return true;
}


// Vocabulary with {"un","us","usable","able"} at ids 256..259 and a table
// model under which the message "101" makes the sender emit un|us|able.
// Each step offers exactly two tokens at probability 1/2.
struct UnUsAbleFixture {
  Vocabulary vocab = BytesPlus({"un", "us", "usable", "able"});
  TableModel model{vocab.size()};
  static constexpr TokenId kUn = 256, kUs = 257, kUsable = 258, kAble = 259;

  UnUsAbleFixture() {
    const Rational half(1, 2);
    model.Set({}, {{'q', half}, {kUn, half}});
    model.Set({kUn}, {{kUs, half}, {kUsable, half}});
    model.Set({kUn, kUs}, {{'z', half}, {kAble, half}});
  }
};

// Independent single-step encoder for a model that is uniform over every
// token of `surfaces` (ids = indices) at threshold 0. Returns the emitted
// token ids for `message`.
inline std::vector<TokenId> UniformStepOracle(
    const std::vector<std::string> &surfaces, const std::vector<bool> &message,
    bool prefix_free) {
  // Uniform scores: rank order is plain id order.
  std::vector<TokenId> ranked;
  for (TokenId id = 0; id < surfaces.size(); ++id) {
    bool keep = true;
    if (prefix_free) {
      for (TokenId other = 0; other < surfaces.size() && keep; ++other) {
        if (other == id) continue;
        const std::string &a = surfaces[id], &b = surfaces[other];
        bool extends = b.size() > a.size() && b.compare(0, a.size(), a) == 0;
        bool earlier_twin = b == a && other < id;
        if (extends || earlier_twin) keep = false;
      }
      // An equal twin is only kept if nothing longer extends the surface,
      // which the loop above already checks for the survivor too.
    }
    if (keep) ranked.push_back(id);
  }
  int n = 0;
  while ((std::size_t{2} << n) <= ranked.size()) ++n;
  std::vector<TokenId> out;
  std::size_t pos = 0;
  while (pos < message.size()) {
    std::size_t chunk = 0;
    for (int i = 0; i < n; ++i) {
      bool bit = pos + i < message.size() && message[pos + i];
      chunk = chunk * 2 + (bit ? 1 : 0);
    }
    out.push_back(ranked[chunk]);
    if (n == 0) {
      // Every step is forced; the message would never be consumed.
      break;
    }
    pos += n;
  }
  return out;
}

}  // namespace stegtok::testing

#endif  // STEGTOK_TESTS_TEST_UTIL_H_
