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

#include "stegtok/ngram.h"

#include <algorithm>

#include <json.hpp>

#include "stegtok/error.h"
#include "stegtok/io.h"

namespace stegtok {

using nlohmann::json;

NGramModel::NGramModel(int order, std::size_t vocab_size)
    : order_(order), vocab_size_(vocab_size) {
  if (order < 1) throw Error(Errc::kInvalidArgument, "order must be >= 1");
  if (vocab_size == 0) throw Error(Errc::kInvalidArgument, "empty vocabulary");
  counts_.try_emplace({});
}

NGramModel::NGramModel(int order, std::size_t vocab_size, CountTable counts)
    : NGramModel(order, vocab_size) {
  counts_ = std::move(counts);
  counts_.try_emplace({});
  for (const auto &[context, entry] : counts_) {
    if (context.size() >= static_cast<std::size_t>(order_)) {
      throw Error(Errc::kMalformedFile, "context longer than order - 1");
    }
    for (TokenId id : context) {
      if (id >= vocab_size_) throw Error(Errc::kMalformedFile, "id range");
    }
    std::uint64_t total = 0;
    TokenId previous = 0;
    for (std::size_t i = 0; i < entry.next.size(); ++i) {
      auto [id, count] = entry.next[i];
      if (id >= vocab_size_) throw Error(Errc::kMalformedFile, "id range");
      if (count == 0) throw Error(Errc::kMalformedFile, "zero count");
      if (i > 0 && id <= previous) {
        throw Error(Errc::kMalformedFile, "next ids not ascending");
      }
      previous = id;
      total += count;
    }
    if (total != entry.total) {
      throw Error(Errc::kMalformedFile, "total does not match counts");
    }
    if (!context.empty()) {
      std::vector<TokenId> backoff(context.begin() + 1, context.end());
      if (!counts_.contains(backoff)) {
        throw Error(Errc::kMalformedFile, "missing backoff context");
      }
    }
  }
}

NGramModel NGramModel::Train(std::span<const TokenId> corpus, int order,
                             std::size_t vocab_size) {
  NGramModel model(order, vocab_size);
  std::map<std::vector<TokenId>, std::map<TokenId, std::uint64_t>> tally;
  tally.try_emplace({});
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i] >= vocab_size) {
      throw Error(Errc::kInvalidArgument, "corpus id outside vocabulary");
    }
    for (int m = 0; m < order && static_cast<std::size_t>(m) <= i; ++m) {
      std::vector<TokenId> context(corpus.begin() + (i - m),
                                   corpus.begin() + i);
      ++tally[std::move(context)][corpus[i]];
    }
  }
  for (auto &[context, next] : tally) {
    ContextCounts entry;
    entry.next.assign(next.begin(), next.end());
    for (const auto &[id, count] : entry.next) entry.total += count;
    model.counts_[context] = std::move(entry);
  }
  return model;
}

const NGramModel::ContextCounts *NGramModel::Find(
    std::span<const TokenId> context) const {
  auto it = counts_.find(std::vector<TokenId>(context.begin(), context.end()));
  return it == counts_.end() ? nullptr : &it->second;
}

std::uint64_t NGramModel::Count(std::span<const TokenId> context,
                                TokenId next) const {
  const ContextCounts *entry = Find(context);
  if (entry == nullptr) return 0;
  auto it = std::lower_bound(
      entry->next.begin(), entry->next.end(), next,
      [](const auto &pair, TokenId id) { return pair.first < id; });
  return it != entry->next.end() && it->first == next ? it->second : 0;
}

std::uint64_t NGramModel::Total(std::span<const TokenId> context) const {
  const ContextCounts *entry = Find(context);
  return entry == nullptr ? 0 : entry->total;
}

ScoreVector NGramModel::Distribution(std::span<const TokenId> context) const {
  ScoreVector scores;
  scores.denominator = vocab_size_;
  scores.entries.resize(vocab_size_);
  for (std::size_t id = 0; id < vocab_size_; ++id) {
    scores.entries[id] = {static_cast<TokenId>(id), 1};
  }
  // With s_{j-1} = N / D:  s_j = (c * D + N) / ((total + 1) * D).
  const std::size_t longest =
      std::min(static_cast<std::size_t>(order_ - 1), context.size());
  for (std::size_t m = 0; m <= longest; ++m) {
    const ContextCounts *entry = Find(context.last(m));
    if (entry == nullptr) continue;
    for (const auto &[id, count] : entry->next) {
      scores.entries[id].numerator += scores.denominator * count;
    }
    scores.denominator *= entry->total + 1;
  }
  return scores;
}

std::string SerializeNGram(const NGramModel &model) {
  json counts = json::array();
  for (const auto &[context, entry] : model.counts()) {
    json next = json::array();
    for (const auto &[id, count] : entry.next) next.push_back({id, count});
    counts.push_back({{"ctx", context}, {"next", std::move(next)}});
  }
  json doc = {{"version", 1},
              {"order", model.order()},
              {"vocab_size", model.vocab_size()},
              {"counts", std::move(counts)}};
  return doc.dump();
}

NGramModel ParseNGram(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(Errc::kMalformedFile, e.what());
  }
  try {
    if (doc.at("version").get<int>() != 1) {
      throw Error(Errc::kUnsupportedVersion,
                  "model version " + doc["version"].dump());
    }
    int order = doc.at("order").get<int>();
    auto vocab_size = doc.at("vocab_size").get<std::size_t>();
    if (order < 1 || vocab_size == 0) {
      throw Error(Errc::kMalformedFile, "bad order or vocab_size");
    }
    NGramModel::CountTable counts;
    for (const json &item : doc.at("counts")) {
      auto context = item.at("ctx").get<std::vector<TokenId>>();
      NGramModel::ContextCounts entry;
      for (const json &pair : item.at("next")) {
        if (!pair.is_array() || pair.size() != 2) {
          throw Error(Errc::kMalformedFile, "bad next entry");
        }
        entry.next.emplace_back(pair[0].get<TokenId>(),
                                pair[1].get<std::uint64_t>());
        entry.total += entry.next.back().second;
      }
      if (!counts.emplace(std::move(context), std::move(entry)).second) {
        throw Error(Errc::kMalformedFile, "duplicate context");
      }
    }
    return NGramModel(order, vocab_size, std::move(counts));
  } catch (const json::exception &e) {
    throw Error(Errc::kMalformedFile, e.what());
  }
}

void SaveNGram(const NGramModel &model, const std::filesystem::path &path) {
  WriteFile(path, SerializeNGram(model) + "\n");
}

NGramModel LoadNGram(const std::filesystem::path &path) {
  return ParseNGram(ReadFile(path));
}

}  // namespace stegtok
