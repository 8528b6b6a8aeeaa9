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

#include "stegtok/vocab.h"

#include <algorithm>
#include <array>
#include <cstdio>

#include <json.hpp>

#include "encoding.h"
#include "stegtok/error.h"
#include "stegtok/io.h"

namespace stegtok {

using nlohmann::json;

Vocabulary::Vocabulary(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  std::vector<bool> seen(tokens_.size(), false);
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    TokenId id = tokens_[i].id;
    if (id < seen.size() && seen[id]) {
      throw Error(Errc::kDuplicateId, "token id " + std::to_string(id));
    }
    if (id != i) {
      throw Error(Errc::kNonDenseIds, "expected id " + std::to_string(i) +
                                          ", found " + std::to_string(id));
    }
    seen[id] = true;
    if (tokens_[i].surface.empty()) {
      throw Error(Errc::kEmptySurface, "token id " + std::to_string(id));
    }
  }

  trie_.emplace_back();
  for (const Token &token : tokens_) {
    std::int32_t node = 0;
    for (unsigned char byte : token.surface) {
      std::int32_t next = Child(node, byte);
      if (next < 0) {
        next = static_cast<std::int32_t>(trie_.size());
        auto &children = trie_[node].children;
        auto pos = std::lower_bound(
            children.begin(), children.end(), byte,
            [](const auto &entry, unsigned char b) { return entry.first < b; });
        children.insert(pos, {byte, next});
        trie_.emplace_back();
      }
      node = next;
    }
    trie_[node].ids.push_back(token.id);
  }

  for (int byte = 0; byte < 256; ++byte) {
    std::int32_t node = Child(0, static_cast<unsigned char>(byte));
    if (node < 0 || trie_[node].ids.empty()) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "0x%02X", byte);
      throw Error(Errc::kIncompleteByteCoverage,
                  std::string("no token for byte ") + buf);
    }
  }
}

Vocabulary Vocabulary::FromSurfaces(std::vector<std::string> surfaces) {
  std::vector<Token> tokens;
  tokens.reserve(surfaces.size());
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    tokens.push_back({static_cast<TokenId>(i), std::move(surfaces[i])});
  }
  return Vocabulary(std::move(tokens));
}

Vocabulary Vocabulary::Bytes() {
  std::vector<std::string> surfaces;
  for (int byte = 0; byte < 256; ++byte) {
    surfaces.emplace_back(1, static_cast<char>(byte));
  }
  return FromSurfaces(std::move(surfaces));
}

std::int32_t Vocabulary::Child(std::int32_t node, unsigned char byte) const {
  const auto &children = trie_[node].children;
  auto pos = std::lower_bound(
      children.begin(), children.end(), byte,
      [](const auto &entry, unsigned char b) { return entry.first < b; });
  if (pos == children.end() || pos->first != byte) return -1;
  return pos->second;
}

std::span<const TokenId> Vocabulary::IdsWithSurface(
    std::string_view surface) const {
  std::int32_t node = 0;
  for (unsigned char byte : surface) {
    node = Child(node, byte);
    if (node < 0) return {};
  }
  return trie_[node].ids;
}

std::pair<std::size_t, TokenId> Vocabulary::LongestPrefix(
    std::string_view text) const {
  std::pair<std::size_t, TokenId> best{0, 0};
  std::int32_t node = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    node = Child(node, static_cast<unsigned char>(text[i]));
    if (node < 0) break;
    if (!trie_[node].ids.empty()) best = {i + 1, trie_[node].ids.front()};
  }
  return best;
}

std::string Detokenize(std::span<const Token> tokens) {
  std::string text;
  for (const Token &token : tokens) text += token.surface;
  return text;
}

std::string Detokenize(const Vocabulary &vocab, std::span<const TokenId> ids) {
  std::string text;
  for (TokenId id : ids) text += vocab.surface(id);
  return text;
}

std::vector<TokenId> GreedyTokenize(std::string_view text,
                                    const Vocabulary &vocab) {
  std::vector<TokenId> ids;
  while (!text.empty()) {
    auto [length, id] = vocab.LongestPrefix(text);
    // Unreachable for a valid vocabulary: every byte is a token.
    if (length == 0) throw Error(Errc::kIncompleteByteCoverage);
    ids.push_back(id);
    text.remove_prefix(length);
  }
  return ids;
}

std::string SerializeVocab(const Vocabulary &vocab) {
  json tokens = json::array();
  for (const Token &token : vocab.tokens()) {
    tokens.push_back(
        {{"id", token.id}, {"bytes", internal::Base64Encode(token.surface)}});
  }
  json doc = {{"version", 1}, {"tokens", std::move(tokens)}};
  return doc.dump();
}

Vocabulary ParseVocab(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(Errc::kMalformedFile, e.what());
  }
  if (!doc.is_object() || !doc.contains("version") ||
      !doc["version"].is_number_integer() || !doc.contains("tokens") ||
      !doc["tokens"].is_array()) {
    throw Error(Errc::kMalformedFile, "expected {\"version\", \"tokens\"}");
  }
  if (doc["version"].get<std::int64_t>() != 1) {
    throw Error(Errc::kUnsupportedVersion,
                "vocabulary version " + doc["version"].dump());
  }
  std::vector<Token> tokens;
  for (const json &entry : doc["tokens"]) {
    if (!entry.is_object() || !entry.contains("id") ||
        !entry["id"].is_number_unsigned() || !entry.contains("bytes") ||
        !entry["bytes"].is_string()) {
      throw Error(Errc::kMalformedFile, "bad token entry " + entry.dump());
    }
    tokens.push_back({entry["id"].get<TokenId>(),
                      internal::Base64Decode(entry["bytes"].get<std::string>())});
  }
  return Vocabulary(std::move(tokens));
}

void SaveVocab(const Vocabulary &vocab, const std::filesystem::path &path) {
  WriteFile(path, SerializeVocab(vocab) + "\n");
}

Vocabulary LoadVocab(const std::filesystem::path &path) {
  return ParseVocab(ReadFile(path));
}

std::string VocabFingerprint(const Vocabulary &vocab) {
  return internal::Sha256Hex(SerializeVocab(vocab));
}

}  // namespace stegtok
