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

#ifndef STEGTOK_VOCAB_H_
#define STEGTOK_VOCAB_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stegtok {

using TokenId = std::uint32_t;

// A subword unit. `surface` holds exactly the bytes the token contributes to
// detokenized text: continuation markers ("##") and word-boundary markers
// ("\xe2\x96\x81") are resolved into raw bytes when a vocabulary is built, so
// a word-initial token carries its leading space.
struct Token {
  TokenId id = 0;
  std::string surface;

  friend bool operator==(const Token &, const Token &) = default;
};

// Immutable token inventory shared by sender and receiver.
//
// Invariants, checked on construction:
//   - ids are dense, 0..size()-1, and tokens()[i].id == i;
//   - every surface is non-empty;
//   - each of the 256 byte values is the surface of some token, which makes
//     GreedyTokenize total.
// Several tokens may share a surface.
class Vocabulary {
 public:
  // Throws Error(kDuplicateId | kNonDenseIds | kEmptySurface |
  // kIncompleteByteCoverage).
  explicit Vocabulary(std::vector<Token> tokens);

  // Ids are assigned by position.
  static Vocabulary FromSurfaces(std::vector<std::string> surfaces);
  // The 256 single-byte tokens, id == byte value.
  static Vocabulary Bytes();

  std::size_t size() const { return tokens_.size(); }
  const Token &token(TokenId id) const { return tokens_.at(id); }
  std::string_view surface(TokenId id) const { return tokens_.at(id).surface; }
  std::span<const Token> tokens() const { return tokens_; }

  // Ids whose surface equals `surface`, ascending; empty if none.
  std::span<const TokenId> IdsWithSurface(std::string_view surface) const;

  // Length of the longest surface that is a prefix of `text`, with the
  // smallest id carrying it. Returns {0, 0} when nothing matches.
  std::pair<std::size_t, TokenId> LongestPrefix(std::string_view text) const;

  friend bool operator==(const Vocabulary &a, const Vocabulary &b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  struct TrieNode {
    std::vector<std::pair<unsigned char, std::int32_t>> children;  // sorted
    std::vector<TokenId> ids;  // tokens ending here, ascending
  };

  std::int32_t Child(std::int32_t node, unsigned char byte) const;

  std::vector<Token> tokens_;
  std::vector<TrieNode> trie_;
};

// Concatenation of the surfaces, in order.
std::string Detokenize(std::span<const Token> tokens);
std::string Detokenize(const Vocabulary &vocab, std::span<const TokenId> ids);

// Left-to-right maximal munch: at each position take the longest surface that
// prefixes the remaining bytes; among equal surfaces the smallest id wins.
// This stands in for the off-the-shelf retokenizer a naive receiver runs.
std::vector<TokenId> GreedyTokenize(std::string_view text,
                                    const Vocabulary &vocab);

// Canonical file text: compact JSON with sorted keys,
// {"tokens":[{"bytes":"<base64>","id":0},...],"version":1}. No trailing
// newline.
std::string SerializeVocab(const Vocabulary &vocab);
// Throws Error(kMalformedFile | kUnsupportedVersion | kDuplicateId |
// kNonDenseIds | kEmptySurface | kIncompleteByteCoverage).
Vocabulary ParseVocab(std::string_view text);

void SaveVocab(const Vocabulary &vocab, const std::filesystem::path &path);
Vocabulary LoadVocab(const std::filesystem::path &path);

// Lower-case hex SHA-256 of SerializeVocab(vocab). Exchanged in the bridge
// handshake.
std::string VocabFingerprint(const Vocabulary &vocab);

}  // namespace stegtok

#endif  // STEGTOK_VOCAB_H_
