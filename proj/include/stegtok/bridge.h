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

#ifndef STEGTOK_BRIDGE_H_
#define STEGTOK_BRIDGE_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "stegtok/model.h"
#include "stegtok/rational.h"
#include "stegtok/transport.h"
#include "stegtok/vocab.h"

namespace stegtok {

inline constexpr int kBridgeProtocolVersion = 1;

struct BridgeConfig {
  enum class Transport { kStdio, kTcp };

  Transport transport = Transport::kStdio;
  std::string command;  // kStdio: server command line, run under /bin/sh
  std::string host = "127.0.0.1";  // kTcp
  std::uint16_t port = 0;          // kTcp
  std::chrono::milliseconds timeout{30000};
  // Server-side cutoff. Must not exceed the codec threshold; the codec
  // enforces this through NextTokenModel::ScoreFloor().
  Rational min_score{1, 100};
  // Must be large enough that no token scoring >= min_score can be cut:
  // floor(1 / min_score), or the vocabulary size when min_score is 0.
  std::size_t max_candidates = 1024;

  // Throws Error(kInvalidArgument).
  void Validate() const;
};

// NextTokenModel backed by an external LM server speaking the line protocol:
//
//   -> {"id":1,"op":"hello","proto":1}
//   <- {"id":1,"vocab_size":V,"fingerprint":"<hex>","model":"<name>"}
//   -> {"id":2,"op":"dist","context":[...],"min_score":"<decimal>",
//       "max_candidates":K}
//   <- {"id":2,"tokens":[{"id":t,"score":"<decimal>"},...]}
//   <- {"id":N,"error":"<message>"}
//
// The handshake runs in the constructor; a server whose vocabulary size or
// fingerprint differs from the local Vocabulary is rejected before any step.
// Distribution() returns only the tokens the server reported, scored by
// their parsed decimal values. One request is in flight at a time, so the
// model is not safe for concurrent queries.
class BridgeModel : public NextTokenModel {
 public:
  // Throws Error(kVocabularyMismatch | kTimeout | kMalformedResponse |
  // kServerError | kTransport | kInvalidArgument).
  BridgeModel(const BridgeConfig &config, const Vocabulary &vocab);
  BridgeModel(const BridgeConfig &config,
              std::unique_ptr<LineTransport> transport,
              const Vocabulary &vocab);

  std::size_t vocab_size() const override { return vocab_size_; }
  const std::string &model_name() const { return model_name_; }

  // Throws the same errors as the constructor, and
  // Error(kInsufficientCandidates) for an empty token list.
  ScoreVector Distribution(std::span<const TokenId> context) const override;

  Rational ScoreFloor() const override { return floor_; }
  bool SupportsConcurrentQueries() const override { return false; }

 private:
  std::string Exchange(const std::string &request) const;

  BridgeConfig config_;
  std::unique_ptr<LineTransport> transport_;
  std::size_t vocab_size_ = 0;
  std::string model_name_;
  std::string min_score_text_;
  Rational floor_;
  mutable std::uint64_t next_id_ = 1;
};

}  // namespace stegtok

#endif  // STEGTOK_BRIDGE_H_
