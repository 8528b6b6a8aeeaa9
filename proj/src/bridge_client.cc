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

#include "stegtok/bridge.h"

#include <json.hpp>

#include "stegtok/error.h"

namespace stegtok {
namespace {

using nlohmann::json;

// Shortest plain decimal <= value with at most 30 fractional digits. The
// server cutoff must never exceed the configured min_score.
std::string DecimalAtMost(const Rational &value) {
  constexpr int kPlaces = 30;
  BigInt scale = 1;
  for (int i = 0; i < kPlaces; ++i) scale *= 10;
  BigInt floored = numerator(value) * scale / denominator(value);
  std::string digits = floored.str();
  if (digits.size() <= static_cast<std::size_t>(kPlaces)) {
    digits.insert(0, kPlaces + 1 - digits.size(), '0');
  }
  std::string text = digits.substr(0, digits.size() - kPlaces) + "." +
                     digits.substr(digits.size() - kPlaces);
  while (text.back() == '0') text.pop_back();
  if (text.back() == '.') text.pop_back();
  return text;
}

json ParseResponse(const std::string &line, std::uint64_t expected_id) {
  json response;
  try {
    response = json::parse(line);
  } catch (const json::exception &e) {
    throw Error(Errc::kMalformedResponse, e.what());
  }
  if (!response.is_object() || !response.contains("id") ||
      !response["id"].is_number_unsigned() ||
      response["id"].get<std::uint64_t>() != expected_id) {
    throw Error(Errc::kMalformedResponse,
                "expected id " + std::to_string(expected_id));
  }
  if (response.contains("error")) {
    throw Error(Errc::kServerError, response["error"].is_string()
                                        ? response["error"].get<std::string>()
                                        : response["error"].dump());
  }
  return response;
}

}  // namespace

void BridgeConfig::Validate() const {
  if (timeout.count() <= 0) {
    throw Error(Errc::kInvalidArgument, "bridge timeout must be positive");
  }
  if (min_score < 0 || min_score >= 1) {
    throw Error(Errc::kInvalidArgument, "min_score must be in [0,1)");
  }
  if (transport == Transport::kStdio && command.empty()) {
    throw Error(Errc::kInvalidArgument, "stdio bridge needs a command");
  }
  if (transport == Transport::kTcp && port == 0) {
    throw Error(Errc::kInvalidArgument, "tcp bridge needs a port");
  }
}

BridgeModel::BridgeModel(const BridgeConfig &config, const Vocabulary &vocab)
    : BridgeModel(config,
                  config.transport == BridgeConfig::Transport::kStdio
                      ? std::unique_ptr<LineTransport>(
                            std::make_unique<SubprocessTransport>(
                                config.command))
                      : ConnectTcp(config.host, config.port),
                  vocab) {}

BridgeModel::BridgeModel(const BridgeConfig &config,
                         std::unique_ptr<LineTransport> transport,
                         const Vocabulary &vocab)
    : config_(config), transport_(std::move(transport)) {
  if (config_.timeout.count() <= 0) {
    throw Error(Errc::kInvalidArgument, "bridge timeout must be positive");
  }
  min_score_text_ = DecimalAtMost(config_.min_score);
  floor_ = ParseDecimal(min_score_text_);

  const std::uint64_t id = next_id_++;
  json hello = {{"id", id}, {"op", "hello"}, {"proto", kBridgeProtocolVersion}};
  json response = ParseResponse(Exchange(hello.dump()), id);
  try {
    vocab_size_ = response.at("vocab_size").get<std::size_t>();
    model_name_ = response.at("model").get<std::string>();
    const std::string fingerprint = response.at("fingerprint").get<std::string>();
    if (vocab_size_ != vocab.size() || fingerprint != VocabFingerprint(vocab)) {
      throw Error(Errc::kVocabularyMismatch,
                  "server '" + model_name_ + "' reports " +
                      std::to_string(vocab_size_) + " tokens, fingerprint " +
                      fingerprint);
    }
  } catch (const json::exception &e) {
    throw Error(Errc::kMalformedResponse, e.what());
  }

  std::size_t required = vocab_size_;
  if (floor_ > 0) {
    required = std::min<std::size_t>(
        vocab_size_,
        static_cast<std::size_t>(BigInt(denominator(floor_) / numerator(floor_))));
  }
  if (config_.max_candidates < required) {
    throw Error(Errc::kInvalidArgument,
                "max_candidates " + std::to_string(config_.max_candidates) +
                    " can cut tokens above min_score; need " +
                    std::to_string(required));
  }
}

std::string BridgeModel::Exchange(const std::string &request) const {
  transport_->SendLine(request);
  return transport_->ReceiveLine(config_.timeout);
}

ScoreVector BridgeModel::Distribution(std::span<const TokenId> context) const {
  const std::uint64_t id = next_id_++;
  json request = {{"id", id},
                  {"op", "dist"},
                  {"context", std::vector<TokenId>(context.begin(), context.end())},
                  {"min_score", min_score_text_},
                  {"max_candidates", config_.max_candidates}};
  json response = ParseResponse(Exchange(request.dump()), id);

  std::vector<std::pair<TokenId, Rational>> scored;
  try {
    const json &tokens = response.at("tokens");
    if (!tokens.is_array()) throw Error(Errc::kMalformedResponse, "tokens");
    for (const json &entry : tokens) {
      auto token = entry.at("id").get<std::uint64_t>();
      if (token >= vocab_size_) {
        throw Error(Errc::kMalformedResponse,
                    "token id " + std::to_string(token) + " out of range");
      }
      Rational score;
      try {
        score = ParseDecimal(entry.at("score").get<std::string>());
      } catch (const Error &e) {
        throw Error(Errc::kMalformedResponse, e.what());
      }
      scored.emplace_back(static_cast<TokenId>(token), std::move(score));
    }
  } catch (const json::exception &e) {
    throw Error(Errc::kMalformedResponse, e.what());
  }
  if (scored.empty()) {
    throw Error(Errc::kInsufficientCandidates, "server returned no tokens");
  }
  std::vector<bool> seen(vocab_size_, false);
  for (const auto &[token, score] : scored) {
    if (seen[token]) {
      throw Error(Errc::kMalformedResponse,
                  "token id " + std::to_string(token) + " repeated");
    }
    seen[token] = true;
  }
  for (std::size_t i = 1; i < scored.size(); ++i) {
    const auto &[prev_id, prev_score] = scored[i - 1];
    const auto &[cur_id, cur_score] = scored[i];
    bool ordered = prev_score > cur_score ||
                   (prev_score == cur_score && prev_id < cur_id);
    if (!ordered) {
      throw Error(Errc::kMalformedResponse,
                  "tokens not sorted by (score desc, id asc)");
    }
  }

  ScoreVector scores;
  for (const auto &[token, score] : scored) {
    scores.denominator =
        boost::multiprecision::lcm(scores.denominator, BigInt(denominator(score)));
  }
  for (auto &[token, score] : scored) {
    scores.entries.push_back(
        {token, numerator(score) * (scores.denominator / denominator(score))});
  }
  return scores;
}

}  // namespace stegtok
