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

#ifndef STEGTOK_MODEL_SERVER_H_
#define STEGTOK_MODEL_SERVER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "stegtok/model.h"
#include "stegtok/vocab.h"

namespace stegtok {

using LineHandler = std::function<std::string(std::string_view)>;

// Server side of the bridge protocol over an in-process model. Scores are
// sent as plain decimals with 18 significant digits; tokens are ordered by
// the sent value, then id, and cut at min_score and max_candidates.
class ModelServer {
 public:
  ModelServer(const NextTokenModel &model, const Vocabulary &vocab,
              std::string name);

  // One request line in, one response line out (no terminators). Protocol
  // errors become {"id":..,"error":".."} responses.
  std::string Handle(std::string_view request);

 private:
  const NextTokenModel &model_;
  std::size_t vocab_size_;
  std::string fingerprint_;
  std::string name_;
};

// Answers from a transcript written by RecordingTransport. Requests are
// matched on everything except "id"; the response is re-labelled with the
// incoming id. Unknown requests get an error response.
class ReplayServer {
 public:
  // Throws Error(kMalformedFile).
  explicit ReplayServer(std::string_view transcript);

  std::string Handle(std::string_view request);

 private:
  std::map<std::string, std::string> responses_;  // request sans id -> body
};

// Reads request lines from `in_fd` and writes responses to `out_fd` until
// end of input.
void ServeLines(int in_fd, int out_fd, const LineHandler &handler);

// Listening TCP socket on host:port (port 0 picks a free port). Returns the
// descriptor and the bound port. Throws Error(kTransport).
std::pair<int, std::uint16_t> ListenTcp(const std::string &host,
                                        std::uint16_t port);

// Accepts connections on `listen_fd` and serves each one to completion, in
// order. Returns after `max_connections` connections (0: never).
void ServeTcp(int listen_fd, const LineHandler &handler,
              std::size_t max_connections);

}  // namespace stegtok

#endif  // STEGTOK_MODEL_SERVER_H_
