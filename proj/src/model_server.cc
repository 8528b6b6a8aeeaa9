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

#include "stegtok/model_server.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "stegtok/error.h"
#include "stegtok/rational.h"
#include "stegtok/transport.h"

namespace stegtok {
namespace {

using nlohmann::json;

constexpr int kSignificantDigits = 18;

json ErrorResponse(const json &id, const std::string &message) {
  return {{"id", id}, {"error", message}};
}

}  // namespace

ModelServer::ModelServer(const NextTokenModel &model, const Vocabulary &vocab,
                         std::string name)
    : model_(model),
      vocab_size_(vocab.size()),
      fingerprint_(VocabFingerprint(vocab)),
      name_(std::move(name)) {}

std::string ModelServer::Handle(std::string_view line) {
  json request;
  try {
    request = json::parse(line);
  } catch (const json::exception &e) {
    return ErrorResponse(nullptr, std::string("malformed request: ") + e.what())
        .dump();
  }
  const json id = request.is_object() && request.contains("id")
                      ? request["id"]
                      : json(nullptr);
  try {
    const std::string op = request.at("op").get<std::string>();
    if (op == "hello") {
      if (request.at("proto").get<int>() != 1) {
        return ErrorResponse(id, "unsupported protocol version").dump();
      }
      return json{{"id", id},
                  {"vocab_size", vocab_size_},
                  {"fingerprint", fingerprint_},
                  {"model", name_}}
          .dump();
    }
    if (op != "dist") return ErrorResponse(id, "unknown op '" + op + "'").dump();

    auto context = request.at("context").get<std::vector<TokenId>>();
    for (TokenId t : context) {
      if (t >= vocab_size_) return ErrorResponse(id, "context id range").dump();
    }
    const Rational min_score =
        ParseDecimal(request.at("min_score").get<std::string>());
    const auto max_candidates = request.at("max_candidates").get<std::size_t>();

    ScoreVector scores = model_.Distribution(context);
    // Rounding to 18 significant digits moves a score by less than one part
    // in 10^17, so only tokens this close to the cutoff need formatting.
    const Rational slack(BigInt(1), BigInt("100000000000000000"));
    const Rational prefilter = min_score * (1 - slack);
    struct Sent {
      TokenId id;
      Rational value;
      std::string text;
    };
    std::vector<Sent> sent;
    for (std::size_t i = 0; i < scores.entries.size(); ++i) {
      Rational exact = scores.Score(i);
      if (exact < prefilter) continue;
      std::string text = FormatSignificant(exact, kSignificantDigits);
      Rational value = ParseDecimal(text);
      if (value < min_score) continue;
      sent.push_back({scores.entries[i].id, std::move(value), std::move(text)});
    }
    std::sort(sent.begin(), sent.end(), [](const Sent &a, const Sent &b) {
      if (a.value != b.value) return a.value > b.value;
      return a.id < b.id;
    });
    if (sent.size() > max_candidates) sent.resize(max_candidates);

    json tokens = json::array();
    for (const Sent &s : sent) tokens.push_back({{"id", s.id}, {"score", s.text}});
    return json{{"id", id}, {"tokens", std::move(tokens)}}.dump();
  } catch (const json::exception &e) {
    return ErrorResponse(id, std::string("malformed request: ") + e.what())
        .dump();
  } catch (const Error &e) {
    return ErrorResponse(id, e.what()).dump();
  }
}

ReplayServer::ReplayServer(std::string_view transcript) {
  std::istringstream in{std::string(transcript)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      json entry = json::parse(line);
      json request = entry.at("request");
      json response = entry.at("response");
      request.erase("id");
      response.erase("id");
      responses_[request.dump()] = response.dump();
    } catch (const json::exception &e) {
      throw Error(Errc::kMalformedFile, e.what());
    }
  }
}

std::string ReplayServer::Handle(std::string_view line) {
  json request;
  try {
    request = json::parse(line);
  } catch (const json::exception &e) {
    return ErrorResponse(nullptr, std::string("malformed request: ") + e.what())
        .dump();
  }
  json id = request.is_object() && request.contains("id") ? request["id"]
                                                          : json(nullptr);
  if (request.is_object()) request.erase("id");
  auto it = responses_.find(request.dump());
  if (it == responses_.end()) {
    return ErrorResponse(id, "request not in transcript").dump();
  }
  json response = json::parse(it->second);
  response["id"] = id;
  return response.dump();
}

void ServeLines(int in_fd, int out_fd, const LineHandler &handler) {
  // The descriptors belong to the caller.
  std::string buffer;
  char chunk[4096];
  for (;;) {
    auto newline = buffer.find('\n');
    if (newline != std::string::npos) {
      std::string response = handler(std::string_view(buffer).substr(0, newline));
      buffer.erase(0, newline + 1);
      response.push_back('\n');
      std::size_t written = 0;
      while (written < response.size()) {
        ssize_t n = ::send(out_fd, response.data() + written,
                           response.size() - written, MSG_NOSIGNAL);
        if (n < 0 && errno == ENOTSOCK) {
          n = ::write(out_fd, response.data() + written,
                      response.size() - written);
        }
        if (n < 0) {
          if (errno == EINTR) continue;
          return;
        }
        written += static_cast<std::size_t>(n);
      }
      continue;
    }
    ssize_t n = ::read(in_fd, chunk, sizeof(chunk));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return;
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

std::pair<int, std::uint16_t> ListenTcp(const std::string &host,
                                        std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo *result = nullptr;
  int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints,
                         &result);
  if (rc != 0) {
    throw Error(Errc::kTransport, std::string("getaddrinfo: ") +
                                      ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo *ai = result; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC,
                  ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 8) == 0) {
      break;
    }
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(result);
  if (fd < 0) throw Error(Errc::kTransport, "cannot listen on " + host);

  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr *>(&addr), &len);
  std::uint16_t bound = addr.ss_family == AF_INET6
      ? ntohs(reinterpret_cast<sockaddr_in6 *>(&addr)->sin6_port)
      : ntohs(reinterpret_cast<sockaddr_in *>(&addr)->sin_port);
  return {fd, bound};
}

void ServeTcp(int listen_fd, const LineHandler &handler,
              std::size_t max_connections) {
  for (std::size_t served = 0;
       max_connections == 0 || served < max_connections; ++served) {
    int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::kTransport, std::string("accept: ") + std::strerror(errno));
    }
    ServeLines(fd, fd, handler);
    ::close(fd);
  }
}

}  // namespace stegtok
