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

// Reference LM server for the bridge protocol backed by an n-gram model, or
// a replay of a recorded session. Used for tests and local experiments.

#include <unistd.h>

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "stegtok/error.h"
#include "stegtok/io.h"
#include "stegtok/model_server.h"
#include "stegtok/ngram.h"
#include "stegtok/vocab.h"

int main(int argc, char **argv) {
  using namespace stegtok;
  CLI::App app{"Bridge protocol server over an n-gram model"};
  std::string vocab_path;
  std::string lm_path;
  std::string replay_path;
  std::string tcp;
  std::string name = "ngram";
  app.add_option("--vocab", vocab_path, "Vocabulary file");
  app.add_option("--lm", lm_path, "N-gram model file");
  app.add_option("--replay", replay_path, "Answer from a recorded transcript");
  app.add_option("--tcp", tcp, "Listen on HOST:PORT instead of stdio");
  app.add_flag("--stdio", "Serve on stdin/stdout (default)");
  app.add_option("--name", name, "Model name reported in the handshake");
  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<Vocabulary> vocab;
    std::optional<NGramModel> model;
    std::optional<ModelServer> model_server;
    std::optional<ReplayServer> replay_server;
    LineHandler handler;
    if (!replay_path.empty()) {
      replay_server.emplace(ReadFile(replay_path));
      handler = [&](std::string_view line) { return replay_server->Handle(line); };
    } else {
      if (vocab_path.empty() || lm_path.empty()) {
        throw Error(Errc::kInvalidArgument, "--vocab and --lm are required");
      }
      vocab.emplace(LoadVocab(vocab_path));
      model.emplace(LoadNGram(lm_path));
      model_server.emplace(*model, *vocab, name);
      handler = [&](std::string_view line) { return model_server->Handle(line); };
    }
    if (tcp.empty()) {
      ServeLines(STDIN_FILENO, STDOUT_FILENO, handler);
    } else {
      auto colon = tcp.rfind(':');
      if (colon == std::string::npos) {
        throw Error(Errc::kInvalidArgument, "--tcp expects HOST:PORT");
      }
      auto [fd, port] = ListenTcp(
          tcp.substr(0, colon),
          static_cast<std::uint16_t>(std::stoul(tcp.substr(colon + 1))));
      std::cerr << "listening on port " << port << std::endl;
      ServeTcp(fd, handler, 0);
    }
  } catch (const std::exception &e) {
    std::cerr << "stegtok-lm-server: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
