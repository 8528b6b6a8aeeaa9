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

// Command-line front end: vocabulary and model training, encoding,
// decoding, and the trial benchmark.
//
// Exit codes: 0 success, 2 decoding failure, 3 I/O or configuration error.

#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stegtok/bits.h"
#include "stegtok/bpe.h"
#include "stegtok/bridge.h"
#include "stegtok/codec.h"
#include "stegtok/error.h"
#include "stegtok/harness.h"
#include "stegtok/io.h"
#include "stegtok/ngram.h"
#include "stegtok/vocab.h"

namespace {

using namespace stegtok;

constexpr int kExitDecodeFailure = 2;
constexpr int kExitConfigError = 3;

struct ModelOptions {
  std::string vocab;
  std::string lm;
  std::string bridge_cmd;
  std::string bridge_tcp;
  int bridge_timeout_ms = 30000;
};

struct CodecOptions {
  std::string prompt_file;
  std::string p = "1/100";
  std::string method = "proposed";
  std::size_t msg_len_bits = 0;
  std::string trace_out;
};

void AddModelOptions(CLI::App *cmd, ModelOptions &opts) {
  cmd->add_option("--vocab", opts.vocab, "Vocabulary file")->required();
  auto *lm = cmd->add_option("--lm", opts.lm, "N-gram model file");
  auto *bcmd = cmd->add_option("--bridge-cmd", opts.bridge_cmd,
                               "LM server command (stdio transport)");
  auto *btcp = cmd->add_option("--bridge-tcp", opts.bridge_tcp,
                               "LM server address HOST:PORT");
  lm->excludes(bcmd)->excludes(btcp);
  bcmd->excludes(btcp);
  cmd->add_option("--bridge-timeout-ms", opts.bridge_timeout_ms,
                  "Bridge request timeout");
}

void AddCodecOptions(CLI::App *cmd, CodecOptions &opts) {
  cmd->add_option("--prompt-file", opts.prompt_file, "Prompt text file");
  cmd->add_option("--p", opts.p, "Candidate threshold NUM/DEN")
      ->capture_default_str();
  cmd->add_option("--method", opts.method, "proposed or unaware")
      ->check(CLI::IsMember({"proposed", "unaware"}))
      ->capture_default_str();
  cmd->add_option("--trace-out", opts.trace_out, "Write the step trace here");
}

struct LoadedModel {
  Vocabulary vocab;
  std::unique_ptr<NextTokenModel> model;
};

LoadedModel LoadModel(const ModelOptions &opts, const Rational &p) {
  LoadedModel loaded{LoadVocab(opts.vocab), nullptr};
  if (!opts.lm.empty()) {
    loaded.model = std::make_unique<NGramModel>(LoadNGram(opts.lm));
    if (loaded.model->vocab_size() != loaded.vocab.size()) {
      throw Error(Errc::kInvalidArgument,
                  "model and vocabulary sizes differ");
    }
    return loaded;
  }
  BridgeConfig config;
  config.timeout = std::chrono::milliseconds(opts.bridge_timeout_ms);
  config.min_score = p;
  config.max_candidates = p > 0
      ? static_cast<std::size_t>(BigInt(denominator(p) / numerator(p)))
      : loaded.vocab.size();
  if (!opts.bridge_cmd.empty()) {
    config.transport = BridgeConfig::Transport::kStdio;
    config.command = opts.bridge_cmd;
  } else if (!opts.bridge_tcp.empty()) {
    auto colon = opts.bridge_tcp.rfind(':');
    if (colon == std::string::npos) {
      throw Error(Errc::kInvalidArgument, "--bridge-tcp expects HOST:PORT");
    }
    config.transport = BridgeConfig::Transport::kTcp;
    config.host = opts.bridge_tcp.substr(0, colon);
    config.port = static_cast<std::uint16_t>(
        std::stoul(opts.bridge_tcp.substr(colon + 1)));
  } else {
    throw Error(Errc::kInvalidArgument,
                "one of --lm, --bridge-cmd, --bridge-tcp is required");
  }
  config.Validate();
  loaded.model = std::make_unique<BridgeModel>(config, loaded.vocab);
  return loaded;
}

CodecParams MakeParams(const CodecOptions &opts) {
  CodecParams params;
  params.p = ParseFraction(opts.p);
  params.method = ParseMethod(opts.method);
  params.msg_len_bits = opts.msg_len_bits;
  return params;
}

std::string ReadPrompt(const std::string &path) {
  return path.empty() ? std::string() : ReadFile(path);
}

int ExitCodeFor(const Error &e) {
  switch (e.code()) {
    case Errc::kDesynchronized:
    case Errc::kTruncatedCover:
    case Errc::kTokenNotInCandidateSet:
      return kExitDecodeFailure;
    default:
      return kExitConfigError;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Linguistic steganography with ambiguity-free decoding"};
  app.require_subcommand(1);

  // train-vocab
  std::string corpus;
  std::size_t vocab_size = 1000;
  std::string out;
  auto *train_vocab = app.add_subcommand("train-vocab", "Train a BPE vocabulary");
  train_vocab->add_option("corpus", corpus, "Corpus file")->required();
  train_vocab->add_option("--size", vocab_size, "Target vocabulary size")
      ->capture_default_str();
  train_vocab->add_option("--out", out, "Output vocabulary file")->required();

  // train-lm
  std::string lm_vocab;
  int order = 3;
  auto *train_lm = app.add_subcommand("train-lm", "Train an n-gram model");
  train_lm->add_option("corpus", corpus, "Corpus file")->required();
  train_lm->add_option("--vocab", lm_vocab, "Vocabulary file")->required();
  train_lm->add_option("--order", order, "N-gram order")->capture_default_str();
  train_lm->add_option("--out", out, "Output model file")->required();

  // encode
  ModelOptions enc_model;
  CodecOptions enc_codec;
  std::string message_hex;
  auto *encode = app.add_subcommand(
      "encode", "Hide a message; writes the cover text to stdout");
  AddModelOptions(encode, enc_model);
  AddCodecOptions(encode, enc_codec);
  encode->add_option("--message-hex", message_hex, "Secret message in hex")
      ->required();
  encode->add_option("--msg-len-bits", enc_codec.msg_len_bits,
                     "Message length (default: 4 bits per hex digit)");

  // decode
  ModelOptions dec_model;
  CodecOptions dec_codec;
  std::string cover_file;
  auto *decode = app.add_subcommand(
      "decode", "Recover a message; writes it in hex to stdout");
  AddModelOptions(decode, dec_model);
  AddCodecOptions(decode, dec_codec);
  decode->add_option("--msg-len-bits", dec_codec.msg_len_bits,
                     "Message length in bits")
      ->required();
  decode->add_option("--cover-file", cover_file,
                     "Cover text file (default: stdin)");

  // bench
  std::string config_path;
  std::string csv_out;
  std::size_t threads = 0;
  auto *bench = app.add_subcommand("bench", "Run seeded trials");
  bench->add_option("--config", config_path, "Trial configuration")->required();
  bench->add_option("--out", out, "JSON report file")->required();
  bench->add_option("--csv", csv_out, "Also write a CSV summary");
  bench->add_option("--threads", threads, "Worker threads (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (*train_vocab) {
      SaveVocab(TrainBpe(ReadFile(corpus), vocab_size), out);
    } else if (*train_lm) {
      Vocabulary vocab = LoadVocab(lm_vocab);
      std::vector<TokenId> ids = GreedyTokenize(ReadFile(corpus), vocab);
      SaveNGram(NGramModel::Train(ids, order, vocab.size()), out);
    } else if (*encode) {
      if (enc_codec.msg_len_bits == 0) {
        enc_codec.msg_len_bits = 4 * message_hex.size();
      }
      CodecParams params = MakeParams(enc_codec);
      LoadedModel loaded = LoadModel(enc_model, params.p);
      BitString message =
          BitString::FromHex(message_hex, params.msg_len_bits);
      EncodeResult result = Encode(message, ReadPrompt(enc_codec.prompt_file),
                                   *loaded.model, loaded.vocab, params);
      std::cout << result.cover << std::flush;
      if (!enc_codec.trace_out.empty()) {
        WriteFile(enc_codec.trace_out, TraceJson(result.trace));
      }
    } else if (*decode) {
      CodecParams params = MakeParams(dec_codec);
      LoadedModel loaded = LoadModel(dec_model, params.p);
      std::string cover = cover_file.empty()
          ? std::string(std::istreambuf_iterator<char>(std::cin), {})
          : ReadFile(cover_file);
      std::string prompt = ReadPrompt(dec_codec.prompt_file);
      BitString message;
      Trace trace;
      if (params.method == Method::kProposed) {
        auto result = DecodeProposed(cover, prompt, *loaded.model,
                                     loaded.vocab, params);
        message = std::move(result.message);
        trace = std::move(result.trace);
      } else {
        auto result = DecodeUnaware(cover, prompt, *loaded.model,
                                    loaded.vocab, params);
        message = std::move(result.message);
        trace = std::move(result.trace);
      }
      if (!dec_codec.trace_out.empty()) {
        WriteFile(dec_codec.trace_out, TraceJson(trace));
      }
      std::cout << message.ToHex() << "\n";
    } else if (*bench) {
      std::filesystem::path path(config_path);
      TrialConfig config =
          ParseTrialConfig(ReadFile(path), path.parent_path());
      if (threads != 0) config.threads = threads;
      if (config.vocab.empty() || config.lm.empty()) {
        throw Error(Errc::kInvalidArgument,
                    "bench config needs \"vocab\" and \"lm\"");
      }
      Vocabulary vocab = LoadVocab(config.vocab);
      NGramModel model = LoadNGram(config.lm);
      TrialReport report = RunTrials(config, model, vocab);
      WriteFile(out, EmitReport(report, ReportFormat::kJson, vocab));
      if (!csv_out.empty()) {
        WriteFile(csv_out, EmitReport(report, ReportFormat::kCsv, vocab));
      }
      for (const MethodSummary &summary : report.methods) {
        std::cerr << MethodName(summary.method) << ": error rate "
                  << FormatFixed(summary.ErrorRatePct(), 4) << "%, "
                  << FormatFixed(summary.BitsPerToken(), 4) << " bits/token"
                  << (summary.protocol_violation ? " [PROTOCOL VIOLATION]" : "")
                  << "\n";
      }
    }
  } catch (const Error &e) {
    std::cerr << "stegtok: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception &e) {
    std::cerr << "stegtok: " << e.what() << "\n";
    return kExitConfigError;
  }
  return 0;
}
