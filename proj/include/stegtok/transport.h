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

#ifndef STEGTOK_TRANSPORT_H_
#define STEGTOK_TRANSPORT_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <string_view>
#include <sys/types.h>

namespace stegtok {

// A bidirectional channel of newline-terminated messages.
class LineTransport {
 public:
  virtual ~LineTransport() = default;
  // `line` must not contain '\n'. Throws Error(kTransport).
  virtual void SendLine(std::string_view line) = 0;
  // Next line without its terminator. Throws Error(kTimeout) and
  // Error(kTransport) (including end of stream).
  virtual std::string ReceiveLine(std::chrono::milliseconds timeout) = 0;
};

// Line I/O over a stream socket or pipe pair.
class FdTransport : public LineTransport {
 public:
  // Takes ownership of both descriptors (they may be equal).
  FdTransport(int read_fd, int write_fd);
  ~FdTransport() override;
  FdTransport(const FdTransport &) = delete;
  FdTransport &operator=(const FdTransport &) = delete;

  void SendLine(std::string_view line) override;
  std::string ReceiveLine(std::chrono::milliseconds timeout) override;

 protected:
  void CloseFds();

 private:
  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

// Runs `command` under /bin/sh with its stdin and stdout connected to us.
// The child sees end-of-file on stdin when the transport is destroyed.
class SubprocessTransport : public FdTransport {
 public:
  explicit SubprocessTransport(const std::string &command);
  ~SubprocessTransport() override;

 private:
  SubprocessTransport(std::pair<int, pid_t> spawned);
  pid_t child_;
};

// Connects to host:port. Throws Error(kTransport).
std::unique_ptr<LineTransport> ConnectTcp(const std::string &host,
                                          std::uint16_t port);

// Forwards to `inner` and appends each exchange to `path` as one JSON line,
// {"request":{...},"response":{...}}. Used to capture sessions for replay.
class RecordingTransport : public LineTransport {
 public:
  RecordingTransport(std::unique_ptr<LineTransport> inner,
                     const std::filesystem::path &path);

  void SendLine(std::string_view line) override;
  std::string ReceiveLine(std::chrono::milliseconds timeout) override;

 private:
  std::unique_ptr<LineTransport> inner_;
  std::ofstream out_;
  std::string pending_request_;
};

}  // namespace stegtok

#endif  // STEGTOK_TRANSPORT_H_
