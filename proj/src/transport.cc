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

#include "stegtok/transport.h"

#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include <json.hpp>

#include "stegtok/error.h"

namespace stegtok {
namespace {

std::string ErrnoText(const char *what) {
  return std::string(what) + ": " + std::strerror(errno);
}

}  // namespace

FdTransport::FdTransport(int read_fd, int write_fd)
    : read_fd_(read_fd), write_fd_(write_fd) {}

FdTransport::~FdTransport() { CloseFds(); }

void FdTransport::CloseFds() {
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
  read_fd_ = write_fd_ = -1;
}

void FdTransport::SendLine(std::string_view line) {
  if (line.find('\n') != std::string_view::npos) {
    throw Error(Errc::kTransport, "message contains a newline");
  }
  std::string data(line);
  data.push_back('\n');
  std::size_t sent = 0;
  while (sent < data.size()) {
    // Sockets only; MSG_NOSIGNAL turns a dead peer into EPIPE, not SIGPIPE.
    ssize_t n = ::send(write_fd_, data.data() + sent, data.size() - sent,
                       MSG_NOSIGNAL);
    if (n < 0 && errno == ENOTSOCK) {
      n = ::write(write_fd_, data.data() + sent, data.size() - sent);
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::kTransport, ErrnoText("send"));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string FdTransport::ReceiveLine(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw Error(Errc::kTimeout);
    pollfd pfd{read_fd_, POLLIN, 0};
    int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::kTransport, ErrnoText("poll"));
    }
    if (ready == 0) throw Error(Errc::kTimeout);
    char chunk[4096];
    ssize_t n = ::read(read_fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::kTransport, ErrnoText("read"));
    }
    if (n == 0) throw Error(Errc::kTransport, "connection closed by peer");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

namespace {

// Spawns `sh -c command` with stdin and stdout on one end of a socket pair.
std::pair<int, pid_t> Spawn(const std::string &command) {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    throw Error(Errc::kTransport, ErrnoText("socketpair"));
  }
  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw Error(Errc::kTransport, ErrnoText("fork"));
  }
  if (pid == 0) {
    // Own process group, so teardown reaches anything the shell started.
    ::setpgid(0, 0);
    ::dup2(fds[1], STDIN_FILENO);
    ::dup2(fds[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);  // also in the parent, to close the race
  ::close(fds[1]);
  return {fds[0], pid};
}

}  // namespace

SubprocessTransport::SubprocessTransport(const std::string &command)
    : SubprocessTransport(Spawn(command)) {}

SubprocessTransport::SubprocessTransport(std::pair<int, pid_t> spawned)
    : FdTransport(spawned.first, spawned.first), child_(spawned.second) {}

SubprocessTransport::~SubprocessTransport() {
  CloseFds();
  // Give the server a moment to exit on EOF before terminating it.
  for (int i = 0; i < 100; ++i) {
    if (::waitpid(child_, nullptr, WNOHANG) != 0) return;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ::kill(-child_, SIGTERM);
  ::waitpid(child_, nullptr, 0);
}

std::unique_ptr<LineTransport> ConnectTcp(const std::string &host,
                                          std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
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
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(result);
  if (fd < 0) {
    throw Error(Errc::kTransport,
                "cannot connect to " + host + ":" + std::to_string(port));
  }
  return std::make_unique<FdTransport>(fd, fd);
}

RecordingTransport::RecordingTransport(std::unique_ptr<LineTransport> inner,
                                       const std::filesystem::path &path)
    : inner_(std::move(inner)), out_(path, std::ios::app) {
  if (!out_) throw Error(Errc::kIo, "cannot open " + path.string());
}

void RecordingTransport::SendLine(std::string_view line) {
  pending_request_ = line;
  inner_->SendLine(line);
}

std::string RecordingTransport::ReceiveLine(std::chrono::milliseconds timeout) {
  std::string line = inner_->ReceiveLine(timeout);
  using nlohmann::json;
  json entry;
  try {
    entry = {{"request", json::parse(pending_request_)},
             {"response", json::parse(line)}};
  } catch (const json::exception &e) {
    throw Error(Errc::kMalformedResponse, e.what());
  }
  out_ << entry.dump() << '\n';
  out_.flush();
  return line;
}

}  // namespace stegtok
