// Copyright (c) 2026 The wprompt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wprompt/external_backend.h"

#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "json.hpp"
#include "wprompt/errors.h"
#include "wprompt/protocol.h"

namespace wprompt {
namespace {

void IgnoreSigpipe() {
  static const bool done = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

std::string ErrnoText(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

}  // namespace

FdLineTransport::FdLineTransport(int read_fd, int write_fd, int timeout_ms)
    : read_fd_(read_fd), write_fd_(write_fd), timeout_ms_(timeout_ms) {
  IgnoreSigpipe();
}

FdLineTransport::~FdLineTransport() {
  CloseWrite();
  if (read_fd_ >= 0) ::close(read_fd_);
}

void FdLineTransport::CloseWrite() {
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (write_fd_ == read_fd_ && write_fd_ >= 0) ::shutdown(write_fd_, SHUT_WR);
  write_fd_ = -1;
}

void FdLineTransport::WriteLine(const std::string& line) {
  if (write_fd_ < 0) throw BackendError("transport closed");
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(write_fd_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw BackendError(ErrnoText("write to engine failed"));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string FdLineTransport::ReadLine() {
  for (;;) {
    std::size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    pollfd pfd{read_fd_, POLLIN, 0};
    int ready = ::poll(&pfd, 1, timeout_ms_);
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw BackendError(ErrnoText("poll on engine failed"));
    }
    if (ready == 0) throw BackendError("engine response timed out");
    char chunk[65536];
    ssize_t n = ::read(read_fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw BackendError(ErrnoText("read from engine failed"));
    }
    if (n == 0) throw BackendError("engine closed the stream");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

SubprocessTransport::SubprocessTransport(pid_t pid, int read_fd, int write_fd,
                                         int timeout_ms)
    : FdLineTransport(read_fd, write_fd, timeout_ms), pid_(pid) {}

std::unique_ptr<SubprocessTransport> SubprocessTransport::Spawn(
    const std::vector<std::string>& argv, int timeout_ms) {
  if (argv.empty()) throw ConfigError("empty engine command");
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) throw BackendError(ErrnoText("pipe"));
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw BackendError(ErrnoText("pipe"));
  }
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) throw BackendError(ErrnoText("fork"));
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  return std::unique_ptr<SubprocessTransport>(
      new SubprocessTransport(pid, from_child[0], to_child[1], timeout_ms));
}

SubprocessTransport::~SubprocessTransport() {
  // Closing stdin asks the engine to exit; escalate if it lingers.
  CloseWrite();
  for (int i = 0; i < 100; ++i) {
    if (::waitpid(pid_, nullptr, WNOHANG) != 0) return;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
}

TcpTransport::TcpTransport(int fd, int timeout_ms)
    : FdLineTransport(fd, fd, timeout_ms) {}

std::unique_ptr<TcpTransport> TcpTransport::Connect(const std::string& host,
                                                    int port, int timeout_ms) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res);
      rc != 0) {
    throw BackendError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* p = res; p != nullptr; p = p->ai_next) {
    fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw BackendError("cannot connect to " + host + ":" + service);
  }
  return std::unique_ptr<TcpTransport>(new TcpTransport(fd, timeout_ms));
}

ExternalBackend::ExternalBackend(std::unique_ptr<LineTransport> transport)
    : transport_(std::move(transport)) {}

std::string ExternalBackend::RoundTrip(const std::string& request) {
  transport_->WriteLine(request);
  return transport_->ReadLine();
}

namespace {

nlohmann::json ParseLine(const std::string& line) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw BackendError("engine sent malformed JSON");
  }
}

}  // namespace

BackendInfo ExternalBackend::Info() {
  std::lock_guard<std::mutex> lock(mu_);
  if (!info_) {
    info_ = ParseInfoResponse(ParseLine(RoundTrip(MakeInfoRequest().dump())));
  }
  return *info_;
}

std::vector<float> ExternalBackend::Step(const AudioHandle& audio,
                                         std::span<const TokenId> context) {
  std::lock_guard<std::mutex> lock(mu_);
  return ParseStepResponse(ParseLine(RoundTrip(
      MakeStepRequest(audio, context)
          .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace))));
}

}  // namespace wprompt
