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

#ifndef WPROMPT_EXTERNAL_BACKEND_H_
#define WPROMPT_EXTERNAL_BACKEND_H_

#include <sys/types.h>

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "wprompt/backend.h"

namespace wprompt {

// Bidirectional newline-delimited byte stream.
class LineTransport {
 public:
  virtual ~LineTransport() = default;
  virtual void WriteLine(const std::string& line) = 0;
  // Throws BackendError on EOF, timeout or I/O failure.
  virtual std::string ReadLine() = 0;
};

// Buffered line I/O over a pair of file descriptors.
class FdLineTransport : public LineTransport {
 public:
  FdLineTransport(int read_fd, int write_fd, int timeout_ms);
  ~FdLineTransport() override;
  FdLineTransport(const FdLineTransport&) = delete;
  FdLineTransport& operator=(const FdLineTransport&) = delete;

  void WriteLine(const std::string& line) override;
  std::string ReadLine() override;

 protected:
  void CloseWrite();

 private:
  int read_fd_;
  int write_fd_;
  int timeout_ms_;
  std::string buffer_;
};

// Spawns `argv` and talks to it over its stdin/stdout.
class SubprocessTransport : public FdLineTransport {
 public:
  static std::unique_ptr<SubprocessTransport> Spawn(
      const std::vector<std::string>& argv, int timeout_ms = 60000);
  ~SubprocessTransport() override;

 private:
  SubprocessTransport(pid_t pid, int read_fd, int write_fd, int timeout_ms);
  pid_t pid_;
};

// TCP client connection to host:port.
class TcpTransport : public FdLineTransport {
 public:
  static std::unique_ptr<TcpTransport> Connect(const std::string& host,
                                               int port,
                                               int timeout_ms = 60000);

 private:
  TcpTransport(int fd, int timeout_ms);
};

// Backend living in another process, reached through protocol v1.
class ExternalBackend : public Backend {
 public:
  explicit ExternalBackend(std::unique_ptr<LineTransport> transport);

  BackendInfo Info() override;
  std::vector<float> Step(const AudioHandle& audio,
                          std::span<const TokenId> context) override;

 private:
  std::string RoundTrip(const std::string& request);

  std::unique_ptr<LineTransport> transport_;
  std::mutex mu_;
  std::optional<BackendInfo> info_;
};

}  // namespace wprompt

#endif  // WPROMPT_EXTERNAL_BACKEND_H_
