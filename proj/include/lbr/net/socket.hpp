/*
 * Copyright (c) 2026 lbr-kit contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <netinet/in.h>

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lbr::net {

class NetError : public std::runtime_error {
 public:
  enum class Code { Bind, Resolve, Io };

  NetError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

struct Endpoint {
  sockaddr_in addr{};

  static Endpoint resolve(const std::string& host, std::uint16_t port);
  std::uint16_t port() const;
  std::string to_string() const;
  /// Stable identifier (address and port packed into one integer).
  std::uint64_t id() const;
};

/// Owns a file descriptor; closes it on destruction.
class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& o) noexcept : fd_(o.release()) {}
  Fd& operator=(Fd&& o) noexcept;
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd();

  int get() const { return fd_; }
  int release();
  explicit operator bool() const { return fd_ >= 0; }

 private:
  int fd_{-1};
};

struct Received {
  std::vector<std::uint8_t> bytes;
  Endpoint from;
};

class UdpSocket {
 public:
  /// Port 0 picks an ephemeral port.
  static UdpSocket bind(const std::string& address, std::uint16_t port);

  void send_to(std::span<const std::uint8_t> bytes, const Endpoint& to);
  /// Waits at most `timeout` for one datagram.
  std::optional<Received> receive(std::chrono::milliseconds timeout);

  std::uint16_t local_port() const;
  int fd() const { return fd_.get(); }

 private:
  explicit UdpSocket(Fd fd) : fd_(std::move(fd)) {}
  Fd fd_;
};

/// Newline-delimited line transport over one TCP connection.
class LineStream {
 public:
  static LineStream connect(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout);
  explicit LineStream(Fd fd) : fd_(std::move(fd)) {}

  void write_line(const std::string& line);
  /// Returns nothing on timeout; throws NetError(Io) when the peer closed.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);
  /// Non-blocking: complete lines already received. Sets `closed` when the
  /// peer hung up.
  std::vector<std::string> poll_lines(bool& closed);

 private:
  bool fill();  // true when the peer closed
  std::optional<std::string> take_line();

  Fd fd_;
  std::string buffer_;
};

/// Listening TCP socket; accept() never blocks.
class TcpListener {
 public:
  static TcpListener bind(const std::string& address, std::uint16_t port);
  std::optional<LineStream> accept();
  std::uint16_t local_port() const;

 private:
  explicit TcpListener(Fd fd) : fd_(std::move(fd)) {}
  Fd fd_;
};

}  // namespace lbr::net
