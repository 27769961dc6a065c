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

#include "lbr/net/socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace lbr::net {

namespace {

std::string errno_text() { return std::strerror(errno); }

sockaddr_in any_address(const std::string& address, std::uint16_t port) {
  return Endpoint::resolve(address, port).addr;
}

bool wait_readable(int fd, std::chrono::milliseconds timeout) {
  pollfd p{fd, POLLIN, 0};
  const int r = ::poll(&p, 1, static_cast<int>(timeout.count()));
  return r > 0 && (p.revents & (POLLIN | POLLHUP | POLLERR));
}

}  // namespace

Endpoint Endpoint::resolve(const std::string& host, std::uint16_t port) {
  Endpoint e;
  e.addr.sin_family = AF_INET;
  e.addr.sin_port = htons(port);
  if (host.empty() || host == "0.0.0.0") {
    e.addr.sin_addr.s_addr = htonl(INADDR_ANY);
    return e;
  }
  if (::inet_pton(AF_INET, host.c_str(), &e.addr.sin_addr) == 1) return e;

  addrinfo hints{};
  hints.ai_family = AF_INET;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || !res)
    throw NetError(NetError::Code::Resolve, "cannot resolve host '" + host + "'");
  e.addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  ::freeaddrinfo(res);
  return e;
}

std::uint16_t Endpoint::port() const { return ntohs(addr.sin_port); }

std::string Endpoint::to_string() const {
  char buf[INET_ADDRSTRLEN] = {};
  ::inet_ntop(AF_INET, &addr.sin_addr, buf, sizeof buf);
  return std::string(buf) + ":" + std::to_string(port());
}

std::uint64_t Endpoint::id() const {
  return (static_cast<std::uint64_t>(ntohl(addr.sin_addr.s_addr)) << 16) | port();
}

Fd& Fd::operator=(Fd&& o) noexcept {
  if (this != &o) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = o.release();
  }
  return *this;
}

Fd::~Fd() {
  if (fd_ >= 0) ::close(fd_);
}

int Fd::release() {
  const int fd = fd_;
  fd_ = -1;
  return fd;
}

UdpSocket UdpSocket::bind(const std::string& address, std::uint16_t port) {
  Fd fd(::socket(AF_INET, SOCK_DGRAM, 0));
  if (!fd) throw NetError(NetError::Code::Bind, "socket(): " + errno_text());
  const sockaddr_in a = any_address(address, port);
  if (::bind(fd.get(), reinterpret_cast<const sockaddr*>(&a), sizeof a) != 0)
    throw NetError(NetError::Code::Bind, "cannot bind UDP " + address + ":" + std::to_string(port) + ": " + errno_text());
  return UdpSocket(std::move(fd));
}

void UdpSocket::send_to(std::span<const std::uint8_t> bytes, const Endpoint& to) {
  const auto n = ::sendto(fd_.get(), bytes.data(), bytes.size(), 0, reinterpret_cast<const sockaddr*>(&to.addr),
                          sizeof to.addr);
  if (n < 0) throw NetError(NetError::Code::Io, "sendto " + to.to_string() + ": " + errno_text());
}

std::optional<Received> UdpSocket::receive(std::chrono::milliseconds timeout) {
  if (!wait_readable(fd_.get(), timeout)) return std::nullopt;
  Received r;
  r.bytes.resize(65536);
  socklen_t len = sizeof r.from.addr;
  const auto n = ::recvfrom(fd_.get(), r.bytes.data(), r.bytes.size(), 0, reinterpret_cast<sockaddr*>(&r.from.addr), &len);
  if (n < 0) return std::nullopt;  // e.g. ICMP port unreachable surfaced as ECONNREFUSED
  r.bytes.resize(static_cast<std::size_t>(n));
  return r;
}

std::uint16_t UdpSocket::local_port() const {
  sockaddr_in a{};
  socklen_t len = sizeof a;
  ::getsockname(fd_.get(), reinterpret_cast<sockaddr*>(&a), &len);
  return ntohs(a.sin_port);
}

LineStream LineStream::connect(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout) {
  Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
  if (!fd) throw NetError(NetError::Code::Io, "socket(): " + errno_text());
  const Endpoint e = Endpoint::resolve(host, port);
  ::fcntl(fd.get(), F_SETFL, O_NONBLOCK);
  if (::connect(fd.get(), reinterpret_cast<const sockaddr*>(&e.addr), sizeof e.addr) != 0 && errno != EINPROGRESS)
    throw NetError(NetError::Code::Io, "connect " + e.to_string() + ": " + errno_text());
  pollfd p{fd.get(), POLLOUT, 0};
  int err = 0;
  socklen_t len = sizeof err;
  if (::poll(&p, 1, static_cast<int>(timeout.count())) <= 0 ||
      ::getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &err, &len) != 0 || err != 0)
    throw NetError(NetError::Code::Io, "connect " + e.to_string() + ": " + (err ? std::strerror(err) : "timed out"));
  return LineStream(std::move(fd));
}

void LineStream::write_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const auto n = ::send(fd_.get(), data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EAGAIN || errno == EWOULDBLOCK) {
        pollfd p{fd_.get(), POLLOUT, 0};
        ::poll(&p, 1, 100);
        continue;
      }
      throw NetError(NetError::Code::Io, "send: " + errno_text());
    }
    off += static_cast<std::size_t>(n);
  }
}

bool LineStream::fill() {
  char buf[4096];
  for (;;) {
    const auto n = ::recv(fd_.get(), buf, sizeof buf, MSG_DONTWAIT);
    if (n > 0) {
      buffer_.append(buf, static_cast<std::size_t>(n));
      continue;
    }
    return n == 0 || (errno != EAGAIN && errno != EWOULDBLOCK);
  }
}

std::optional<std::string> LineStream::take_line() {
  const auto pos = buffer_.find('\n');
  if (pos == std::string::npos) return std::nullopt;
  std::string line = buffer_.substr(0, pos);
  buffer_.erase(0, pos + 1);
  return line;
}

std::vector<std::string> LineStream::poll_lines(bool& closed) {
  closed = fill();
  std::vector<std::string> lines;
  while (auto l = take_line()) lines.push_back(std::move(*l));
  return lines;
}

std::optional<std::string> LineStream::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    if (auto l = take_line()) return l;
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0 || !wait_readable(fd_.get(), left)) return std::nullopt;
    if (fill() && buffer_.find('\n') == std::string::npos) throw NetError(NetError::Code::Io, "connection closed");
  }
}

TcpListener TcpListener::bind(const std::string& address, std::uint16_t port) {
  Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
  if (!fd) throw NetError(NetError::Code::Bind, "socket(): " + errno_text());
  const int one = 1;
  ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  const sockaddr_in a = any_address(address, port);
  if (::bind(fd.get(), reinterpret_cast<const sockaddr*>(&a), sizeof a) != 0 || ::listen(fd.get(), 4) != 0)
    throw NetError(NetError::Code::Bind, "cannot bind TCP " + address + ":" + std::to_string(port) + ": " + errno_text());
  ::fcntl(fd.get(), F_SETFL, O_NONBLOCK);
  return TcpListener(std::move(fd));
}

std::optional<LineStream> TcpListener::accept() {
  const int c = ::accept(fd_.get(), nullptr, nullptr);
  if (c < 0) return std::nullopt;
  ::fcntl(c, F_SETFL, O_NONBLOCK);
  return LineStream(Fd(c));
}

std::uint16_t TcpListener::local_port() const {
  sockaddr_in a{};
  socklen_t len = sizeof a;
  ::getsockname(fd_.get(), reinterpret_cast<sockaddr*>(&a), &len);
  return ntohs(a.sin_port);
}

}  // namespace lbr::net
