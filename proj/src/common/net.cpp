// Copyright 2026 The adsbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adsbench/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <memory>

#include <fmt/format.h>

namespace adsbench::net {
namespace {

std::string errno_text(int err) { return std::strerror(err); }

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

void set_blocking(int fd, bool blocking) {
  int flags = ::fcntl(fd, F_GETFL, 0);
  flags = blocking ? (flags & ~O_NONBLOCK) : (flags | O_NONBLOCK);
  ::fcntl(fd, F_SETFL, flags);
}

}  // namespace

Socket::Socket(int fd) : fd_{fd} {}

Socket::~Socket() { close(); }

Socket::Socket(Socket&& other) noexcept : fd_{other.fd_} { other.fd_ = -1; }

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

void Socket::send_all(std::span<const std::uint8_t> data) {
  while (!data.empty()) {
    const auto n = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw NetError("send failed: " + errno_text(errno));
    }
    data = data.subspan(static_cast<std::size_t>(n));
  }
}

std::size_t Socket::recv_some(std::span<std::uint8_t> buffer) {
  while (true) {
    const auto n = ::recv(fd_, buffer.data(), buffer.size(), 0);
    if (n >= 0) return static_cast<std::size_t>(n);
    if (errno == EINTR) continue;
    throw NetError("recv failed: " + errno_text(errno));
  }
}

void Socket::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

Socket connect_tcp(const std::string& host, std::uint16_t port,
                   std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* raw = nullptr;
  const auto service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &raw); rc != 0) {
    throw NetError(fmt::format("cannot resolve {}: {}", host, ::gai_strerror(rc)));
  }
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> info{raw, &::freeaddrinfo};

  Socket sock{::socket(info->ai_family, info->ai_socktype, info->ai_protocol)};
  if (!sock.valid()) throw NetError("socket() failed: " + errno_text(errno));

  set_blocking(sock.fd(), false);
  if (::connect(sock.fd(), info->ai_addr, info->ai_addrlen) != 0) {
    if (errno != EINPROGRESS) {
      throw NetError(fmt::format("connect to {}:{} failed: {}", host, port, errno_text(errno)));
    }
    pollfd pfd{sock.fd(), POLLOUT, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (ready == 0) {
      throw NetError(fmt::format("connect to {}:{} timed out after {} ms", host, port,
                                 timeout.count()));
    }
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(sock.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (ready < 0 || err != 0) {
      throw NetError(fmt::format("connect to {}:{} failed: {}", host, port,
                                 errno_text(ready < 0 ? errno : err)));
    }
  }
  set_blocking(sock.fd(), true);
  set_nodelay(sock.fd());
  return sock;
}

Listener::Listener(const std::string& bind_address, std::uint16_t port)
    : socket_{::socket(AF_INET, SOCK_STREAM, 0)} {
  if (!socket_.valid()) throw NetError("socket() failed: " + errno_text(errno));
  int one = 1;
  ::setsockopt(socket_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, bind_address.c_str(), &addr.sin_addr) != 1) {
    throw NetError("invalid bind address " + bind_address);
  }
  if (::bind(socket_.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw NetError(fmt::format("bind {}:{} failed: {}", bind_address, port, errno_text(errno)));
  }
  if (::listen(socket_.fd(), 16) != 0) throw NetError("listen failed: " + errno_text(errno));

  socklen_t len = sizeof(addr);
  ::getsockname(socket_.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

std::optional<Socket> Listener::accept(std::chrono::milliseconds timeout) {
  pollfd pfd{socket_.fd(), POLLIN, 0};
  const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (ready <= 0) return std::nullopt;
  const int fd = ::accept(socket_.fd(), nullptr, nullptr);
  if (fd < 0) return std::nullopt;
  set_nodelay(fd);
  return Socket{fd};
}

}  // namespace adsbench::net
