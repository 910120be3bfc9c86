// Copyright 2026 The Arca Authors
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

#include "arca/transport.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <map>
#include <mutex>

#include "arca/status.h"

namespace arca::channel {
namespace {

// --- InProcess --------------------------------------------------------------

struct Lane {
  std::deque<uint8_t> bytes;
  bool closed = false;
};

struct Pipe {
  std::mutex mu;
  std::condition_variable cv;
  Lane lanes[2];
};

class InProcessTransport final : public Transport {
 public:
  InProcessTransport(std::shared_ptr<Pipe> pipe, int side)
      : pipe_(std::move(pipe)), side_(side) {}
  ~InProcessTransport() override { Close(); }

  TransportKind kind() const override { return TransportKind::kInProcess; }

  absl::Status Write(ByteSpan data) override {
    std::lock_guard<std::mutex> lock(pipe_->mu);
    Lane& out = pipe_->lanes[side_];
    if (out.closed) return Error(ErrorCode::kConnectFailure, "transport closed");
    out.bytes.insert(out.bytes.end(), data.begin(), data.end());
    pipe_->cv.notify_all();
    return absl::OkStatus();
  }

  absl::StatusOr<Bytes> ReadExact(size_t n) override {
    std::unique_lock<std::mutex> lock(pipe_->mu);
    Lane& in = pipe_->lanes[1 - side_];
    bool ready = pipe_->cv.wait_for(lock, kDefaultReadTimeout, [&] {
      return in.bytes.size() >= n || in.closed;
    });
    if (!ready || in.bytes.size() < n) {
      return Error(ErrorCode::kConnectFailure,
                   ready ? "peer closed" : "read timed out");
    }
    Bytes out(in.bytes.begin(), in.bytes.begin() + n);
    in.bytes.erase(in.bytes.begin(), in.bytes.begin() + n);
    return out;
  }

  void Close() override {
    std::lock_guard<std::mutex> lock(pipe_->mu);
    pipe_->lanes[side_].closed = true;
    pipe_->cv.notify_all();
  }

 private:
  std::shared_ptr<Pipe> pipe_;
  int side_;
};

class InProcessListener;

std::mutex& RegistryMutex() {
  static std::mutex mu;
  return mu;
}

std::map<std::string, InProcessListener*>& Registry() {
  static auto* registry = new std::map<std::string, InProcessListener*>();
  return *registry;
}

class InProcessListener final : public Listener {
 public:
  explicit InProcessListener(std::string name) : name_(std::move(name)) {}
  ~InProcessListener() override {
    std::lock_guard<std::mutex> lock(RegistryMutex());
    Registry().erase(name_);
  }

  TransportKind kind() const override { return TransportKind::kInProcess; }
  std::string address() const override { return name_; }

  absl::StatusOr<std::unique_ptr<Transport>> Accept() override {
    std::unique_lock<std::mutex> lock(mu_);
    if (!cv_.wait_for(lock, kDefaultReadTimeout,
                      [&] { return !pending_.empty(); })) {
      return Error(ErrorCode::kConnectFailure, "no pending connection");
    }
    std::unique_ptr<Transport> t = std::move(pending_.front());
    pending_.pop_front();
    return t;
  }

  void Enqueue(std::unique_ptr<Transport> server_end) {
    std::lock_guard<std::mutex> lock(mu_);
    pending_.push_back(std::move(server_end));
    cv_.notify_all();
  }

 private:
  std::string name_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::unique_ptr<Transport>> pending_;
};

// --- LoopbackSocket ---------------------------------------------------------

absl::Status ErrnoError(std::string_view what) {
  return Error(ErrorCode::kConnectFailure,
               std::string(what) + ": " + std::strerror(errno));
}

absl::StatusOr<uint16_t> ParsePort(std::string_view address) {
  unsigned value = 0;
  auto [ptr, ec] =
      std::from_chars(address.data(), address.data() + address.size(), value);
  if (ec != std::errc() || ptr != address.data() + address.size() ||
      value > 65535) {
    return Error(ErrorCode::kConnectFailure,
                 "bad loopback port '" + std::string(address) + "'");
  }
  return static_cast<uint16_t>(value);
}

sockaddr_in Loopback(uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  return addr;
}

class SocketTransport final : public Transport {
 public:
  explicit SocketTransport(int fd) : fd_(fd) {
    int one = 1;
    setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  ~SocketTransport() override { Close(); }

  TransportKind kind() const override { return TransportKind::kLoopbackSocket; }

  absl::Status Write(ByteSpan data) override {
    size_t off = 0;
    while (off < data.size()) {
      ssize_t n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        return ErrnoError("send");
      }
      off += static_cast<size_t>(n);
    }
    return absl::OkStatus();
  }

  absl::StatusOr<Bytes> ReadExact(size_t n) override {
    Bytes out(n);
    size_t off = 0;
    while (off < n) {
      pollfd p{fd_, POLLIN, 0};
      int ready = ::poll(&p, 1, static_cast<int>(kDefaultReadTimeout.count()));
      if (ready == 0) return Error(ErrorCode::kConnectFailure, "read timed out");
      if (ready < 0) {
        if (errno == EINTR) continue;
        return ErrnoError("poll");
      }
      ssize_t got = ::recv(fd_, out.data() + off, n - off, 0);
      if (got == 0) return Error(ErrorCode::kConnectFailure, "peer closed");
      if (got < 0) {
        if (errno == EINTR) continue;
        return ErrnoError("recv");
      }
      off += static_cast<size_t>(got);
    }
    return out;
  }

  void Close() override {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }

 private:
  int fd_;
};

class SocketListener final : public Listener {
 public:
  SocketListener(int fd, uint16_t port) : fd_(fd), port_(port) {}
  ~SocketListener() override { ::close(fd_); }

  TransportKind kind() const override { return TransportKind::kLoopbackSocket; }
  std::string address() const override { return std::to_string(port_); }

  absl::StatusOr<std::unique_ptr<Transport>> Accept() override {
    pollfd p{fd_, POLLIN, 0};
    int ready = ::poll(&p, 1, static_cast<int>(kDefaultReadTimeout.count()));
    if (ready <= 0) return Error(ErrorCode::kConnectFailure, "accept timed out");
    int conn = ::accept(fd_, nullptr, nullptr);
    if (conn < 0) return ErrnoError("accept");
    return std::unique_ptr<Transport>(new SocketTransport(conn));
  }

 private:
  int fd_;
  uint16_t port_;
};

}  // namespace

std::string_view TransportKindName(TransportKind kind) {
  return kind == TransportKind::kInProcess ? "in-process" : "loopback-socket";
}

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>>
InProcessPair() {
  auto pipe = std::make_shared<Pipe>();
  return {std::make_unique<InProcessTransport>(pipe, 0),
          std::make_unique<InProcessTransport>(pipe, 1)};
}

absl::StatusOr<std::unique_ptr<Listener>> Listen(TransportKind kind,
                                                 std::string_view address) {
  if (kind == TransportKind::kInProcess) {
    if (address.empty()) {
      return Error(ErrorCode::kConnectFailure, "empty in-process name");
    }
    std::lock_guard<std::mutex> lock(RegistryMutex());
    std::string name(address);
    if (Registry().contains(name)) {
      return Error(ErrorCode::kConnectFailure, "name already bound: " + name);
    }
    auto listener = std::make_unique<InProcessListener>(name);
    Registry()[name] = listener.get();
    return std::unique_ptr<Listener>(std::move(listener));
  }
  ARCA_ASSIGN_OR_RETURN(uint16_t port, ParsePort(address));
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) return ErrnoError("socket");
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = Loopback(port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
      ::listen(fd, 16) < 0) {
    absl::Status err = ErrnoError("bind");
    ::close(fd);
    return err;
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  return std::unique_ptr<Listener>(new SocketListener(fd, ntohs(addr.sin_port)));
}

absl::StatusOr<std::unique_ptr<Transport>> OpenTransport(
    TransportKind kind, std::string_view address) {
  if (kind == TransportKind::kInProcess) {
    std::lock_guard<std::mutex> lock(RegistryMutex());
    auto it = Registry().find(std::string(address));
    if (it == Registry().end()) {
      return Error(ErrorCode::kConnectFailure,
                   "no listener named '" + std::string(address) + "'");
    }
    auto [client, server] = InProcessPair();
    it->second->Enqueue(std::move(server));
    return std::move(client);
  }
  ARCA_ASSIGN_OR_RETURN(uint16_t port, ParsePort(address));
  if (port == 0) return Error(ErrorCode::kConnectFailure, "port 0");
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) return ErrnoError("socket");
  sockaddr_in addr = Loopback(port);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    absl::Status err = ErrnoError("connect");
    ::close(fd);
    return err;
  }
  return std::unique_ptr<Transport>(new SocketTransport(fd));
}

absl::StatusOr<std::unique_ptr<Transport>> AcceptTransport(Listener& listener) {
  return listener.Accept();
}

absl::Status InterposedTransport::Write(ByteSpan data) {
  for (const Bytes& out : hook_(Bytes(data.begin(), data.end()))) {
    ARCA_RETURN_IF_ERROR(inner_->Write(out));
  }
  return absl::OkStatus();
}

}  // namespace arca::channel
