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

// Duplex byte streams under the secure channel. InProcess endpoints meet in
// a process-wide registry by name (the vsock stand-in); LoopbackSocket
// endpoints are TCP connections on 127.0.0.1.

#ifndef ARCA_TRANSPORT_H_
#define ARCA_TRANSPORT_H_

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "arca/bytes.h"

namespace arca::channel {

enum class TransportKind { kInProcess, kLoopbackSocket };

std::string_view TransportKindName(TransportKind kind);

inline constexpr std::chrono::milliseconds kDefaultReadTimeout{5000};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual TransportKind kind() const = 0;
  virtual absl::Status Write(ByteSpan data) = 0;
  // Blocks until `n` bytes arrive. kConnectFailure if the peer closed or the
  // timeout elapsed first.
  virtual absl::StatusOr<Bytes> ReadExact(size_t n) = 0;
  virtual void Close() = 0;
};

class Listener {
 public:
  virtual ~Listener() = default;
  virtual TransportKind kind() const = 0;
  // The dialable address; for sockets bound to port 0 this is the port the
  // kernel picked.
  virtual std::string address() const = 0;
  virtual absl::StatusOr<std::unique_ptr<Transport>> Accept() = 0;
};

// InProcess: any non-empty name, unique while bound. LoopbackSocket: a port
// number ("0" for ephemeral).
absl::StatusOr<std::unique_ptr<Listener>> Listen(TransportKind kind,
                                                 std::string_view address);
absl::StatusOr<std::unique_ptr<Transport>> OpenTransport(
    TransportKind kind, std::string_view address);
absl::StatusOr<std::unique_ptr<Transport>> AcceptTransport(Listener& listener);

// Connected InProcess pair without going through the registry.
std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>>
InProcessPair();

// Everything written through the wrapper first passes the hook, which may
// observe, drop, duplicate, rewrite, or hold back writes. Each returned
// buffer is forwarded as its own write.
class InterposedTransport final : public Transport {
 public:
  using Hook = std::function<std::vector<Bytes>(Bytes written)>;

  InterposedTransport(std::unique_ptr<Transport> inner, Hook hook)
      : inner_(std::move(inner)), hook_(std::move(hook)) {}

  TransportKind kind() const override { return inner_->kind(); }
  absl::Status Write(ByteSpan data) override;
  absl::StatusOr<Bytes> ReadExact(size_t n) override {
    return inner_->ReadExact(n);
  }
  void Close() override { inner_->Close(); }

 private:
  std::unique_ptr<Transport> inner_;
  Hook hook_;
};

}  // namespace arca::channel

#endif  // ARCA_TRANSPORT_H_
