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

// Attested secure channel.
//
// Handshake: Z = X25519(local, peer attested public). Directional keys are
// kdf(Z, measurement digest, label) for "c2s-enc"/"s2c-enc" (16 bytes) and
// "c2s-mac"/"s2c-mac" (32 bytes); "confirm" keys the hello MAC. Each side
// sends
//
//   "ARCH" || u8 version || u8 role || own public (32)
//          || mac(confirm, transcript || role)
//
// Frame wire format:
//
//   "ARCF" || u8 version=1 || u8 direction || u64 BE seq
//          || nonce (12) = direction x4 || u64 BE seq
//          || u32 BE ct-len || ct || tag (16) || mac (32)
//
// The AEAD binds the 14-byte header as associated data; the outer MAC
// covers every byte after the magic up to the MAC itself.

#ifndef ARCA_CHANNEL_H_
#define ARCA_CHANNEL_H_

#include <cstdint>
#include <memory>

#include "absl/status/statusor.h"
#include "arca/bytes.h"
#include "arca/measurement.h"
#include "arca/primitives.h"
#include "arca/transport.h"

namespace arca::channel {

using primitives::KeyPair;
using primitives::PublicKey;
using primitives::SymmetricKey;

inline constexpr size_t kMaxPlaintext = 1 << 20;
inline constexpr size_t kFrameHeaderSize = 14;
// header || nonce || ct-len
inline constexpr size_t kFramePrefixSize = kFrameHeaderSize + 12 + 4;
inline constexpr size_t kFrameOverhead = kFramePrefixSize + 16 + 32;
inline constexpr size_t kHelloSize = 4 + 1 + 1 + 32 + 32;

enum class Role : uint8_t { kInitiator = 0, kResponder = 1 };

struct DirectionalKeys {
  SymmetricKey enc;
  SymmetricKey mac;
};

struct HandshakeState {
  Role role = Role::kInitiator;
  KeyPair local_keys;
  PublicKey peer_attested_public{};
  primitives::SharedSecret shared_secret{};
  SymmetricKey send_key;
  SymmetricKey recv_key;
  SymmetricKey mac_send_key;
  SymmetricKey mac_recv_key;
  uint64_t send_seq = 0;
  uint64_t recv_seq = 0;
};

// Direction byte of frames sent by `role`.
inline uint8_t SendDirection(Role role) { return static_cast<uint8_t>(role); }

// Derives the c2s/s2c key pair for a shared secret and binding measurement.
absl::StatusOr<DirectionalKeys> DeriveDirection(
    const primitives::SharedSecret& z, const measurement::Measurement& m,
    bool client_to_server);

// Pure frame construction/parsing over explicit keys.
absl::StatusOr<Bytes> SealFrame(const SymmetricKey& enc, const SymmetricKey& mac,
                                uint8_t direction, uint64_t seq,
                                ByteSpan plaintext);

struct OpenedFrame {
  uint8_t direction = 0;
  uint64_t seq = 0;
  Bytes plaintext;
};

// Checks structure, then outer MAC, then AEAD. Sequence policy is the
// caller's.
absl::StatusOr<OpenedFrame> OpenFrame(const SymmetricKey& enc,
                                      const SymmetricKey& mac, ByteSpan frame);

// Reads one complete frame off a stream.
absl::StatusOr<Bytes> ReadFrame(Transport& transport);

class SecureChannel;

// First half of the handshake: derives keys and writes our hello. Lets a
// single thread drive both ends over a buffered transport.
class PendingHandshake {
 public:
  static absl::StatusOr<PendingHandshake> Start(
      const KeyPair& local, const PublicKey& peer_attested_public,
      const measurement::Measurement& peer_measurement, Role role,
      Transport& transport);

  // Reads and checks the peer hello. kHandshakeIdentityMismatch if the peer
  // did not derive the same keys from the same identity.
  absl::StatusOr<std::unique_ptr<SecureChannel>> Finish();

 private:
  PendingHandshake(HandshakeState state, SymmetricKey confirm, Bytes transcript,
                   Transport* transport)
      : state_(std::move(state)),
        confirm_(std::move(confirm)),
        transcript_(std::move(transcript)),
        transport_(transport) {}

  HandshakeState state_;
  SymmetricKey confirm_;
  Bytes transcript_;
  Transport* transport_;
};

class SecureChannel {
 public:
  static absl::StatusOr<std::unique_ptr<SecureChannel>> Handshake(
      const KeyPair& local, const PublicKey& peer_attested_public,
      const measurement::Measurement& peer_measurement, Role role,
      Transport& transport);

  // kFrameTooLarge above 1 MiB; kSequenceExhausted once seq would wrap.
  absl::Status Send(ByteSpan plaintext);
  absl::StatusOr<Bytes> Recv();

  // Exact-sequence receive of an already delimited frame. State advances
  // only on success.
  absl::StatusOr<Bytes> Accept(ByteSpan frame);
  // Builds the next outgoing frame without writing it.
  absl::StatusOr<Bytes> NextFrame(ByteSpan plaintext);

  const HandshakeState& state() const { return state_; }
  HandshakeState& mutable_state_for_testing() { return state_; }
  Transport& transport() { return *transport_; }

 private:
  friend class PendingHandshake;
  SecureChannel(HandshakeState state, Transport* transport)
      : state_(std::move(state)), transport_(transport) {}

  std::mutex send_mu_;
  std::mutex recv_mu_;
  HandshakeState state_;
  Transport* transport_;
};

}  // namespace arca::channel

#endif  // ARCA_CHANNEL_H_
