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

#include "arca/channel.h"

#include <algorithm>
#include <limits>
#include <utility>

#include "arca/status.h"

namespace arca::channel {
namespace {

constexpr std::string_view kFrameMagic = "ARCF";
constexpr std::string_view kHelloMagic = "ARCH";
constexpr std::string_view kTranscriptLabel = "arca-handshake-v1";
constexpr uint8_t kVersion = 1;

absl::StatusOr<SymmetricKey> DeriveKey(const primitives::SharedSecret& z,
                                       const measurement::Measurement& m,
                                       std::string_view label, size_t len) {
  ARCA_ASSIGN_OR_RETURN(Bytes raw, primitives::Kdf(z, m.digest.bytes, label, len));
  absl::StatusOr<SymmetricKey> key = SymmetricKey::Create(raw, std::string(label));
  SecureWipe(raw);
  return key;
}

primitives::AeadNonce FrameNonce(uint8_t direction, uint64_t seq) {
  primitives::AeadNonce nonce;
  std::fill_n(nonce.begin(), 4, direction);
  FixedBytes<8> s = U64BE(seq);
  std::copy(s.begin(), s.end(), nonce.begin() + 4);
  return nonce;
}

Bytes FrameHeader(uint8_t direction, uint64_t seq) {
  Bytes out = ToBytes(kFrameMagic);
  PutU8(out, kVersion);
  PutU8(out, direction);
  PutU64BE(out, seq);
  return out;
}

bool HasPrefix(ByteSpan data, std::string_view prefix) {
  return data.size() >= prefix.size() &&
         std::equal(prefix.begin(), prefix.end(), data.begin());
}

Bytes Transcript(const PublicKey& initiator, const PublicKey& responder,
                 const measurement::Measurement& m) {
  Bytes out = ToBytes(kTranscriptLabel);
  Append(out, initiator);
  Append(out, responder);
  Append(out, m.digest.bytes);
  PutU8(out, static_cast<uint8_t>(m.profile));
  return out;
}

primitives::MacValue HelloMac(const SymmetricKey& confirm,
                              const Bytes& transcript, Role sender) {
  Bytes input = transcript;
  PutU8(input, static_cast<uint8_t>(sender));
  return primitives::Mac(confirm, input);
}

}  // namespace

absl::StatusOr<DirectionalKeys> DeriveDirection(
    const primitives::SharedSecret& z, const measurement::Measurement& m,
    bool client_to_server) {
  std::string_view prefix = client_to_server ? "c2s" : "s2c";
  DirectionalKeys keys;
  ARCA_ASSIGN_OR_RETURN(keys.enc,
                        DeriveKey(z, m, std::string(prefix) + "-enc", 16));
  ARCA_ASSIGN_OR_RETURN(keys.mac,
                        DeriveKey(z, m, std::string(prefix) + "-mac", 32));
  return keys;
}

absl::StatusOr<Bytes> SealFrame(const SymmetricKey& enc, const SymmetricKey& mac,
                                uint8_t direction, uint64_t seq,
                                ByteSpan plaintext) {
  if (plaintext.size() > kMaxPlaintext) {
    return Error(ErrorCode::kFrameTooLarge,
                 std::to_string(plaintext.size()) + " byte payload");
  }
  Bytes frame = FrameHeader(direction, seq);
  primitives::AeadNonce nonce = FrameNonce(direction, seq);
  ARCA_ASSIGN_OR_RETURN(primitives::AeadSealed sealed,
                        primitives::AeadSeal(enc, nonce, plaintext, frame));
  frame.reserve(kFrameOverhead + plaintext.size());
  Append(frame, nonce);
  PutU32BE(frame, static_cast<uint32_t>(sealed.ciphertext.size()));
  Append(frame, sealed.ciphertext);
  Append(frame, sealed.tag);
  primitives::MacValue tag = primitives::Mac(
      mac, ByteSpan(frame).subspan(kFrameMagic.size()));
  Append(frame, tag);
  return frame;
}

absl::StatusOr<OpenedFrame> OpenFrame(const SymmetricKey& enc,
                                      const SymmetricKey& mac, ByteSpan frame) {
  if (frame.size() < kFrameOverhead || !HasPrefix(frame, kFrameMagic)) {
    return Error(ErrorCode::kMalformedFrame, "bad frame envelope");
  }
  ByteReader r(frame.subspan(kFrameMagic.size()));
  uint8_t version = r.U8();
  OpenedFrame out;
  out.direction = r.U8();
  out.seq = r.U64BE();
  primitives::AeadNonce nonce = r.Fixed<12>();
  uint32_t ct_len = r.U32BE();
  if (version != kVersion || ct_len > kMaxPlaintext ||
      frame.size() != kFrameOverhead + ct_len) {
    return Error(ErrorCode::kMalformedFrame, "bad frame header");
  }
  ByteSpan ct = r.Take(ct_len);
  primitives::AeadTag aead_tag = r.Fixed<16>();
  primitives::MacValue outer = r.Fixed<32>();

  ByteSpan preimage = frame.subspan(kFrameMagic.size(),
                                    frame.size() - kFrameMagic.size() - 32);
  if (!primitives::MacEqual(primitives::Mac(mac, preimage), outer)) {
    return Error(ErrorCode::kMacFailure, "outer MAC mismatch");
  }
  absl::StatusOr<Bytes> plain = primitives::AeadOpen(
      enc, nonce, ct, aead_tag, frame.first(kFrameHeaderSize));
  if (!plain.ok()) return Error(ErrorCode::kAeadFailure, "AEAD open failed");
  out.plaintext = *std::move(plain);
  return out;
}

absl::StatusOr<Bytes> ReadFrame(Transport& transport) {
  ARCA_ASSIGN_OR_RETURN(Bytes frame, transport.ReadExact(kFramePrefixSize));
  ByteReader r(ByteSpan(frame).subspan(kFramePrefixSize - 4));
  uint32_t ct_len = r.U32BE();
  if (!HasPrefix(frame, kFrameMagic) || ct_len > kMaxPlaintext) {
    return Error(ErrorCode::kMalformedFrame, "bad frame prefix on stream");
  }
  ARCA_ASSIGN_OR_RETURN(Bytes rest, transport.ReadExact(ct_len + 16 + 32));
  Append(frame, rest);
  return frame;
}

// --- handshake --------------------------------------------------------------

absl::StatusOr<PendingHandshake> PendingHandshake::Start(
    const KeyPair& local, const PublicKey& peer_attested_public,
    const measurement::Measurement& peer_measurement, Role role,
    Transport& transport) {
  if (local.scheme() != primitives::KeyScheme::kExchange) {
    return Error(ErrorCode::kMalformedKey, "handshake needs an X25519 pair");
  }
  HandshakeState st;
  st.role = role;
  st.local_keys = local;
  st.peer_attested_public = peer_attested_public;
  ARCA_ASSIGN_OR_RETURN(st.shared_secret,
                        primitives::Ecdh(local, peer_attested_public));
  ARCA_ASSIGN_OR_RETURN(DirectionalKeys c2s,
                        DeriveDirection(st.shared_secret, peer_measurement, true));
  ARCA_ASSIGN_OR_RETURN(DirectionalKeys s2c,
                        DeriveDirection(st.shared_secret, peer_measurement, false));
  ARCA_ASSIGN_OR_RETURN(
      SymmetricKey confirm,
      DeriveKey(st.shared_secret, peer_measurement, "confirm", 32));
  const bool initiator = role == Role::kInitiator;
  st.send_key = initiator ? c2s.enc : s2c.enc;
  st.mac_send_key = initiator ? c2s.mac : s2c.mac;
  st.recv_key = initiator ? s2c.enc : c2s.enc;
  st.mac_recv_key = initiator ? s2c.mac : c2s.mac;

  Bytes transcript =
      initiator ? Transcript(local.public_part(), peer_attested_public,
                             peer_measurement)
                : Transcript(peer_attested_public, local.public_part(),
                             peer_measurement);
  Bytes hello = ToBytes(kHelloMagic);
  PutU8(hello, kVersion);
  PutU8(hello, static_cast<uint8_t>(role));
  Append(hello, local.public_part());
  Append(hello, HelloMac(confirm, transcript, role));
  ARCA_RETURN_IF_ERROR(transport.Write(hello));
  return PendingHandshake(std::move(st), std::move(confirm),
                          std::move(transcript), &transport);
}

absl::StatusOr<std::unique_ptr<SecureChannel>> PendingHandshake::Finish() {
  ARCA_ASSIGN_OR_RETURN(Bytes hello, transport_->ReadExact(kHelloSize));
  Role peer_role =
      state_.role == Role::kInitiator ? Role::kResponder : Role::kInitiator;
  ByteReader r(hello);
  ByteSpan magic = r.Take(4);
  uint8_t version = r.U8();
  uint8_t role = r.U8();
  PublicKey peer_pub = r.Fixed<32>();
  primitives::MacValue mac = r.Fixed<32>();
  if (!std::equal(magic.begin(), magic.end(), kHelloMagic.begin()) ||
      version != kVersion || role != static_cast<uint8_t>(peer_role)) {
    return Error(ErrorCode::kMalformedFrame, "bad handshake hello");
  }
  if (peer_pub != state_.peer_attested_public ||
      !primitives::MacEqual(mac, HelloMac(confirm_, transcript_, peer_role))) {
    return Error(ErrorCode::kHandshakeIdentityMismatch,
                 "peer key confirmation failed");
  }
  return std::unique_ptr<SecureChannel>(
      new SecureChannel(std::move(state_), transport_));
}

// --- channel ----------------------------------------------------------------

absl::StatusOr<std::unique_ptr<SecureChannel>> SecureChannel::Handshake(
    const KeyPair& local, const PublicKey& peer_attested_public,
    const measurement::Measurement& peer_measurement, Role role,
    Transport& transport) {
  ARCA_ASSIGN_OR_RETURN(PendingHandshake pending,
                        PendingHandshake::Start(local, peer_attested_public,
                                                peer_measurement, role,
                                                transport));
  return pending.Finish();
}

absl::StatusOr<Bytes> SecureChannel::NextFrame(ByteSpan plaintext) {
  std::lock_guard<std::mutex> lock(send_mu_);
  if (state_.send_seq == std::numeric_limits<uint64_t>::max()) {
    return Error(ErrorCode::kSequenceExhausted, "send sequence exhausted");
  }
  ARCA_ASSIGN_OR_RETURN(Bytes frame,
                        SealFrame(state_.send_key, state_.mac_send_key,
                                  SendDirection(state_.role), state_.send_seq,
                                  plaintext));
  ++state_.send_seq;
  return frame;
}

absl::Status SecureChannel::Send(ByteSpan plaintext) {
  ARCA_ASSIGN_OR_RETURN(Bytes frame, NextFrame(plaintext));
  return transport_->Write(frame);
}

absl::StatusOr<Bytes> SecureChannel::Accept(ByteSpan frame) {
  std::lock_guard<std::mutex> lock(recv_mu_);
  ARCA_ASSIGN_OR_RETURN(OpenedFrame opened,
                        OpenFrame(state_.recv_key, state_.mac_recv_key, frame));
  uint8_t expected_direction = SendDirection(
      state_.role == Role::kInitiator ? Role::kResponder : Role::kInitiator);
  if (opened.direction != expected_direction) {
    return Error(ErrorCode::kMalformedFrame, "frame direction");
  }
  if (opened.seq != state_.recv_seq) {
    return Error(ErrorCode::kReplayOrGap,
                 "expected seq " + std::to_string(state_.recv_seq) + ", got " +
                     std::to_string(opened.seq));
  }
  ++state_.recv_seq;
  return std::move(opened.plaintext);
}

absl::StatusOr<Bytes> SecureChannel::Recv() {
  ARCA_ASSIGN_OR_RETURN(Bytes frame, ReadFrame(*transport_));
  return Accept(frame);
}

}  // namespace arca::channel
