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

#ifndef ARCA_TESTS_CHANNEL_UTIL_H_
#define ARCA_TESTS_CHANNEL_UTIL_H_

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arca/channel.h"
#include "arca/transport.h"
#include "test_util.h"

namespace arca::testing {

using TransportEnds =
    std::pair<std::unique_ptr<channel::Transport>, std::unique_ptr<channel::Transport>>;

inline TransportEnds ConnectedPair(channel::TransportKind kind) {
  if (kind == channel::TransportKind::kInProcess) return channel::InProcessPair();
  auto listener = channel::Listen(kind, "0");
  if (!listener.ok()) throw std::runtime_error(std::string(listener.status().message()));
  auto client = channel::OpenTransport(kind, (*listener)->address());
  if (!client.ok()) throw std::runtime_error(std::string(client.status().message()));
  auto server = channel::AcceptTransport(**listener);
  if (!server.ok()) throw std::runtime_error(std::string(server.status().message()));
  return {std::move(*client), std::move(*server)};
}

// Both ends of an established channel, driven from one thread.
struct ChannelPair {
  TransportEnds ends;
  std::unique_ptr<channel::SecureChannel> initiator;
  std::unique_ptr<channel::SecureChannel> responder;
  Bytes hello_i, hello_r;
};

inline absl::StatusOr<ChannelPair> Establish(channel::TransportKind kind,
                                             const primitives::KeyPair& ki,
                                             const primitives::KeyPair& kr,
                                             const measurement::Measurement& m) {
  ChannelPair p;
  p.ends = ConnectedPair(kind);
  auto si = channel::PendingHandshake::Start(ki, kr.public_part(), m,
                                             channel::Role::kInitiator, *p.ends.first);
  if (!si.ok()) return si.status();
  auto sr = channel::PendingHandshake::Start(kr, ki.public_part(), m,
                                             channel::Role::kResponder, *p.ends.second);
  if (!sr.ok()) return sr.status();
  auto ci = si->Finish();
  if (!ci.ok()) return ci.status();
  auto cr = sr->Finish();
  if (!cr.ok()) return cr.status();
  p.initiator = std::move(*ci);
  p.responder = std::move(*cr);
  return p;
}

struct GoldenFrame {
  uint8_t direction;
  uint64_t seq;
  Bytes plaintext;
  Bytes frame;
};

struct GoldenCase {
  Bytes32 seed_i, seed_r;
  measurement::Measurement measurement;
  Bytes hello_i, hello_r;
  std::vector<GoldenFrame> frames;
};

inline std::vector<GoldenCase> LoadGoldenCases() {
  std::vector<GoldenCase> cases;
  for (const auto& r : LoadVectors("channel_frames.vec")) {
    size_t idx = std::stoul(r.at("case"));
    if (r.count("seed_i")) {
      GoldenCase c;
      c.seed_i = FixedHex<32>(r.at("seed_i"));
      c.seed_r = FixedHex<32>(r.at("seed_r"));
      c.measurement.digest.bytes = FixedHex<32>(r.at("measurement"));
      c.measurement.profile = kAllProfiles.at(std::stoul(r.at("profile")));
      c.hello_i = Hex(r.at("hello_i"));
      c.hello_r = Hex(r.at("hello_r"));
      cases.push_back(std::move(c));
    } else {
      cases.at(idx).frames.push_back(
          {static_cast<uint8_t>(std::stoul(r.at("direction"))), std::stoull(r.at("seq")),
           Hex(r.at("pt")), Hex(r.at("frame"))});
    }
  }
  return cases;
}

}  // namespace arca::testing

#endif  // ARCA_TESTS_CHANNEL_UTIL_H_
