// Copyright 2026 The XFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>

#include "xfl/common/bytes.hpp"
#include "xfl/transport/party.hpp"

namespace xfl::transport {

// One addressed message. (session_id, stage_key, sender, receiver, seq) is
// unique; seq increases per (sender, receiver, stage_key) stream.
struct Envelope {
  std::string session_id;
  std::string stage_key;  // e.g. "secagg/masked_update"
  PartyId sender;
  PartyId receiver;
  uint64_t seq = 0;
  Bytes payload;
};

// Acknowledgment frames reuse the envelope shape with the stage key prefixed
// by "ack:"; their seq mirrors the frame being acknowledged.
inline constexpr char kAckPrefix[] = "ack:";

constexpr size_t kDefaultMaxFrameBytes = size_t{64} << 20;

// Normative wire layout, identical on every backend:
//
//   "XFL1" | u32 header_len | header | u64 payload_len | payload | u32 crc
//
// with all integers big-endian. The header is UTF-8 "key:value" lines, one
// per '\n', in the fixed order session_id, stage_key, sender, receiver, seq;
// sender and receiver carry party names (ordinals are session roster state,
// resolved by the endpoint), seq is decimal. The trailing u32 is the CRC32
// of the payload bytes.
Bytes encode_frame(const Envelope& env,
                   size_t max_frame_bytes = kDefaultMaxFrameBytes);

// Parses and validates a frame (magic, sizes, CRC, required header keys).
// Party ordinals in the result are unresolved (-1). Throws ProtocolError on
// malformed input.
Envelope decode_frame(std::span<const uint8_t> frame,
                      size_t max_frame_bytes = kDefaultMaxFrameBytes);

}  // namespace xfl::transport
