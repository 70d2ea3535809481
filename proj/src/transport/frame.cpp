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

#include "xfl/transport/frame.hpp"

#include <zlib.h>

#include <array>
#include <charconv>
#include <cstring>
#include <map>

#include "xfl/common/error.hpp"

namespace xfl::transport {

namespace {

constexpr char kMagic[4] = {'X', 'F', 'L', '1'};

uint32_t payload_crc(std::span<const uint8_t> payload) {
  uLong crc = crc32(0L, Z_NULL, 0);
  if (!payload.empty()) {
    crc = crc32(crc, payload.data(), static_cast<uInt>(payload.size()));
  }
  return static_cast<uint32_t>(crc);
}

void append_line(std::string& header, std::string_view key,
                 std::string_view value) {
  if (value.find('\n') != std::string_view::npos)
    throw ProtocolError("frame header value contains newline");
  header.append(key);
  header.push_back(':');
  header.append(value);
  header.push_back('\n');
}

}  // namespace

Bytes encode_frame(const Envelope& env, size_t max_frame_bytes) {
  std::string header;
  append_line(header, "session_id", env.session_id);
  append_line(header, "stage_key", env.stage_key);
  append_line(header, "sender", env.sender.name);
  append_line(header, "receiver", env.receiver.name);
  append_line(header, "seq", std::to_string(env.seq));

  BinaryWriter w;
  for (char c : kMagic) w.u8(static_cast<uint8_t>(c));
  w.u32(static_cast<uint32_t>(header.size()));
  for (char c : header) w.u8(static_cast<uint8_t>(c));
  w.u64(env.payload.size());
  Bytes out = std::move(w).take();
  out.insert(out.end(), env.payload.begin(), env.payload.end());
  uint32_t crc = payload_crc(env.payload);
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<uint8_t>(crc >> shift));

  if (out.size() > max_frame_bytes) throw ProtocolError("frame too large");
  return out;
}

Envelope decode_frame(std::span<const uint8_t> frame, size_t max_frame_bytes) {
  if (frame.size() > max_frame_bytes) throw ProtocolError("frame too large");
  BinaryReader r(frame);
  std::array<uint8_t, 4> magic{};
  for (auto& b : magic) b = r.u8();
  if (std::memcmp(magic.data(), kMagic, 4) != 0)
    throw ProtocolError("bad frame magic");

  uint32_t header_len = r.u32();
  if (header_len > r.remaining()) throw ProtocolError("frame header truncated");
  std::string header(header_len, '\0');
  for (auto& c : header) c = static_cast<char>(r.u8());

  uint64_t payload_len = r.u64();
  if (payload_len + 4 != r.remaining())
    throw ProtocolError("frame payload length mismatch");
  Bytes payload(payload_len);
  for (auto& b : payload) b = r.u8();
  uint32_t crc = r.u32();
  if (crc != payload_crc(payload)) throw ProtocolError("frame crc mismatch");

  std::map<std::string, std::string, std::less<>> fields;
  std::string_view rest = header;
  while (!rest.empty()) {
    size_t eol = rest.find('\n');
    if (eol == std::string_view::npos) throw ProtocolError("unterminated frame header line");
    std::string_view line = rest.substr(0, eol);
    rest.remove_prefix(eol + 1);
    size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ProtocolError("malformed frame header line");
    fields.emplace(line.substr(0, colon), line.substr(colon + 1));
  }

  auto field = [&](std::string_view key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end())
      throw ProtocolError("frame header missing key: " + std::string(key));
    return it->second;
  };

  Envelope env;
  env.session_id = field("session_id");
  env.stage_key = field("stage_key");
  env.sender = PartyId{-1, field("sender")};
  env.receiver = PartyId{-1, field("receiver")};
  const std::string& seq_text = field("seq");
  auto [ptr, ec] = std::from_chars(seq_text.data(),
                                   seq_text.data() + seq_text.size(), env.seq);
  if (ec != std::errc{} || ptr != seq_text.data() + seq_text.size())
    throw ProtocolError("frame seq is not a number");
  env.payload = std::move(payload);
  return env;
}

}  // namespace xfl::transport
