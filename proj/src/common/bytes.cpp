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

#include "xfl/common/bytes.hpp"

#include <bit>

#include "xfl/common/error.hpp"

namespace xfl {

void BinaryWriter::u32(uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    buf_.push_back(static_cast<uint8_t>(v >> shift));
  }
}

void BinaryWriter::u64(uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    buf_.push_back(static_cast<uint8_t>(v >> shift));
  }
}

void BinaryWriter::f64(double v) {
  u64(std::bit_cast<uint64_t>(v));
}

void BinaryWriter::bytes(std::span<const uint8_t> v) {
  u32(static_cast<uint32_t>(v.size()));
  buf_.insert(buf_.end(), v.begin(), v.end());
}

void BinaryWriter::str(std::string_view v) {
  u32(static_cast<uint32_t>(v.size()));
  buf_.insert(buf_.end(), v.begin(), v.end());
}

std::span<const uint8_t> BinaryReader::take(size_t n) {
  if (pos_ + n > data_.size()) {
    throw Error("binary payload truncated");
  }
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

uint8_t BinaryReader::u8() {
  return take(1)[0];
}

uint32_t BinaryReader::u32() {
  auto b = take(4);
  uint32_t v = 0;
  for (auto c : b) v = (v << 8) | c;
  return v;
}

uint64_t BinaryReader::u64() {
  auto b = take(8);
  uint64_t v = 0;
  for (auto c : b) v = (v << 8) | c;
  return v;
}

double BinaryReader::f64() {
  return std::bit_cast<double>(u64());
}

Bytes BinaryReader::bytes() {
  size_t n = u32();
  auto b = take(n);
  return Bytes(b.begin(), b.end());
}

std::string BinaryReader::str() {
  size_t n = u32();
  auto b = take(n);
  return std::string(b.begin(), b.end());
}

std::string to_hex(std::span<const uint8_t> data) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

static int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw Error("invalid hex digit");
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error("odd-length hex string");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<uint8_t>((hex_nibble(hex[2 * i]) << 4) |
                                  hex_nibble(hex[2 * i + 1]));
  }
  return out;
}

}  // namespace xfl
