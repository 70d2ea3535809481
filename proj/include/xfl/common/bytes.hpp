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
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xfl {

using Bytes = std::vector<uint8_t>;

// Binary payload encoding used inside transport envelopes. All integers are
// big-endian; byte strings and big integers are length-prefixed (u32 length
// followed by raw bytes). Doubles travel as their IEEE-754 bit pattern in a
// big-endian u64.
class BinaryWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u32(uint32_t v);
  void u64(uint64_t v);
  void i64(int64_t v) { u64(static_cast<uint64_t>(v)); }
  void f64(double v);
  void bytes(std::span<const uint8_t> v);
  void str(std::string_view v);

  const Bytes& data() const& { return buf_; }
  Bytes&& take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::span<const uint8_t> data) : data_(data) {}
  // A reader only views its input; reading from a temporary would dangle.
  explicit BinaryReader(Bytes&&) = delete;

  uint8_t u8();
  uint32_t u32();
  uint64_t u64();
  int64_t i64() { return static_cast<int64_t>(u64()); }
  double f64();
  Bytes bytes();
  std::string str();

  bool done() const { return pos_ == data_.size(); }
  size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const uint8_t> take(size_t n);

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

std::string to_hex(std::span<const uint8_t> data);
Bytes from_hex(std::string_view hex);

inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

}  // namespace xfl
