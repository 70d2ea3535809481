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

#include <gmp.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "xfl/common/bytes.hpp"
#include "xfl/crypto/rng.hpp"

namespace xfl::crypto {

// Value-semantic arbitrary-precision integer over GMP.
class BigInt {
 public:
  BigInt() { mpz_init(v_); }
  BigInt(uint64_t v) : BigInt() { mpz_import(v_, 1, 1, 8, 0, 0, &v); }  // NOLINT
  BigInt(int64_t v) : BigInt() { mpz_set_si(v_, v); }                   // NOLINT
  BigInt(long long v) : BigInt(static_cast<int64_t>(v)) {}              // NOLINT
  BigInt(int v) : BigInt(static_cast<int64_t>(v)) {}                    // NOLINT
  BigInt(const BigInt& o) { mpz_init_set(v_, o.v_); }
  BigInt(BigInt&& o) noexcept {
    mpz_init(v_);
    mpz_swap(v_, o.v_);
  }
  BigInt& operator=(const BigInt& o) {
    if (this != &o) mpz_set(v_, o.v_);
    return *this;
  }
  BigInt& operator=(BigInt&& o) noexcept {
    mpz_swap(v_, o.v_);
    return *this;
  }
  ~BigInt() { mpz_clear(v_); }

  static BigInt from_hex(std::string_view hex);
  static BigInt from_bytes_be(std::span<const uint8_t> bytes);
  // Truncates toward zero; exact whenever |x| >= 2^52 (integral doubles).
  static BigInt from_double(double x);

  // Big-endian magnitude, zero-padded on the left to at least min_width
  // bytes. Value must be non-negative.
  Bytes to_bytes_be(size_t min_width = 0) const;
  std::string to_hex() const;
  std::string to_dec() const;

  size_t bit_length() const { return mpz_sizeinbase(v_, 2); }
  int sign() const { return mpz_sgn(v_); }
  bool is_odd() const { return mpz_odd_p(v_) != 0; }
  bool fits_u64() const;
  uint64_t to_u64() const;
  double to_double() const { return mpz_get_d(v_); }

  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator-() const;
  BigInt operator*(const BigInt& o) const;
  BigInt operator/(const BigInt& o) const;  // truncating
  BigInt operator%(const BigInt& o) const;  // non-negative result (mod)
  BigInt operator<<(unsigned bits) const;
  BigInt operator>>(unsigned bits) const;

  BigInt& operator+=(const BigInt& o);
  BigInt& operator-=(const BigInt& o);
  BigInt& operator*=(const BigInt& o);

  auto operator<=>(const BigInt& o) const { return mpz_cmp(v_, o.v_) <=> 0; }
  bool operator==(const BigInt& o) const { return mpz_cmp(v_, o.v_) == 0; }

  static BigInt powm(const BigInt& base, const BigInt& exp, const BigInt& mod);
  static BigInt mulm(const BigInt& a, const BigInt& b, const BigInt& mod);
  // Modular inverse; throws CryptoError when none exists.
  BigInt invmod(const BigInt& mod) const;
  static BigInt gcd(const BigInt& a, const BigInt& b);
  static BigInt lcm(const BigInt& a, const BigInt& b);
  // Jacobi symbol (a/n); n must be odd positive.
  static int jacobi(const BigInt& a, const BigInt& n);
  bool is_probable_prime(int reps = 30) const;

  // Uniform random integer of exactly nbits (top bit set).
  static BigInt random_bits_exact(RandomSource& rng, size_t nbits);
  // Uniform random integer with at most nbits bits.
  static BigInt random_bits(RandomSource& rng, size_t nbits);
  // Uniform in [0, bound).
  static BigInt random_below(RandomSource& rng, const BigInt& bound);
  // Random prime of exactly nbits.
  static BigInt random_prime(RandomSource& rng, size_t nbits);

  mpz_srcptr raw() const { return v_; }
  mpz_ptr raw() { return v_; }

 private:
  mpz_t v_;
};

}  // namespace xfl::crypto
