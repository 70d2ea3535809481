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

#include "xfl/crypto/bigint.hpp"

#include <cmath>
#include <cstring>

#include "xfl/common/error.hpp"

namespace xfl::crypto {

BigInt BigInt::from_hex(std::string_view hex) {
  BigInt out;
  std::string s(hex);
  if (mpz_set_str(out.v_, s.c_str(), 16) != 0) {
    throw CryptoError("invalid hex integer");
  }
  return out;
}

BigInt BigInt::from_bytes_be(std::span<const uint8_t> bytes) {
  BigInt out;
  if (!bytes.empty()) {
    mpz_import(out.v_, bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return out;
}

BigInt BigInt::from_double(double x) {
  if (!std::isfinite(x)) throw CryptoError("non-finite conversion");
  BigInt out;
  mpz_set_d(out.v_, x);
  return out;
}

Bytes BigInt::to_bytes_be(size_t min_width) const {
  if (sign() < 0) throw CryptoError("cannot export negative integer");
  size_t count = 0;
  size_t nbytes = (mpz_sizeinbase(v_, 2) + 7) / 8;
  if (sign() == 0) nbytes = 0;
  size_t width = std::max(nbytes, min_width);
  Bytes out(width, 0);
  if (nbytes > 0) {
    mpz_export(out.data() + (width - nbytes), &count, 1, 1, 1, 0, v_);
  }
  return out;
}

std::string BigInt::to_hex() const {
  char* s = mpz_get_str(nullptr, 16, v_);
  std::string out(s);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(s, out.size() + 1);
  return out;
}

std::string BigInt::to_dec() const {
  char* s = mpz_get_str(nullptr, 10, v_);
  std::string out(s);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(s, out.size() + 1);
  return out;
}

bool BigInt::fits_u64() const {
  return sign() >= 0 && mpz_sizeinbase(v_, 2) <= 64;
}

uint64_t BigInt::to_u64() const {
  if (!fits_u64()) throw CryptoError("integer does not fit in u64");
  uint64_t out = 0;
  size_t count = 0;
  Bytes bytes(8, 0);
  mpz_export(bytes.data(), &count, 1, 1, 1, 0, v_);
  for (size_t i = 0; i < count; ++i) out = (out << 8) | bytes[i];
  return out;
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt out;
  mpz_add(out.v_, v_, o.v_);
  return out;
}

BigInt BigInt::operator-(const BigInt& o) const {
  BigInt out;
  mpz_sub(out.v_, v_, o.v_);
  return out;
}

BigInt BigInt::operator-() const {
  BigInt out;
  mpz_neg(out.v_, v_);
  return out;
}

BigInt BigInt::operator*(const BigInt& o) const {
  BigInt out;
  mpz_mul(out.v_, v_, o.v_);
  return out;
}

BigInt BigInt::operator/(const BigInt& o) const {
  if (o.sign() == 0) throw CryptoError("division by zero");
  BigInt out;
  mpz_tdiv_q(out.v_, v_, o.v_);
  return out;
}

BigInt BigInt::operator%(const BigInt& o) const {
  if (o.sign() <= 0) throw CryptoError("modulus must be positive");
  BigInt out;
  mpz_mod(out.v_, v_, o.v_);
  return out;
}

BigInt BigInt::operator<<(unsigned bits) const {
  BigInt out;
  mpz_mul_2exp(out.v_, v_, bits);
  return out;
}

BigInt BigInt::operator>>(unsigned bits) const {
  BigInt out;
  mpz_fdiv_q_2exp(out.v_, v_, bits);
  return out;
}

BigInt& BigInt::operator+=(const BigInt& o) {
  mpz_add(v_, v_, o.v_);
  return *this;
}

BigInt& BigInt::operator-=(const BigInt& o) {
  mpz_sub(v_, v_, o.v_);
  return *this;
}

BigInt& BigInt::operator*=(const BigInt& o) {
  mpz_mul(v_, v_, o.v_);
  return *this;
}

BigInt BigInt::powm(const BigInt& base, const BigInt& exp, const BigInt& mod) {
  if (exp.sign() < 0) throw CryptoError("negative exponent");
  BigInt out;
  mpz_powm(out.v_, base.v_, exp.v_, mod.v_);
  return out;
}

BigInt BigInt::mulm(const BigInt& a, const BigInt& b, const BigInt& mod) {
  BigInt out;
  mpz_mul(out.v_, a.v_, b.v_);
  mpz_mod(out.v_, out.v_, mod.v_);
  return out;
}

BigInt BigInt::invmod(const BigInt& mod) const {
  BigInt out;
  if (mpz_invert(out.v_, v_, mod.v_) == 0) {
    throw CryptoError("modular inverse does not exist");
  }
  return out;
}

BigInt BigInt::gcd(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_gcd(out.v_, a.v_, b.v_);
  return out;
}

BigInt BigInt::lcm(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_lcm(out.v_, a.v_, b.v_);
  return out;
}

int BigInt::jacobi(const BigInt& a, const BigInt& n) {
  return mpz_jacobi(a.v_, n.v_);
}

bool BigInt::is_probable_prime(int reps) const {
  return mpz_probab_prime_p(v_, reps) != 0;
}

BigInt BigInt::random_bits(RandomSource& rng, size_t nbits) {
  size_t nbytes = (nbits + 7) / 8;
  Bytes buf = rng.bytes(nbytes);
  // Clear excess top bits.
  unsigned excess = static_cast<unsigned>(nbytes * 8 - nbits);
  if (excess > 0) buf[0] &= static_cast<uint8_t>(0xff >> excess);
  return from_bytes_be(buf);
}

BigInt BigInt::random_bits_exact(RandomSource& rng, size_t nbits) {
  if (nbits == 0) throw CryptoError("random_bits_exact(0)");
  BigInt out = random_bits(rng, nbits);
  mpz_setbit(out.v_, nbits - 1);
  return out;
}

BigInt BigInt::random_below(RandomSource& rng, const BigInt& bound) {
  if (bound.sign() <= 0) throw CryptoError("random_below: bound <= 0");
  size_t nbits = bound.bit_length();
  for (;;) {
    BigInt candidate = random_bits(rng, nbits);
    if (candidate < bound) return candidate;
  }
}

BigInt BigInt::random_prime(RandomSource& rng, size_t nbits) {
  if (nbits < 16) throw CryptoError("prime size too small");
  for (;;) {
    BigInt candidate = random_bits_exact(rng, nbits);
    mpz_setbit(candidate.v_, 0);  // odd
    if (candidate.is_probable_prime()) return candidate;
  }
}

}  // namespace xfl::crypto
