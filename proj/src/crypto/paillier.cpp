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

#include "xfl/crypto/paillier.hpp"

#include <cmath>
#include <cstring>

#include "xfl/common/error.hpp"
#include "xfl/crypto/hashing.hpp"

namespace xfl::crypto {

namespace {

uint64_t key_id_from_n(const BigInt& n) {
  Digest d = sha256(n.to_bytes_be());
  uint64_t id = 0;
  for (int i = 0; i < 8; ++i) id = (id << 8) | d[i];
  return id;
}

// L_p(x) = (x - 1) / p for x = 1 (mod p).
BigInt l_function(const BigInt& x, const BigInt& p) { return (x - BigInt(1)) / p; }

void check_key_match(const PaillierCiphertext& ct, uint64_t key_id) {
  if (ct.key_id != key_id) throw CryptoError("ciphertext does not match key");
}

void check_plaintext_range(const BigInt& m, const BigInt& n) {
  if (m.sign() < 0 || m >= n) throw CryptoError("plaintext out of range");
}

BigInt crt_combine(const BigInt& rp, const BigInt& rq, const BigInt& p_mod,
                   const BigInt& q_mod, const BigInt& p_inv_mod_q) {
  // Garner: r = rp + p_mod * ((rq - rp) * p_inv mod q_mod)
  BigInt t = ((rq - rp) * p_inv_mod_q) % q_mod;
  return rp + p_mod * t;
}

}  // namespace

Bytes PaillierPublicKey::serialize() const {
  BinaryWriter w;
  w.u32(key_bits);
  w.u32(djn_exp_bits);
  w.u64(key_id);
  w.bytes(n.to_bytes_be());
  w.bytes(h_n.to_bytes_be());
  return std::move(w).take();
}

PaillierPublicKey PaillierPublicKey::deserialize(BinaryReader& reader) {
  PaillierPublicKey pk;
  pk.key_bits = reader.u32();
  pk.djn_exp_bits = reader.u32();
  pk.key_id = reader.u64();
  pk.n = BigInt::from_bytes_be(reader.bytes());
  pk.h_n = BigInt::from_bytes_be(reader.bytes());
  pk.n_squared = pk.n * pk.n;
  if (pk.key_id != key_id_from_n(pk.n))
    throw CryptoError("public key identifier mismatch");
  return pk;
}

Bytes PaillierCiphertext::serialize() const {
  BinaryWriter w;
  w.u64(key_id);
  w.i64(exponent);
  w.bytes(value.to_bytes_be());
  return std::move(w).take();
}

PaillierCiphertext PaillierCiphertext::deserialize(BinaryReader& reader) {
  PaillierCiphertext ct;
  ct.key_id = reader.u64();
  ct.exponent = static_cast<int32_t>(reader.i64());
  ct.value = BigInt::from_bytes_be(reader.bytes());
  return ct;
}

PaillierKeypair paillier_keygen(uint32_t key_bits, uint32_t djn_exp_bits,
                                RandomSource& rng) {
  if (key_bits != 512 && key_bits != 1024 && key_bits != 2048 &&
      key_bits != 3072)
    throw CryptoError("unsupported modulus size");
  if (djn_exp_bits == 0) djn_exp_bits = key_bits >= 2048 ? 448 : 320;
  if (djn_exp_bits < 320) throw CryptoError("randomizer exponent too short");

  const uint32_t prime_bits = key_bits / 2;
  BigInt p = BigInt::random_prime(rng, prime_bits);
  BigInt q, n;
  while (true) {
    q = BigInt::random_prime(rng, prime_bits);
    if (p == q) continue;
    n = p * q;
    // Retry until the product lands on exactly key_bits bits.
    if (n.bit_length() == key_bits) break;
  }
  if (q < p) std::swap(p, q);

  PaillierKeypair kp;
  kp.pub.n = n;
  kp.pub.n_squared = n * n;
  kp.pub.key_bits = key_bits;
  kp.pub.djn_exp_bits = djn_exp_bits;
  kp.pub.key_id = key_id_from_n(n);

  // Randomizer base: random unit of Jacobi symbol -1, raised to the n.
  BigInt h;
  while (true) {
    h = BigInt::random_below(rng, n);
    if (h.sign() <= 0) continue;
    if (BigInt::gcd(h, n) != BigInt(1)) continue;
    if (BigInt::jacobi(h, n) == -1) break;
  }

  PaillierPrivateKey& sk = kp.priv;
  sk.p = p;
  sk.q = q;
  sk.p_squared = p * p;
  sk.q_squared = q * q;
  sk.n = n;
  sk.key_id = kp.pub.key_id;
  sk.p_inv_mod_q = p.invmod(q);
  sk.p2_inv_mod_q2 = sk.p_squared.invmod(sk.q_squared);

  // h^n mod n^2 via its CRT residues.
  BigInt pm1 = p - BigInt(1);
  BigInt qm1 = q - BigInt(1);
  sk.h_n_mod_p2 = BigInt::powm(h % sk.p_squared, n, sk.p_squared);
  sk.h_n_mod_q2 = BigInt::powm(h % sk.q_squared, n, sk.q_squared);
  kp.pub.h_n = crt_combine(sk.h_n_mod_p2, sk.h_n_mod_q2, sk.p_squared,
                           sk.q_squared, sk.p2_inv_mod_q2);

  // Decryption constants: hp = L_p((n+1)^(p-1) mod p^2)^-1 mod p, same for q.
  BigInt g = n + BigInt(1);
  sk.hp = (l_function(BigInt::powm(g % sk.p_squared, pm1, sk.p_squared), p) % p).invmod(p);
  sk.hq = (l_function(BigInt::powm(g % sk.q_squared, qm1, sk.q_squared), q) % q).invmod(q);
  return kp;
}

PaillierCiphertext paillier_encrypt_pk(const PaillierPublicKey& pk,
                                       const BigInt& m, RandomSource& rng,
                                       int32_t exponent) {
  check_plaintext_range(m, pk.n);
  BigInt alpha = BigInt::random_bits(rng, pk.djn_exp_bits);
  BigInt gm = (BigInt(1) + m * pk.n) % pk.n_squared;
  BigInt c = BigInt::mulm(gm, BigInt::powm(pk.h_n, alpha, pk.n_squared), pk.n_squared);
  return PaillierCiphertext{std::move(c), pk.key_id, exponent};
}

PaillierCiphertext paillier_encrypt_pk_full(const PaillierPublicKey& pk,
                                            const BigInt& m, RandomSource& rng,
                                            int32_t exponent) {
  check_plaintext_range(m, pk.n);
  BigInt r;
  do {
    r = BigInt::random_below(rng, pk.n);
  } while (r.sign() <= 0 || BigInt::gcd(r, pk.n) != BigInt(1));
  BigInt gm = (BigInt(1) + m * pk.n) % pk.n_squared;
  BigInt c = BigInt::mulm(gm, BigInt::powm(r, pk.n, pk.n_squared), pk.n_squared);
  return PaillierCiphertext{std::move(c), pk.key_id, exponent};
}

PaillierCiphertext paillier_encrypt_sk(const PaillierPrivateKey& sk,
                                       const PaillierPublicKey& pk,
                                       const BigInt& m, RandomSource& rng,
                                       int32_t exponent) {
  check_plaintext_range(m, pk.n);
  BigInt alpha = BigInt::random_bits(rng, pk.djn_exp_bits);
  BigInt rp = BigInt::powm(sk.h_n_mod_p2, alpha, sk.p_squared);
  BigInt rq = BigInt::powm(sk.h_n_mod_q2, alpha, sk.q_squared);
  BigInt randomizer =
      crt_combine(rp, rq, sk.p_squared, sk.q_squared, sk.p2_inv_mod_q2);
  BigInt gm = (BigInt(1) + m * pk.n) % pk.n_squared;
  BigInt c = BigInt::mulm(gm, randomizer, pk.n_squared);
  return PaillierCiphertext{std::move(c), pk.key_id, exponent};
}

BigInt paillier_decrypt(const PaillierPrivateKey& sk,
                        const PaillierCiphertext& ct) {
  check_key_match(ct, sk.key_id);
  if (ct.value.sign() <= 0 || ct.value >= sk.p_squared * sk.q_squared)
    throw CryptoError("ciphertext out of range");
  BigInt pm1 = sk.p - BigInt(1);
  BigInt qm1 = sk.q - BigInt(1);
  BigInt mp = BigInt::mulm(
      l_function(BigInt::powm(ct.value % sk.p_squared, pm1, sk.p_squared), sk.p) % sk.p,
      sk.hp, sk.p);
  BigInt mq = BigInt::mulm(
      l_function(BigInt::powm(ct.value % sk.q_squared, qm1, sk.q_squared), sk.q) % sk.q,
      sk.hq, sk.q);
  return crt_combine(mp, mq, sk.p, sk.q, sk.p_inv_mod_q) % sk.n;
}

PaillierCiphertext ct_add(const PaillierPublicKey& pk,
                          const PaillierCiphertext& a,
                          const PaillierCiphertext& b) {
  check_key_match(a, pk.key_id);
  check_key_match(b, pk.key_id);
  if (a.exponent != b.exponent)
    throw CryptoError("ciphertext exponents differ");
  return PaillierCiphertext{BigInt::mulm(a.value, b.value, pk.n_squared),
                            pk.key_id, a.exponent};
}

PaillierCiphertext ct_mul_scalar(const PaillierPublicKey& pk,
                                 const PaillierCiphertext& a, const BigInt& k,
                                 int32_t k_scale_bits) {
  check_key_match(a, pk.key_id);
  if (k.sign() < 0 || k >= pk.n) throw CryptoError("scalar out of range");
  return PaillierCiphertext{BigInt::powm(a.value, k, pk.n_squared), pk.key_id,
                            a.exponent + k_scale_bits};
}

PaillierCiphertext ct_mul_signed(const PaillierPublicKey& pk,
                                 const PaillierCiphertext& a,
                                 const BigInt& k_signed,
                                 int32_t k_scale_bits) {
  if (k_signed.sign() >= 0) return ct_mul_scalar(pk, a, k_signed, k_scale_bits);
  check_key_match(a, pk.key_id);
  BigInt inv = a.value.invmod(pk.n_squared);
  return PaillierCiphertext{BigInt::powm(inv, -k_signed, pk.n_squared),
                            pk.key_id, a.exponent + k_scale_bits};
}

BigInt encode_signed(const BigInt& v, const BigInt& n) {
  BigInt twice = v.sign() < 0 ? -(v + v) : v + v;
  if (twice >= n) throw CryptoError("signed value exceeds plaintext range");
  return v.sign() < 0 ? n + v : v;
}

BigInt decode_signed(const BigInt& m, const BigInt& n) {
  if (m.sign() < 0 || m >= n) throw CryptoError("residue out of range");
  return m + m > n ? m - n : m;
}

BigInt fp_to_int(double x, int32_t scale_bits) {
  if (!std::isfinite(x)) throw CryptoError("non-finite fixed-point input");
  double scaled = std::ldexp(x, scale_bits);
  if (std::fabs(scaled) < 9.0e18) return BigInt(std::llround(scaled));
  // Beyond 2^63 a double has no fractional part; conversion is exact.
  return BigInt::from_double(scaled);
}

double int_to_fp(const BigInt& v, int32_t scale_bits) {
  return std::ldexp(v.to_double(), -scale_bits);
}

PaillierCiphertext paillier_encrypt_fp(const PaillierPublicKey& pk, double x,
                                       int32_t scale_bits, RandomSource& rng) {
  BigInt m = encode_signed(fp_to_int(x, scale_bits), pk.n);
  return paillier_encrypt_pk(pk, m, rng, scale_bits);
}

double paillier_decrypt_fp(const PaillierPrivateKey& sk,
                           const PaillierCiphertext& ct) {
  BigInt m = decode_signed(paillier_decrypt(sk, ct), sk.n);
  return int_to_fp(m, ct.exponent);
}

}  // namespace xfl::crypto
