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
#include <utility>

#include "xfl/common/bytes.hpp"
#include "xfl/crypto/bigint.hpp"
#include "xfl/crypto/rng.hpp"

namespace xfl::crypto {

// Additively homomorphic Paillier cryptosystem with two acceleration paths:
//
//  * short-exponent public-key encryption: the key carries h_n = h^n mod n^2
//    for a base h of Jacobi symbol -1, so the randomizer is h_n^alpha with a
//    short alpha instead of a full-width r^n;
//  * secret-key encryption: with the factorization known, the randomizer
//    exponentiation is done modulo p^2 and q^2 separately and recombined.
//
// The generator is fixed to n+1, making (n+1)^m = 1 + m*n (mod n^2).
// Plaintexts are integers in [0, n); signed values map through the
// complement encoding (encode_signed / decode_signed below).

struct PaillierPublicKey {
  BigInt n;
  BigInt n_squared;
  BigInt h_n;  // h^n mod n^2, randomizer base for short exponents
  uint32_t key_bits = 0;
  uint32_t djn_exp_bits = 0;
  uint64_t key_id = 0;

  Bytes serialize() const;
  static PaillierPublicKey deserialize(BinaryReader& reader);
};

struct PaillierPrivateKey {
  BigInt p, q;
  BigInt p_squared, q_squared;
  BigInt hp, hq;          // decryption constants mod p and q
  BigInt p_inv_mod_q;     // CRT recombination for decryption
  BigInt p2_inv_mod_q2;   // CRT recombination for encryption
  BigInt h_n_mod_p2, h_n_mod_q2;
  BigInt n;
  uint64_t key_id = 0;
};

struct PaillierCiphertext {
  BigInt value;          // in [0, n^2)
  uint64_t key_id = 0;   // binds ciphertext to its public key
  int32_t exponent = 0;  // fixed-point scale of the embedded plaintext

  Bytes serialize() const;
  static PaillierCiphertext deserialize(BinaryReader& reader);
};

struct PaillierKeypair {
  PaillierPublicKey pub;
  PaillierPrivateKey priv;
};

// key_bits in {512, 1024, 2048, 3072}; djn_exp_bits >= 320 (0 selects the
// default: 448 at >= 2048-bit keys, 320 below). Deterministic given a
// seeded RandomSource; pass OsRandom for production keys.
PaillierKeypair paillier_keygen(uint32_t key_bits, uint32_t djn_exp_bits,
                                RandomSource& rng);
inline PaillierKeypair paillier_keygen(uint32_t key_bits, RandomSource& rng) {
  return paillier_keygen(key_bits, 0, rng);
}

PaillierCiphertext paillier_encrypt_pk(const PaillierPublicKey& pk,
                                       const BigInt& m, RandomSource& rng,
                                       int32_t exponent = 0);

// Classic full-width randomizer r^n (r uniform in Z_n). Reference path for
// the short-exponent speedup comparison; identical contract otherwise.
PaillierCiphertext paillier_encrypt_pk_full(const PaillierPublicKey& pk,
                                            const BigInt& m, RandomSource& rng,
                                            int32_t exponent = 0);

PaillierCiphertext paillier_encrypt_sk(const PaillierPrivateKey& sk,
                                       const PaillierPublicKey& pk,
                                       const BigInt& m, RandomSource& rng,
                                       int32_t exponent = 0);

BigInt paillier_decrypt(const PaillierPrivateKey& sk,
                        const PaillierCiphertext& ct);

// Homomorphic sum: requires matching key and exponent.
PaillierCiphertext ct_add(const PaillierPublicKey& pk,
                          const PaillierCiphertext& a,
                          const PaillierCiphertext& b);

// Decrypts to k*m mod n for k in [0, n). When k carries a fixed-point scale,
// the ciphertext exponent grows by k_scale_bits.
PaillierCiphertext ct_mul_scalar(const PaillierPublicKey& pk,
                                 const PaillierCiphertext& a, const BigInt& k,
                                 int32_t k_scale_bits = 0);

// Signed-scalar variant: negative k is applied as |k| against the inverted
// ciphertext so the exponentiation stays |k|-sized.
PaillierCiphertext ct_mul_signed(const PaillierPublicKey& pk,
                                 const PaillierCiphertext& a,
                                 const BigInt& k_signed,
                                 int32_t k_scale_bits = 0);

// ---- signed / fixed-point plaintext codec -------------------------------
//
// Signed integers embed into [0, n) by complement: v >= 0 maps to v, v < 0
// maps to n + v. Decoding treats residues above n/2 as negative. The usable
// signed range is |v| < n/2; encode_signed rejects values outside it.

BigInt encode_signed(const BigInt& v, const BigInt& n);
BigInt decode_signed(const BigInt& m, const BigInt& n);

// round(x * 2^scale_bits) as a signed integer (round half away from zero).
BigInt fp_to_int(double x, int32_t scale_bits);
double int_to_fp(const BigInt& v, int32_t scale_bits);

// Convenience: encrypt/decrypt doubles at a fixed-point scale. The scale is
// recorded in the ciphertext exponent, so homomorphic scalar products track
// their accumulated scale automatically.
PaillierCiphertext paillier_encrypt_fp(const PaillierPublicKey& pk, double x,
                                       int32_t scale_bits, RandomSource& rng);
double paillier_decrypt_fp(const PaillierPrivateKey& sk,
                           const PaillierCiphertext& ct);

}  // namespace xfl::crypto
