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
#include <optional>
#include <unordered_map>
#include <vector>

#include "xfl/common/bytes.hpp"
#include "xfl/crypto/packing.hpp"
#include "xfl/crypto/paillier.hpp"

namespace xfl::vertical {

// First- and second-order statistics of the log loss at one sample.
struct GradPair {
  double g = 0.0;
  double h = 0.0;
};

// g = p - y, h = p * (1 - p); predictions must be probabilities.
std::vector<GradPair> compute_grad_pairs(const std::vector<double>& predictions,
                                         const std::vector<double>& labels);

// Gradient-based one-side sampling: keep the top_rate fraction with the
// largest |g| as-is, plus a seeded uniform sample of other_rate from the
// rest, re-weighted by (1 - top_rate) / other_rate to stay unbiased.
struct GossSpec {
  double top_rate = 0.01;
  double other_rate = 0.02;
  uint64_t seed = 0;

  void validate() const;
};

struct GossSelection {
  std::vector<size_t> indices;      // ascending sample indices
  std::vector<double> multipliers;  // aligned with indices
};

GossSelection goss_select(const std::vector<double>& gradients,
                          const GossSpec& spec);

// 1/2 * [G_L^2/(H_L+l) + G_R^2/(H_R+l) - G^2/(H+l)] - gamma, with
// G_R = G - G_L and H_R = H - H_L.
double split_gain(double g_left, double h_left, double g_total,
                  double h_total, double lambda, double gamma);

// Optimal leaf value -G / (H + lambda).
double leaf_weight(double g_total, double h_total, double lambda);

// Per-bin plaintext sums for one feature.
struct FeatureHistogram {
  std::vector<double> g;
  std::vector<double> h;
  std::vector<uint64_t> count;
};

// (sum g, sum h) per bin for the samples present in `pairs`, routed by the
// per-sample bin ids of one feature.
FeatureHistogram build_histogram(
    const std::unordered_map<size_t, GradPair>& pairs,
    const std::vector<uint32_t>& bin_ids,
    const std::vector<size_t>& node_samples, uint32_t n_bins);

// Homomorphic-operation tally for the packing benchmark.
struct CipherOpCounters {
  uint64_t additions = 0;
};

// Per-bin homomorphic sums of packed (g, h) ciphertexts. Bins that receive
// no samples stay empty (nullopt) rather than costing an encryption of
// zero. The feature owner learns nothing: it only adds ciphertexts.
struct EncryptedHistogram {
  uint32_t feature = 0;  // owner-local feature index
  std::vector<uint32_t> counts;
  std::vector<std::optional<crypto::PaillierCiphertext>> bins;

  Bytes serialize() const;
  static EncryptedHistogram deserialize(BinaryReader& reader);
};

// enc_packed maps sample index -> packed ciphertext; samples absent from the
// map (not selected by GOSS) are skipped. Throws on an empty node.
EncryptedHistogram build_encrypted_histogram(
    const crypto::PaillierPublicKey& pk,
    const std::unordered_map<size_t, crypto::PaillierCiphertext>& enc_packed,
    const std::vector<uint32_t>& bin_ids,
    const std::vector<size_t>& node_samples, uint32_t feature,
    uint32_t n_bins, CipherOpCounters* counters = nullptr);

// Reference path without packing: separate g and h ciphertexts per sample,
// summed independently per bin. Exists to measure what packing saves.
struct EncryptedHistogramUnpacked {
  std::vector<uint32_t> counts;
  std::vector<std::optional<crypto::PaillierCiphertext>> g_bins;
  std::vector<std::optional<crypto::PaillierCiphertext>> h_bins;
};

EncryptedHistogramUnpacked build_encrypted_histogram_unpacked(
    const crypto::PaillierPublicKey& pk,
    const std::unordered_map<size_t, crypto::PaillierCiphertext>& enc_g,
    const std::unordered_map<size_t, crypto::PaillierCiphertext>& enc_h,
    const std::vector<uint32_t>& bin_ids,
    const std::vector<size_t>& node_samples, uint32_t n_bins,
    CipherOpCounters* counters = nullptr);

// Decrypt + unpack one encrypted histogram into plaintext sums.
FeatureHistogram decrypt_histogram(const crypto::PaillierPrivateKey& sk,
                                   const EncryptedHistogram& hist,
                                   const crypto::PackParams& pack);

// One candidate split, ordered by (gain desc, party, feature, bin) so that
// ties resolve identically everywhere.
struct SplitCandidate {
  double gain = 0.0;
  int party_ordinal = 0;
  uint32_t feature = 0;
  uint32_t bin = 0;  // left = bins [0, bin], right = the rest
  double g_left = 0.0;
  double h_left = 0.0;
};

// True when a is strictly better than b under the deterministic order.
bool better_candidate(const SplitCandidate& a, const SplitCandidate& b);

// Scans cumulative prefixes of one histogram; skips splits that leave
// either side without samples. Returns nullopt when no valid cut exists.
std::optional<SplitCandidate> best_split_for_feature(
    const FeatureHistogram& hist, double g_total, double h_total,
    double lambda, double gamma, int party_ordinal, uint32_t feature);

}  // namespace xfl::vertical
