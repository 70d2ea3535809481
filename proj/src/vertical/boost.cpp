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

#include "xfl/vertical/boost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include "xfl/common/error.hpp"

namespace xfl::vertical {

std::vector<GradPair> compute_grad_pairs(const std::vector<double>& predictions,
                                         const std::vector<double>& labels) {
  if (predictions.size() != labels.size()) {
    throw ValidationError("predictions and labels differ in length");
  }
  std::vector<GradPair> pairs(predictions.size());
  for (size_t i = 0; i < predictions.size(); ++i) {
    const double p = predictions[i];
    if (!(p > 0.0) || !(p < 1.0)) {
      throw ValidationError("prediction " + std::to_string(p) +
                            " is not a probability in (0, 1)");
    }
    pairs[i].g = p - (labels[i] != 0.0 ? 1.0 : 0.0);
    pairs[i].h = p * (1.0 - p);
  }
  return pairs;
}

void GossSpec::validate() const {
  if (!(top_rate > 0.0) || !(other_rate > 0.0)) {
    throw ValidationError("goss rates must be positive");
  }
  if (top_rate + other_rate > 1.0) {
    throw ValidationError("goss top_rate + other_rate must not exceed 1");
  }
}

GossSelection goss_select(const std::vector<double>& gradients,
                          const GossSpec& spec) {
  spec.validate();
  const size_t n = gradients.size();
  const size_t n_top =
      static_cast<size_t>(std::ceil(spec.top_rate * static_cast<double>(n)));
  if (n_top < 1) {
    throw ValidationError("goss needs top_rate * n >= 1 (n = " +
                          std::to_string(n) + ")");
  }
  const size_t n_other = std::min(
      n - n_top, static_cast<size_t>(
                     std::ceil(spec.other_rate * static_cast<double>(n))));

  // Stable order: |g| descending, index ascending on ties.
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double ga = std::fabs(gradients[a]);
    const double gb = std::fabs(gradients[b]);
    return ga != gb ? ga > gb : a < b;
  });

  std::vector<std::pair<size_t, double>> picked;
  picked.reserve(n_top + n_other);
  for (size_t k = 0; k < n_top; ++k) picked.emplace_back(order[k], 1.0);

  // Seeded uniform sample without replacement from the remainder.
  std::vector<size_t> rest(order.begin() + n_top, order.end());
  std::mt19937_64 rng(spec.seed);
  std::shuffle(rest.begin(), rest.end(), rng);
  const double amplify = (1.0 - spec.top_rate) / spec.other_rate;
  for (size_t k = 0; k < n_other; ++k) {
    picked.emplace_back(rest[k], amplify);
  }

  std::sort(picked.begin(), picked.end());
  GossSelection sel;
  sel.indices.reserve(picked.size());
  sel.multipliers.reserve(picked.size());
  for (const auto& [idx, mult] : picked) {
    sel.indices.push_back(idx);
    sel.multipliers.push_back(mult);
  }
  return sel;
}

double split_gain(double g_left, double h_left, double g_total,
                  double h_total, double lambda, double gamma) {
  const double g_right = g_total - g_left;
  const double h_right = h_total - h_left;
  auto score = [lambda](double g, double h) { return g * g / (h + lambda); };
  return 0.5 * (score(g_left, h_left) + score(g_right, h_right) -
                score(g_total, h_total)) -
         gamma;
}

double leaf_weight(double g_total, double h_total, double lambda) {
  if (!(h_total + lambda > 0.0)) {
    throw ValidationError("leaf weight needs H + lambda > 0");
  }
  return -g_total / (h_total + lambda);
}

FeatureHistogram build_histogram(
    const std::unordered_map<size_t, GradPair>& pairs,
    const std::vector<uint32_t>& bin_ids,
    const std::vector<size_t>& node_samples, uint32_t n_bins) {
  if (n_bins == 0) throw ValidationError("histogram needs at least one bin");
  FeatureHistogram hist;
  hist.g.assign(n_bins, 0.0);
  hist.h.assign(n_bins, 0.0);
  hist.count.assign(n_bins, 0);
  for (size_t i : node_samples) {
    const auto it = pairs.find(i);
    if (it == pairs.end()) continue;  // not selected this tree
    if (i >= bin_ids.size()) {
      throw ValidationError("sample index out of binning range");
    }
    const uint32_t b = bin_ids[i];
    if (b >= n_bins) throw ValidationError("bin id out of range");
    hist.g[b] += it->second.g;
    hist.h[b] += it->second.h;
    hist.count[b] += 1;
  }
  return hist;
}

EncryptedHistogram build_encrypted_histogram(
    const crypto::PaillierPublicKey& pk,
    const std::unordered_map<size_t, crypto::PaillierCiphertext>& enc_packed,
    const std::vector<uint32_t>& bin_ids,
    const std::vector<size_t>& node_samples, uint32_t feature,
    uint32_t n_bins, CipherOpCounters* counters) {
  if (node_samples.empty()) {
    throw ValidationError("cannot build a histogram for an empty node");
  }
  if (n_bins == 0) throw ValidationError("histogram needs at least one bin");
  EncryptedHistogram hist;
  hist.feature = feature;
  hist.counts.assign(n_bins, 0);
  hist.bins.assign(n_bins, std::nullopt);
  for (size_t i : node_samples) {
    const auto it = enc_packed.find(i);
    if (it == enc_packed.end()) continue;
    if (i >= bin_ids.size()) {
      throw ValidationError("sample index out of binning range");
    }
    const uint32_t b = bin_ids[i];
    if (b >= n_bins) throw ValidationError("bin id out of range");
    if (!hist.bins[b]) {
      hist.bins[b] = it->second;
    } else {
      hist.bins[b] = crypto::ct_add(pk, *hist.bins[b], it->second);
      if (counters != nullptr) ++counters->additions;
    }
    hist.counts[b] += 1;
  }
  return hist;
}

EncryptedHistogramUnpacked build_encrypted_histogram_unpacked(
    const crypto::PaillierPublicKey& pk,
    const std::unordered_map<size_t, crypto::PaillierCiphertext>& enc_g,
    const std::unordered_map<size_t, crypto::PaillierCiphertext>& enc_h,
    const std::vector<uint32_t>& bin_ids,
    const std::vector<size_t>& node_samples, uint32_t n_bins,
    CipherOpCounters* counters) {
  if (node_samples.empty()) {
    throw ValidationError("cannot build a histogram for an empty node");
  }
  EncryptedHistogramUnpacked hist;
  hist.counts.assign(n_bins, 0);
  hist.g_bins.assign(n_bins, std::nullopt);
  hist.h_bins.assign(n_bins, std::nullopt);
  for (size_t i : node_samples) {
    const auto gi = enc_g.find(i);
    if (gi == enc_g.end()) continue;
    const auto hi = enc_h.find(i);
    if (hi == enc_h.end()) {
      throw ValidationError("sample has g ciphertext but no h ciphertext");
    }
    const uint32_t b = bin_ids.at(i);
    if (b >= n_bins) throw ValidationError("bin id out of range");
    if (!hist.g_bins[b]) {
      hist.g_bins[b] = gi->second;
      hist.h_bins[b] = hi->second;
    } else {
      hist.g_bins[b] = crypto::ct_add(pk, *hist.g_bins[b], gi->second);
      hist.h_bins[b] = crypto::ct_add(pk, *hist.h_bins[b], hi->second);
      if (counters != nullptr) counters->additions += 2;
    }
    hist.counts[b] += 1;
  }
  return hist;
}

Bytes EncryptedHistogram::serialize() const {
  if (counts.size() != bins.size()) {
    throw ValidationError("encrypted histogram counts/bins length mismatch");
  }
  BinaryWriter w;
  w.u32(feature);
  w.u32(static_cast<uint32_t>(counts.size()));
  for (size_t b = 0; b < counts.size(); ++b) {
    if ((counts[b] > 0) != bins[b].has_value()) {
      throw ValidationError("histogram bin count and ciphertext disagree");
    }
    w.u32(counts[b]);
    if (bins[b]) w.bytes(bins[b]->serialize());
  }
  return w.take();
}

EncryptedHistogram EncryptedHistogram::deserialize(BinaryReader& r) {
  EncryptedHistogram hist;
  hist.feature = r.u32();
  const uint32_t n_bins = r.u32();
  hist.counts.resize(n_bins);
  hist.bins.assign(n_bins, std::nullopt);
  for (uint32_t b = 0; b < n_bins; ++b) {
    hist.counts[b] = r.u32();
    if (hist.counts[b] > 0) {
      const Bytes raw = r.bytes();
      BinaryReader ct_reader(raw);
      hist.bins[b] = crypto::PaillierCiphertext::deserialize(ct_reader);
    }
  }
  return hist;
}

FeatureHistogram decrypt_histogram(const crypto::PaillierPrivateKey& sk,
                                   const EncryptedHistogram& hist,
                                   const crypto::PackParams& pack) {
  FeatureHistogram out;
  const size_t n_bins = hist.counts.size();
  out.g.assign(n_bins, 0.0);
  out.h.assign(n_bins, 0.0);
  out.count.assign(n_bins, 0);
  for (size_t b = 0; b < n_bins; ++b) {
    out.count[b] = hist.counts[b];
    if (hist.counts[b] == 0) continue;
    if (!hist.bins[b]) {
      throw ValidationError("non-empty histogram bin lacks a ciphertext");
    }
    const crypto::BigInt m = crypto::paillier_decrypt(sk, *hist.bins[b]);
    const crypto::GhPair sums =
        crypto::unpack_pair_sum(m, hist.counts[b], pack);
    out.g[b] = sums.g;
    out.h[b] = sums.h;
  }
  return out;
}

bool better_candidate(const SplitCandidate& a, const SplitCandidate& b) {
  if (a.gain != b.gain) return a.gain > b.gain;
  return std::tie(a.party_ordinal, a.feature, a.bin) <
         std::tie(b.party_ordinal, b.feature, b.bin);
}

std::optional<SplitCandidate> best_split_for_feature(
    const FeatureHistogram& hist, double g_total, double h_total,
    double lambda, double gamma, int party_ordinal, uint32_t feature) {
  const size_t n_bins = hist.g.size();
  uint64_t total_count = 0;
  for (uint64_t c : hist.count) total_count += c;

  std::optional<SplitCandidate> best;
  double g_left = 0.0;
  double h_left = 0.0;
  uint64_t count_left = 0;
  // A cut after bin b sends bins [0, b] left; the last bin can never be a
  // cut point (everything would go left).
  for (size_t b = 0; b + 1 < n_bins; ++b) {
    g_left += hist.g[b];
    h_left += hist.h[b];
    count_left += hist.count[b];
    if (count_left == 0 || count_left == total_count) continue;
    SplitCandidate cand;
    cand.gain = split_gain(g_left, h_left, g_total, h_total, lambda, gamma);
    cand.party_ordinal = party_ordinal;
    cand.feature = feature;
    cand.bin = static_cast<uint32_t>(b);
    cand.g_left = g_left;
    cand.h_left = h_left;
    if (!best || better_candidate(cand, *best)) best = cand;
  }
  return best;
}

}  // namespace xfl::vertical
