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

#include "xfl/data/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "xfl/common/error.hpp"

namespace xfl::data {

namespace {

struct ClassCounts {
  double positives = 0.0;
  double negatives = 0.0;
};

ClassCounts count_classes(const std::vector<double>& scores,
                          const std::vector<double>& labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError("scores and labels differ in length");
  }
  if (scores.empty()) throw ValidationError("no samples to evaluate");
  ClassCounts c;
  for (double y : labels) (y != 0.0 ? c.positives : c.negatives) += 1.0;
  if (c.positives == 0.0 || c.negatives == 0.0) {
    throw ValidationError("metric needs both classes present");
  }
  return c;
}

}  // namespace

double ks_statistic(const std::vector<double>& scores,
                    const std::vector<double>& labels) {
  const ClassCounts c = count_classes(scores, labels);
  const size_t n = scores.size();

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  // Sweep thresholds downward; evaluate after consuming each group of equal
  // scores (threshold at that score value, predicting positive when
  // score >= threshold).
  double best = 0.0;
  double tp = 0.0;
  double fp = 0.0;
  size_t i = 0;
  while (i < n) {
    const double s = scores[order[i]];
    for (; i < n && scores[order[i]] == s; ++i) {
      (labels[order[i]] != 0.0 ? tp : fp) += 1.0;
    }
    best = std::max(best, std::fabs(tp / c.positives - fp / c.negatives));
  }
  return best;
}

double auc(const std::vector<double>& scores,
           const std::vector<double>& labels) {
  const ClassCounts c = count_classes(scores, labels);
  const size_t n = scores.size();

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  // Rank-sum with midranks for ties: AUC = (R+ - P(P+1)/2) / (P*N).
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) +
                            static_cast<double>(j)) / 2.0;  // 1-based
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0.0) rank_sum_pos += midrank;
    }
    i = j;
  }
  return (rank_sum_pos - c.positives * (c.positives + 1.0) / 2.0) /
         (c.positives * c.negatives);
}

double accuracy(const std::vector<double>& scores,
                const std::vector<double>& labels, double threshold) {
  if (scores.size() != labels.size()) {
    throw ValidationError("scores and labels differ in length");
  }
  if (scores.empty()) throw ValidationError("no samples to evaluate");
  size_t correct = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] != 0.0;
    if (predicted == actual) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

double log_loss(const std::vector<double>& probabilities,
                const std::vector<double>& labels) {
  if (probabilities.size() != labels.size()) {
    throw ValidationError("probabilities and labels differ in length");
  }
  if (probabilities.empty()) throw ValidationError("no samples to evaluate");
  constexpr double kEps = 1e-12;
  double total = 0.0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    const double p = std::clamp(probabilities[i], kEps, 1.0 - kEps);
    total += labels[i] != 0.0 ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(probabilities.size());
}

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  j["ks"] = ks;
  j["auc"] = auc;
  j["accuracy"] = accuracy;
  j["loss"] = loss;
  return j.dump();
}

MetricsReport evaluate_binary(const std::vector<double>& probabilities,
                              const std::vector<double>& labels) {
  MetricsReport report;
  report.ks = ks_statistic(probabilities, labels);
  report.auc = auc(probabilities, labels);
  report.accuracy = accuracy(probabilities, labels);
  report.loss = log_loss(probabilities, labels);
  return report;
}

}  // namespace xfl::data
