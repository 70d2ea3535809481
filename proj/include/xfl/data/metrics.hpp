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

#include <string>
#include <vector>

namespace xfl::data {

// Kolmogorov-Smirnov statistic of a binary classifier: the maximum of
// |TPR - FPR| over all thresholds placed at the distinct score values.
// Labels must contain both classes (0 and non-zero).
double ks_statistic(const std::vector<double>& scores,
                    const std::vector<double>& labels);

// Area under the ROC curve via the rank-sum formulation; tied scores share
// their midrank.
double auc(const std::vector<double>& scores,
           const std::vector<double>& labels);

// Fraction of samples where (score >= threshold) matches the binary label.
double accuracy(const std::vector<double>& scores,
                const std::vector<double>& labels, double threshold = 0.5);

// Mean binary cross-entropy; probabilities are clamped away from {0,1}.
double log_loss(const std::vector<double>& probabilities,
                const std::vector<double>& labels);

// Evaluation summary attached to training status output.
struct MetricsReport {
  double ks = 0.0;
  double auc = 0.0;
  double accuracy = 0.0;
  double loss = 0.0;

  std::string to_json() const;
};

MetricsReport evaluate_binary(const std::vector<double>& probabilities,
                              const std::vector<double>& labels);

}  // namespace xfl::data
