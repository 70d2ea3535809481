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
#include <span>
#include <string>
#include <vector>

#include "xfl/data/table.hpp"

namespace xfl::horizontal {

// Named parameter tensors in a fixed order. The order is the flattening
// layout, so flatten/unflatten are exact inverses and every party agrees on
// the wire representation.
struct ModelState {
  struct Entry {
    std::string name;
    std::vector<double> values;
    bool operator==(const Entry&) const = default;
  };
  std::vector<Entry> entries;

  bool operator==(const ModelState&) const = default;

  size_t total_size() const;
  bool same_layout(const ModelState& other) const;

  std::vector<double> flatten() const;
  // Rebuilds a state with this layout from a flat vector of total_size().
  ModelState unflatten_like(std::span<const double> flat) const;

  std::vector<double>& tensor(const std::string& name);
  const std::vector<double>& tensor(const std::string& name) const;

  std::string to_json() const;
  static ModelState from_json(const std::string& text);
};

// Throws ValidationError unless a and b have identical layouts.
void require_same_layout(const ModelState& a, const ModelState& b);

ModelState zeros_like(const ModelState& layout);
// y += a * x (entry-wise; layouts must match).
void axpy(ModelState& y, double a, const ModelState& x);
void scale(ModelState& y, double a);

enum class ModelKind {
  kLinearRegression,
  kLogisticRegression,
  kMlp,
  kSoftmax,  // multinomial logistic regression over n_classes classes
};

struct ModelSpec {
  ModelKind kind = ModelKind::kLogisticRegression;
  size_t n_features = 0;
  size_t hidden = 8;       // MLP hidden width
  uint64_t init_seed = 0;  // MLP weight init (shared by all parties)
  size_t n_classes = 2;    // softmax class count; labels are ids in [0, C)

  void validate() const;
};

// Linear/logistic/softmax start from zeros; the MLP draws
// uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) weights from init_seed so every
// party starts identically.
ModelState init_model(const ModelSpec& spec);

// Raw score for linear regression, probability for the binary classifiers,
// argmax class id for softmax.
std::vector<double> predict(const ModelSpec& spec, const ModelState& state,
                            const data::Table& table);

// Per-class softmax probabilities, row-major n_rows x n_classes.
std::vector<double> predict_proba(const ModelSpec& spec,
                                  const ModelState& state,
                                  const data::Table& table);

struct GradResult {
  ModelState grad;  // gradient of the mean loss over the batch
  double loss = 0.0;
};

// Mean-loss gradient over the given rows: squared error (halved) for linear
// regression, binary cross-entropy for logistic regression and the MLP,
// multiclass cross-entropy for softmax.
GradResult model_grad(const ModelSpec& spec, const ModelState& state,
                      const data::Table& table,
                      std::span<const size_t> batch);

// Mean loss over all rows of the table.
double model_loss(const ModelSpec& spec, const ModelState& state,
                  const data::Table& table);

}  // namespace xfl::horizontal
