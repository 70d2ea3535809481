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

#include "xfl/horizontal/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <json.hpp>

#include "xfl/common/error.hpp"

namespace xfl::horizontal {

namespace {

double sigmoid(double z) {
  // Branch keeps exp() argument negative for numerical stability.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double bce(double p, double y) {
  constexpr double kEps = 1e-12;
  const double q = std::clamp(p, kEps, 1.0 - kEps);
  return y != 0.0 ? -std::log(q) : -std::log(1.0 - q);
}

const std::vector<double>& labels_of(const data::Table& table) {
  if (!table.labels) {
    throw ValidationError("horizontal training requires a labeled table");
  }
  return *table.labels;
}

size_t class_of(double label, size_t n_classes) {
  const double r = std::round(label);
  if (!(std::abs(label - r) < 1e-9) || r < 0.0 ||
      r >= static_cast<double>(n_classes)) {
    throw ValidationError("softmax label " + std::to_string(label) +
                          " is not a class id in [0, " +
                          std::to_string(n_classes) + ")");
  }
  return static_cast<size_t>(r);
}

}  // namespace

size_t ModelState::total_size() const {
  size_t n = 0;
  for (const auto& e : entries) n += e.values.size();
  return n;
}

bool ModelState::same_layout(const ModelState& other) const {
  if (entries.size() != other.entries.size()) return false;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].name != other.entries[i].name ||
        entries[i].values.size() != other.entries[i].values.size()) {
      return false;
    }
  }
  return true;
}

std::vector<double> ModelState::flatten() const {
  std::vector<double> out;
  out.reserve(total_size());
  for (const auto& e : entries) {
    out.insert(out.end(), e.values.begin(), e.values.end());
  }
  return out;
}

ModelState ModelState::unflatten_like(std::span<const double> flat) const {
  if (flat.size() != total_size()) {
    throw ValidationError("flat vector of " + std::to_string(flat.size()) +
                          " values does not fit model layout of " +
                          std::to_string(total_size()));
  }
  ModelState out;
  size_t offset = 0;
  for (const auto& e : entries) {
    ModelState::Entry ne;
    ne.name = e.name;
    ne.values.assign(flat.begin() + offset,
                     flat.begin() + offset + e.values.size());
    offset += e.values.size();
    out.entries.push_back(std::move(ne));
  }
  return out;
}

std::vector<double>& ModelState::tensor(const std::string& name) {
  for (auto& e : entries) {
    if (e.name == name) return e.values;
  }
  throw ValidationError("model has no tensor '" + name + "'");
}

const std::vector<double>& ModelState::tensor(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e.values;
  }
  throw ValidationError("model has no tensor '" + name + "'");
}

std::string ModelState::to_json() const {
  nlohmann::json j;
  j["layout"] = nlohmann::json::array();
  j["params"] = nlohmann::json::object();
  for (const auto& e : entries) {
    j["layout"].push_back(e.name);
    j["params"][e.name] = e.values;
  }
  return j.dump();
}

ModelState ModelState::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad model json: ") + e.what());
  }
  if (!j.contains("layout") || !j["layout"].is_array() ||
      !j.contains("params") || !j["params"].is_object()) {
    throw ValidationError("model json needs 'layout' array and 'params' map");
  }
  ModelState out;
  for (const auto& name_j : j["layout"]) {
    const std::string name = name_j.get<std::string>();
    if (!j["params"].contains(name)) {
      throw ValidationError("model json layout names missing tensor '" +
                            name + "'");
    }
    ModelState::Entry e;
    e.name = name;
    e.values = j["params"][name].get<std::vector<double>>();
    out.entries.push_back(std::move(e));
  }
  if (j["params"].size() != out.entries.size()) {
    throw ValidationError("model json has tensors absent from layout");
  }
  return out;
}

void require_same_layout(const ModelState& a, const ModelState& b) {
  if (!a.same_layout(b)) {
    throw ValidationError("model state layouts differ");
  }
}

ModelState zeros_like(const ModelState& layout) {
  ModelState out = layout;
  for (auto& e : out.entries) std::fill(e.values.begin(), e.values.end(), 0.0);
  return out;
}

void axpy(ModelState& y, double a, const ModelState& x) {
  require_same_layout(y, x);
  for (size_t i = 0; i < y.entries.size(); ++i) {
    auto& yv = y.entries[i].values;
    const auto& xv = x.entries[i].values;
    for (size_t k = 0; k < yv.size(); ++k) yv[k] += a * xv[k];
  }
}

void scale(ModelState& y, double a) {
  for (auto& e : y.entries) {
    for (double& v : e.values) v *= a;
  }
}

void ModelSpec::validate() const {
  if (n_features == 0) {
    throw ValidationError("model needs n_features >= 1");
  }
  if (kind == ModelKind::kMlp && hidden == 0) {
    throw ValidationError("mlp needs hidden width >= 1");
  }
  if (kind == ModelKind::kSoftmax && n_classes < 2) {
    throw ValidationError("softmax needs n_classes >= 2");
  }
}

ModelState init_model(const ModelSpec& spec) {
  spec.validate();
  ModelState state;
  switch (spec.kind) {
    case ModelKind::kLinearRegression:
    case ModelKind::kLogisticRegression:
      state.entries.push_back(
          {"w", std::vector<double>(spec.n_features, 0.0)});
      state.entries.push_back({"b", std::vector<double>(1, 0.0)});
      return state;
    case ModelKind::kSoftmax:
      state.entries.push_back(
          {"w", std::vector<double>(spec.n_classes * spec.n_features, 0.0)});
      state.entries.push_back(
          {"b", std::vector<double>(spec.n_classes, 0.0)});
      return state;
    case ModelKind::kMlp: {
      std::mt19937_64 rng(spec.init_seed);
      auto uniform_layer = [&rng](size_t count, size_t fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        std::vector<double> values(count);
        for (double& v : values) v = dist(rng);
        return values;
      };
      state.entries.push_back(
          {"w1", uniform_layer(spec.hidden * spec.n_features,
                               spec.n_features)});
      state.entries.push_back({"b1", std::vector<double>(spec.hidden, 0.0)});
      state.entries.push_back({"w2", uniform_layer(spec.hidden, spec.hidden)});
      state.entries.push_back({"b2", std::vector<double>(1, 0.0)});
      return state;
    }
  }
  throw ValidationError("unknown model kind");
}

namespace {

// Score of one row for the affine models.
double affine_score(const ModelState& state, const data::Table& table,
                    size_t row) {
  const auto& w = state.tensor("w");
  double z = state.tensor("b")[0];
  for (size_t j = 0; j < w.size(); ++j) z += w[j] * table.columns[j][row];
  return z;
}

struct MlpForward {
  std::vector<double> hidden;  // tanh activations
  double z2 = 0.0;
};

MlpForward mlp_forward(const ModelSpec& spec, const ModelState& state,
                       const data::Table& table, size_t row) {
  const auto& w1 = state.tensor("w1");
  const auto& b1 = state.tensor("b1");
  const auto& w2 = state.tensor("w2");
  const auto& b2 = state.tensor("b2");
  MlpForward f;
  f.hidden.resize(spec.hidden);
  for (size_t h = 0; h < spec.hidden; ++h) {
    double z = b1[h];
    const size_t base = h * spec.n_features;
    for (size_t j = 0; j < spec.n_features; ++j) {
      z += w1[base + j] * table.columns[j][row];
    }
    f.hidden[h] = std::tanh(z);
  }
  f.z2 = b2[0];
  for (size_t h = 0; h < spec.hidden; ++h) f.z2 += w2[h] * f.hidden[h];
  return f;
}

// Class probabilities of one row: softmax of C affine scores, with the max
// subtracted so exp() never overflows.
std::vector<double> softmax_probs(const ModelSpec& spec,
                                  const ModelState& state,
                                  const data::Table& table, size_t row) {
  const auto& w = state.tensor("w");
  const auto& b = state.tensor("b");
  std::vector<double> z(spec.n_classes);
  for (size_t c = 0; c < spec.n_classes; ++c) {
    double s = b[c];
    const size_t base = c * spec.n_features;
    for (size_t j = 0; j < spec.n_features; ++j) {
      s += w[base + j] * table.columns[j][row];
    }
    z[c] = s;
  }
  const double zmax = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    total += v;
  }
  for (double& v : z) v /= total;
  return z;
}

void check_width(const ModelSpec& spec, const data::Table& table) {
  if (table.n_cols() != spec.n_features) {
    throw ValidationError("table has " + std::to_string(table.n_cols()) +
                          " features, model expects " +
                          std::to_string(spec.n_features));
  }
}

}  // namespace

std::vector<double> predict(const ModelSpec& spec, const ModelState& state,
                            const data::Table& table) {
  spec.validate();
  check_width(spec, table);
  std::vector<double> out(table.n_rows());
  for (size_t i = 0; i < table.n_rows(); ++i) {
    switch (spec.kind) {
      case ModelKind::kLinearRegression:
        out[i] = affine_score(state, table, i);
        break;
      case ModelKind::kLogisticRegression:
        out[i] = sigmoid(affine_score(state, table, i));
        break;
      case ModelKind::kMlp:
        out[i] = sigmoid(mlp_forward(spec, state, table, i).z2);
        break;
      case ModelKind::kSoftmax: {
        const std::vector<double> p = softmax_probs(spec, state, table, i);
        out[i] = static_cast<double>(
            std::max_element(p.begin(), p.end()) - p.begin());
        break;
      }
    }
  }
  return out;
}

std::vector<double> predict_proba(const ModelSpec& spec,
                                  const ModelState& state,
                                  const data::Table& table) {
  spec.validate();
  check_width(spec, table);
  if (spec.kind != ModelKind::kSoftmax) {
    throw ValidationError("predict_proba needs a softmax model");
  }
  std::vector<double> out;
  out.reserve(table.n_rows() * spec.n_classes);
  for (size_t i = 0; i < table.n_rows(); ++i) {
    const std::vector<double> p = softmax_probs(spec, state, table, i);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

GradResult model_grad(const ModelSpec& spec, const ModelState& state,
                      const data::Table& table,
                      std::span<const size_t> batch) {
  spec.validate();
  check_width(spec, table);
  if (batch.empty()) throw ValidationError("empty batch");
  const auto& y = labels_of(table);
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  GradResult result;
  result.grad = zeros_like(state);

  if (spec.kind == ModelKind::kLinearRegression ||
      spec.kind == ModelKind::kLogisticRegression) {
    auto& gw = result.grad.tensor("w");
    auto& gb = result.grad.tensor("b");
    for (size_t i : batch) {
      const double z = affine_score(state, table, i);
      double dz;  // d(loss)/dz for this sample
      if (spec.kind == ModelKind::kLinearRegression) {
        const double r = z - y[i];
        result.loss += 0.5 * r * r;
        dz = r;
      } else {
        const double p = sigmoid(z);
        result.loss += bce(p, y[i]);
        dz = p - (y[i] != 0.0 ? 1.0 : 0.0);
      }
      for (size_t j = 0; j < gw.size(); ++j) {
        gw[j] += dz * table.columns[j][i];
      }
      gb[0] += dz;
    }
    scale(result.grad, inv_n);
    result.loss *= inv_n;
    return result;
  }

  if (spec.kind == ModelKind::kSoftmax) {
    auto& gw = result.grad.tensor("w");
    auto& gb = result.grad.tensor("b");
    constexpr double kEps = 1e-12;
    for (size_t i : batch) {
      const std::vector<double> p = softmax_probs(spec, state, table, i);
      const size_t label = class_of(y[i], spec.n_classes);
      result.loss += -std::log(std::max(p[label], kEps));
      for (size_t c = 0; c < spec.n_classes; ++c) {
        const double dz = p[c] - (c == label ? 1.0 : 0.0);
        const size_t base = c * spec.n_features;
        for (size_t j = 0; j < spec.n_features; ++j) {
          gw[base + j] += dz * table.columns[j][i];
        }
        gb[c] += dz;
      }
    }
    scale(result.grad, inv_n);
    result.loss *= inv_n;
    return result;
  }

  // One-hidden-layer tanh MLP with sigmoid output and cross-entropy loss.
  const auto& w2 = state.tensor("w2");
  auto& gw1 = result.grad.tensor("w1");
  auto& gb1 = result.grad.tensor("b1");
  auto& gw2 = result.grad.tensor("w2");
  auto& gb2 = result.grad.tensor("b2");
  for (size_t i : batch) {
    const MlpForward f = mlp_forward(spec, state, table, i);
    const double p = sigmoid(f.z2);
    result.loss += bce(p, y[i]);
    const double dz2 = p - (y[i] != 0.0 ? 1.0 : 0.0);
    gb2[0] += dz2;
    for (size_t h = 0; h < spec.hidden; ++h) {
      gw2[h] += dz2 * f.hidden[h];
      const double dz1 = dz2 * w2[h] * (1.0 - f.hidden[h] * f.hidden[h]);
      gb1[h] += dz1;
      const size_t base = h * spec.n_features;
      for (size_t j = 0; j < spec.n_features; ++j) {
        gw1[base + j] += dz1 * table.columns[j][i];
      }
    }
  }
  scale(result.grad, inv_n);
  result.loss *= inv_n;
  return result;
}

double model_loss(const ModelSpec& spec, const ModelState& state,
                  const data::Table& table) {
  spec.validate();
  check_width(spec, table);
  const auto& y = labels_of(table);
  if (table.n_rows() == 0) throw ValidationError("empty table");
  double loss = 0.0;
  if (spec.kind == ModelKind::kSoftmax) {
    constexpr double kEps = 1e-12;
    for (size_t i = 0; i < table.n_rows(); ++i) {
      const std::vector<double> p = softmax_probs(spec, state, table, i);
      loss += -std::log(std::max(p[class_of(y[i], spec.n_classes)], kEps));
    }
    return loss / static_cast<double>(table.n_rows());
  }
  const std::vector<double> scores = predict(spec, state, table);
  for (size_t i = 0; i < scores.size(); ++i) {
    if (spec.kind == ModelKind::kLinearRegression) {
      const double r = scores[i] - y[i];
      loss += 0.5 * r * r;
    } else {
      loss += bce(scores[i], y[i]);
    }
  }
  return loss / static_cast<double>(table.n_rows());
}

}  // namespace xfl::horizontal
