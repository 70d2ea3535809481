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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <thread>

#include "support/net_fixture.hpp"
#include "xfl/common/error.hpp"
#include "xfl/common/seed_mix.hpp"
#include "xfl/data/metrics.hpp"
#include "xfl/data/partition.hpp"
#include "xfl/horizontal/model.hpp"
#include "xfl/horizontal/protocol.hpp"
#include "xfl/horizontal/train.hpp"
#include "xfl/secagg/secagg.hpp"

using namespace xfl;
using namespace xfl::horizontal;
using transport::PartyId;

namespace {

// Synthetic binary-classification table with a linear decision boundary.
data::Table make_table(size_t n, size_t features, uint64_t seed,
                       bool classification = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  data::Table t;
  t.columns.resize(features);
  std::vector<double> true_w(features);
  for (double& w : true_w) w = unif(rng);
  std::vector<double> y;
  for (size_t i = 0; i < n; ++i) {
    t.ids.push_back("r" + std::to_string(seed) + "_" + std::to_string(i));
    double z = 0.1;
    for (size_t j = 0; j < features; ++j) {
      const double x = unif(rng);
      t.columns[j].push_back(x);
      z += true_w[j] * x;
    }
    if (classification) {
      y.push_back(z + 0.3 * unif(rng) > 0.0 ? 1.0 : 0.0);
    } else {
      y.push_back(z + 0.05 * unif(rng));
    }
  }
  for (size_t j = 0; j < features; ++j) {
    t.feature_names.push_back("x" + std::to_string(j));
  }
  t.labels = std::move(y);
  return t;
}

// Gaussian blobs around class centers spaced on a circle; labels are class
// ids 0..n_classes-1.
data::Table make_multiclass_table(size_t n, size_t n_classes, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.35);
  data::Table t;
  t.columns.resize(2);
  t.feature_names = {"x0", "x1"};
  std::vector<double> y;
  for (size_t i = 0; i < n; ++i) {
    const size_t c = i % n_classes;
    const double angle =
        2.0 * M_PI * static_cast<double>(c) / static_cast<double>(n_classes);
    t.ids.push_back("m" + std::to_string(i));
    t.columns[0].push_back(std::cos(angle) + noise(rng));
    t.columns[1].push_back(std::sin(angle) + noise(rng));
    y.push_back(static_cast<double>(c));
  }
  t.labels = std::move(y);
  return t;
}

ModelState random_state(const ModelSpec& spec, uint64_t seed) {
  ModelState s = init_model(spec);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-0.7, 0.7);
  for (auto& e : s.entries) {
    for (double& v : e.values) v = unif(rng);
  }
  return s;
}

// Central finite differences of the mean loss over the whole table.
ModelState numeric_gradient(const ModelSpec& spec, const ModelState& state,
                            const data::Table& table, double h = 1e-5) {
  ModelState g = zeros_like(state);
  ModelState probe = state;
  for (size_t e = 0; e < state.entries.size(); ++e) {
    for (size_t k = 0; k < state.entries[e].values.size(); ++k) {
      const double saved = probe.entries[e].values[k];
      probe.entries[e].values[k] = saved + h;
      const double up = model_loss(spec, probe, table);
      probe.entries[e].values[k] = saved - h;
      const double down = model_loss(spec, probe, table);
      probe.entries[e].values[k] = saved;
      g.entries[e].values[k] = (up - down) / (2.0 * h);
    }
  }
  return g;
}

void check_grad_close(const ModelState& analytic, const ModelState& numeric,
                      double rel_tol = 1e-6) {
  REQUIRE(analytic.same_layout(numeric));
  for (size_t e = 0; e < analytic.entries.size(); ++e) {
    for (size_t k = 0; k < analytic.entries[e].values.size(); ++k) {
      const double a = analytic.entries[e].values[k];
      const double n = numeric.entries[e].values[k];
      CHECK(std::fabs(a - n) <= rel_tol * std::max(1.0, std::fabs(a)));
    }
  }
}

std::vector<size_t> all_rows(const data::Table& t) {
  std::vector<size_t> rows(t.n_rows());
  std::iota(rows.begin(), rows.end(), size_t{0});
  return rows;
}

}  // namespace

TEST_CASE("model state flatten/unflatten are inverse; json round trips") {
  ModelSpec spec{ModelKind::kMlp, 3, 4, 11};
  const ModelState s = random_state(spec, 21);
  const std::vector<double> flat = s.flatten();
  CHECK(flat.size() == s.total_size());
  CHECK(s.unflatten_like(flat) == s);

  const ModelState parsed = ModelState::from_json(s.to_json());
  CHECK(parsed == s);  // exact: json numbers round-trip doubles

  CHECK_THROWS_AS(s.unflatten_like(std::vector<double>(3)), ValidationError);
  CHECK_THROWS_AS(ModelState::from_json("{"), ValidationError);
  CHECK_THROWS_AS(ModelState::from_json(R"({"layout":["w"],"params":{}})"),
                  ValidationError);
}

TEST_CASE("init_model is deterministic and layout-stable") {
  ModelSpec mlp{ModelKind::kMlp, 5, 3, 42};
  const ModelState a = init_model(mlp);
  const ModelState b = init_model(mlp);
  CHECK(a == b);
  CHECK(a.entries.size() == 4);
  CHECK(a.tensor("w1").size() == 15);
  CHECK(a.tensor("b1").size() == 3);
  CHECK(a.tensor("w2").size() == 3);
  CHECK(a.tensor("b2").size() == 1);

  ModelSpec logistic{ModelKind::kLogisticRegression, 2};
  const ModelState c = init_model(logistic);
  CHECK(c.tensor("w") == std::vector<double>{0.0, 0.0});
  CHECK(c.tensor("b") == std::vector<double>{0.0});

  ModelSpec bad{ModelKind::kLinearRegression, 0};
  CHECK_THROWS_AS(init_model(bad), ValidationError);
}

TEST_CASE("analytic gradients match finite differences") {
  SUBCASE("linear regression") {
    ModelSpec spec{ModelKind::kLinearRegression, 3};
    const data::Table t = make_table(40, 3, 1, /*classification=*/false);
    const ModelState w = random_state(spec, 2);
    const auto rows = all_rows(t);
    check_grad_close(model_grad(spec, w, t, rows).grad,
                     numeric_gradient(spec, w, t));
  }
  SUBCASE("logistic regression") {
    ModelSpec spec{ModelKind::kLogisticRegression, 4};
    const data::Table t = make_table(50, 4, 3);
    const ModelState w = random_state(spec, 4);
    const auto rows = all_rows(t);
    check_grad_close(model_grad(spec, w, t, rows).grad,
                     numeric_gradient(spec, w, t));
  }
  SUBCASE("mlp") {
    ModelSpec spec{ModelKind::kMlp, 3, 5, 7};
    const data::Table t = make_table(30, 3, 5);
    const ModelState w = random_state(spec, 6);
    const auto rows = all_rows(t);
    check_grad_close(model_grad(spec, w, t, rows).grad,
                     numeric_gradient(spec, w, t));
  }
  SUBCASE("softmax") {
    ModelSpec spec;
    spec.kind = ModelKind::kSoftmax;
    spec.n_features = 2;
    spec.n_classes = 4;
    const data::Table t = make_multiclass_table(40, 4, 8);
    const ModelState w = random_state(spec, 9);
    const auto rows = all_rows(t);
    check_grad_close(model_grad(spec, w, t, rows).grad,
                     numeric_gradient(spec, w, t));
  }
}

TEST_CASE("model_grad loss agrees with model_loss on the same batch") {
  ModelSpec spec{ModelKind::kLogisticRegression, 2};
  const data::Table t = make_table(25, 2, 9);
  const ModelState w = random_state(spec, 10);
  const auto rows = all_rows(t);
  CHECK(model_grad(spec, w, t, rows).loss ==
        doctest::Approx(model_loss(spec, w, t)).epsilon(1e-14));
}

TEST_CASE("softmax learns separable blobs and validates its labels") {
  ModelSpec spec;
  spec.kind = ModelKind::kSoftmax;
  spec.n_features = 2;
  spec.n_classes = 5;
  const data::Table t = make_multiclass_table(300, 5, 31);

  CHECK(init_model(spec).tensor("w").size() == 10);
  CHECK(init_model(spec).tensor("b").size() == 5);

  TrainConfig cfg;
  cfg.local_epochs = 40;
  cfg.batch_size = 32;
  cfg.learning_rate = 0.5;
  cfg.seed = 3;
  const ModelState start = init_model(spec);
  const LocalTrainResult r = local_train(spec, start, t, cfg);
  CHECK(model_loss(spec, r.state, t) < model_loss(spec, start, t));

  const std::vector<double> pred = predict(spec, r.state, t);
  size_t hits = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == (*t.labels)[i]) ++hits;
  }
  CHECK(static_cast<double>(hits) / static_cast<double>(pred.size()) > 0.9);

  const std::vector<double> proba = predict_proba(spec, r.state, t);
  REQUIRE(proba.size() == t.n_rows() * spec.n_classes);
  for (size_t i = 0; i < t.n_rows(); ++i) {
    double row_sum = 0.0;
    for (size_t c = 0; c < spec.n_classes; ++c) {
      row_sum += proba[i * spec.n_classes + c];
    }
    CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Labels outside [0, C) or fractional labels are configuration errors.
  data::Table bad = t;
  (*bad.labels)[0] = 5.0;
  CHECK_THROWS_AS(model_loss(spec, start, bad), ValidationError);
  (*bad.labels)[0] = 1.5;
  CHECK_THROWS_AS(model_loss(spec, start, bad), ValidationError);

  ModelSpec one_class = spec;
  one_class.n_classes = 1;
  CHECK_THROWS_AS(init_model(one_class), ValidationError);
  ModelSpec binary{ModelKind::kLogisticRegression, 2};
  CHECK_THROWS_AS(predict_proba(binary, init_model(binary), t),
                  ValidationError);
}

TEST_CASE("zero learning rate leaves the model unchanged") {
  ModelSpec spec{ModelKind::kLogisticRegression, 3};
  const data::Table t = make_table(20, 3, 12);
  TrainConfig cfg;
  cfg.local_epochs = 3;
  cfg.learning_rate = 0.0;
  cfg.seed = 5;
  const ModelState start = random_state(spec, 13);
  const LocalTrainResult r = local_train(spec, start, t, cfg);
  CHECK(r.state == start);
  CHECK(r.sample_count == 20);
  CHECK(r.steps > 0);
}

TEST_CASE("fedprox with mu=0 reproduces fedavg bitwise") {
  ModelSpec spec{ModelKind::kMlp, 3, 4, 77};
  const data::Table t = make_table(30, 3, 14);
  TrainConfig avg;
  avg.local_epochs = 4;
  avg.batch_size = 7;
  avg.learning_rate = 0.3;
  avg.aggregator = Aggregator::kFedAvg;
  avg.seed = 99;
  TrainConfig prox = avg;
  prox.aggregator = Aggregator::kFedProx;
  prox.mu = 0.0;

  const ModelState start = init_model(spec);
  const LocalTrainResult a = local_train(spec, start, t, avg);
  const LocalTrainResult p = local_train(spec, start, t, prox);
  CHECK(a.state == p.state);  // exact double equality, not approximate

  // And a nonzero mu must actually change the trajectory.
  prox.mu = 0.1;
  const LocalTrainResult p2 = local_train(spec, start, t, prox);
  CHECK(a.state != p2.state);
}

TEST_CASE("fedprox correction formula and finite-difference check") {
  ModelState grad;
  grad.entries = {{"w", {0.5, -0.25}}};
  ModelState w;
  w.entries = {{"w", {2.0, 1.0}}};
  ModelState wg;
  wg.entries = {{"w", {1.0, 2.0}}};

  SUBCASE("w equals w_global leaves gradient unchanged") {
    const ModelState same = fedprox_correction(grad, w, w, 0.7);
    CHECK(same == grad);
  }
  SUBCASE("mu=0.005 with unit offsets") {
    // w - w_global = (1, -1): correction adds (0.005, -0.005).
    const ModelState c = fedprox_correction(grad, w, wg, 0.005);
    CHECK(c.tensor("w")[0] == doctest::Approx(0.505).epsilon(1e-15));
    CHECK(c.tensor("w")[1] == doctest::Approx(-0.255).epsilon(1e-15));
  }
  SUBCASE("matches gradient of mu/2 * ||w - w_global||^2") {
    const double mu = 0.37;
    auto prox_term = [&](const ModelState& at) {
      double s = 0.0;
      for (size_t k = 0; k < 2; ++k) {
        const double d = at.tensor("w")[k] - wg.tensor("w")[k];
        s += d * d;
      }
      return 0.5 * mu * s;
    };
    const ModelState zero = zeros_like(grad);
    const ModelState correction = fedprox_correction(zero, w, wg, mu);
    const double h = 1e-6;
    for (size_t k = 0; k < 2; ++k) {
      ModelState up = w;
      up.tensor("w")[k] += h;
      ModelState dn = w;
      dn.tensor("w")[k] -= h;
      const double fd = (prox_term(up) - prox_term(dn)) / (2.0 * h);
      CHECK(correction.tensor("w")[k] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("scaffold control update fixed points and arithmetic") {
  ModelState zero;
  zero.entries = {{"w", {0.0}}};

  SUBCASE("at initialization nothing moves") {
    const auto [next, delta] =
        scaffold_update_controls(zero, zero, zero, zero, 4, 0.5);
    CHECK(next == zero);
    CHECK(delta == zero);
  }
  SUBCASE("K=1, lr=1, gap of 2") {
    ModelState wg;
    wg.entries = {{"w", {2.0}}};
    const auto [next, delta] =
        scaffold_update_controls(zero, zero, wg, zero, 1, 1.0);
    CHECK(next.tensor("w")[0] == 2.0);
    CHECK(delta.tensor("w")[0] == 2.0);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(scaffold_update_controls(zero, zero, zero, zero, 0, 1.0),
                    ValidationError);
    CHECK_THROWS_AS(scaffold_update_controls(zero, zero, zero, zero, 1, 0.0),
                    ValidationError);
  }
}

TEST_CASE("aggregate_weighted basics and random oracle") {
  ModelSpec spec{ModelKind::kLogisticRegression, 3};
  SUBCASE("identical states aggregate to themselves") {
    const ModelState s = random_state(spec, 30);
    const ModelState agg = aggregate_weighted({{s, 5.0}, {s, 1.0}, {s, 3.0}});
    for (size_t e = 0; e < s.entries.size(); ++e) {
      for (size_t k = 0; k < s.entries[e].values.size(); ++k) {
        CHECK(agg.entries[e].values[k] ==
              doctest::Approx(s.entries[e].values[k]).epsilon(1e-15));
      }
    }
  }
  SUBCASE("hand example: (0) and (3) with counts 1 and 2") {
    ModelState a;
    a.entries = {{"w", {0.0}}};
    ModelState b;
    b.entries = {{"w", {3.0}}};
    const ModelState agg = aggregate_weighted({{a, 1.0}, {b, 2.0}});
    CHECK(agg.tensor("w")[0] == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("matches plain arithmetic on random states") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(0.5, 20.5);
    std::vector<std::pair<ModelState, double>> states;
    for (int i = 0; i < 5; ++i) {
      states.emplace_back(random_state(spec, 100 + i), std::floor(unif(rng)));
    }
    const ModelState agg = aggregate_weighted(states);
    double total = 0.0;
    for (const auto& [s, c] : states) total += c;
    for (size_t e = 0; e < agg.entries.size(); ++e) {
      for (size_t k = 0; k < agg.entries[e].values.size(); ++k) {
        double expect = 0.0;
        for (const auto& [s, c] : states) {
          expect += c / total * s.entries[e].values[k];
        }
        CHECK(std::fabs(agg.entries[e].values[k] - expect) <= 1e-12);
      }
    }
  }
  SUBCASE("rejects layout mismatch and bad weights") {
    ModelState a;
    a.entries = {{"w", {0.0}}};
    ModelState b;
    b.entries = {{"v", {0.0}}};
    CHECK_THROWS_AS(aggregate_weighted({{a, 1.0}, {b, 1.0}}),
                    ValidationError);
    CHECK_THROWS_AS(aggregate_weighted({{a, 0.0}}), ValidationError);
    CHECK_THROWS_AS(aggregate_weighted({}), ValidationError);
  }
}

TEST_CASE("training aborts with a diagnostic when the loss diverges") {
  ModelSpec spec{ModelKind::kLinearRegression, 1};
  data::Table t;
  t.ids = {"a", "b"};
  t.feature_names = {"x"};
  t.columns = {{1e8, -1e8}};
  t.labels = std::vector<double>{1.0, -1.0};
  TrainConfig cfg;
  cfg.local_epochs = 50;
  cfg.learning_rate = 10.0;  // wildly unstable on this scale
  CHECK_THROWS_WITH_AS(
      local_train(spec, init_model(spec), t, cfg),
      doctest::Contains("non-finite loss"), Error);
}

// ---------------------------------------------------------------------------
// Secure round protocol
// ---------------------------------------------------------------------------

namespace {

struct FederationResult {
  ModelState global;                  // from the assist trainer
  std::vector<ModelState> finals;     // per trainer, from the done message
  std::vector<ModelState> c_locals;   // scaffold only
  ModelState c_global;                // scaffold only
  std::vector<std::vector<LocalTrainResult>> history;  // per trainer, per round
};

// Runs a full federation on an in-process network: trainers negotiate masks
// among themselves; the assist trainer only aggregates.
FederationResult run_federation(const std::vector<data::Table>& tables,
                                const HorizontalConfig& cfg,
                                const std::string& session) {
  const size_t P = tables.size();
  transport::Roster roster;
  for (size_t i = 0; i < P; ++i) {
    roster.push_back({int(i), "trainer-" + std::to_string(i)});
  }
  roster.push_back({int(P), "assist"});
  testing::NetFixture net(roster, session);

  std::vector<PartyId> trainers(roster.begin(), roster.end() - 1);
  const PartyId assist = roster.back();

  FederationResult result;
  result.finals.resize(P);
  result.c_locals.resize(P);
  result.history.resize(P);

  std::vector<std::future<void>> work;
  for (size_t i = 0; i < P; ++i) {
    work.push_back(std::async(std::launch::async, [&, i] {
      auto rng = crypto::seeded_random(mix64(7777, i));
      const secagg::MaskPlan plan =
          secagg::negotiate_masks(net.ep(i), trainers, session, *rng);
      ModelState c_local;
      result.finals[i] = run_horizontal_trainer(
          net.ep(i), assist, plan, tables[i], cfg,
          [&, i](int, const ModelState&, const LocalTrainResult& local) {
            result.history[i].push_back(local);
          },
          &c_local);
      result.c_locals[i] = std::move(c_local);
    }));
  }
  auto assist_work = std::async(std::launch::async, [&] {
    result.global = run_horizontal_assist(net.ep(P), trainers, cfg, {},
                                          &result.c_global);
  });
  for (auto& w : work) w.get();
  assist_work.get();
  return result;
}

void check_states_close(const ModelState& a, const ModelState& b,
                        double tol) {
  REQUIRE(a.same_layout(b));
  for (size_t e = 0; e < a.entries.size(); ++e) {
    for (size_t k = 0; k < a.entries[e].values.size(); ++k) {
      CHECK(std::fabs(a.entries[e].values[k] - b.entries[e].values[k]) <=
            tol);
    }
  }
}

}  // namespace

TEST_CASE("round message encodes and decodes with optional controls") {
  RoundMessage msg;
  msg.round = 3;
  msg.model.entries = {{"w", {1.5, -2.25}}, {"b", {0.125}}};
  const RoundMessage back = RoundMessage::decode(msg.encode());
  CHECK(back.round == 3);
  CHECK_FALSE(back.done);
  CHECK(back.model == msg.model);
  CHECK_FALSE(back.c_global.has_value());

  msg.c_global = zeros_like(msg.model);
  const RoundMessage back2 = RoundMessage::decode(msg.encode());
  REQUIRE(back2.c_global.has_value());
  CHECK(*back2.c_global == *msg.c_global);

  CHECK_THROWS_AS(RoundMessage::decode(Bytes{'x'}), ProtocolError);
}

TEST_CASE("weighted update vector splits back into sums and count") {
  ModelState s;
  s.entries = {{"w", {0.5, -1.25}}};
  numeric::FixedPointParams fp;
  const numeric::RingVector v = weighted_update_vector(s, 3, fp);
  CHECK(v.size() == 3);
  const auto [sums, total] = split_weighted_sum(v, 2);
  CHECK(total == 3.0);
  CHECK(sums[0] == doctest::Approx(1.5).epsilon(1e-7));
  CHECK(sums[1] == doctest::Approx(-3.75).epsilon(1e-7));

  CHECK_THROWS_AS(split_weighted_sum(v, 5), ProtocolError);
  CHECK_THROWS_AS(weighted_update_vector(s, 0, fp), ValidationError);
}

TEST_CASE("single trainer: global model equals its local result") {
  ModelSpec spec{ModelKind::kLogisticRegression, 2};
  HorizontalConfig cfg;
  cfg.model = spec;
  cfg.train.global_epochs = 2;
  cfg.train.local_epochs = 2;
  cfg.train.batch_size = 8;
  cfg.train.learning_rate = 0.5;
  cfg.train.seed = 404;

  const data::Table t = make_table(24, 2, 51);
  const FederationResult fed = run_federation({t}, cfg, "single-party");

  // Replay locally: the one-party weighted mean is that party's state, up
  // to one fixed-point quantization per round.
  ModelState expect = init_model(spec);
  for (int round = 0; round < cfg.train.global_epochs; ++round) {
    TrainConfig rc = cfg.train;
    rc.seed = mix64(cfg.train.seed, hash_str("trainer-0"), uint64_t(round));
    expect = local_train(spec, expect, t, rc).state;
    expect = quantize_state(expect, cfg.fp);  // one grid snap per round
  }
  check_states_close(fed.global, expect, 4.0 / (1 << 24));
  CHECK(fed.finals[0] == fed.global);
}

TEST_CASE("secure aggregation equals plaintext weighted mean per round") {
  ModelSpec spec{ModelKind::kLogisticRegression, 3};
  HorizontalConfig cfg;
  cfg.model = spec;
  cfg.train.global_epochs = 1;  // isolate a single round
  cfg.train.local_epochs = 2;
  cfg.train.batch_size = 6;
  cfg.train.learning_rate = 0.4;
  cfg.train.seed = 2025;

  const std::vector<data::Table> tables = {make_table(20, 3, 61),
                                           make_table(33, 3, 62)};
  const FederationResult fed = run_federation(tables, cfg, "two-party");

  // Plaintext oracle: run the same local training and take the weighted
  // mean directly.
  std::vector<std::pair<ModelState, double>> plain;
  const ModelState start = init_model(spec);
  for (size_t i = 0; i < tables.size(); ++i) {
    TrainConfig rc = cfg.train;
    rc.seed = mix64(cfg.train.seed, hash_str("trainer-" + std::to_string(i)),
                    uint64_t(0));
    const LocalTrainResult local = local_train(spec, start, tables[i], rc);
    plain.emplace_back(local.state, double(local.sample_count));
  }
  const ModelState oracle = aggregate_weighted(plain);
  check_states_close(fed.global, oracle, 2.0 / (1 << 24));
}

TEST_CASE("fedavg and fedprox(mu=0) produce bitwise-equal federated runs") {
  ModelSpec spec{ModelKind::kMlp, 2, 3, 5};
  HorizontalConfig cfg;
  cfg.model = spec;
  cfg.train.global_epochs = 3;
  cfg.train.local_epochs = 2;
  cfg.train.batch_size = 5;
  cfg.train.learning_rate = 0.3;
  cfg.train.seed = 7;
  cfg.train.aggregator = Aggregator::kFedAvg;

  const std::vector<data::Table> tables = {make_table(16, 2, 71),
                                           make_table(21, 2, 72),
                                           make_table(18, 2, 73)};
  const FederationResult avg = run_federation(tables, cfg, "avg-run");

  cfg.train.aggregator = Aggregator::kFedProx;
  cfg.train.mu = 0.0;
  const FederationResult prox = run_federation(tables, cfg, "prox-run");

  CHECK(avg.global == prox.global);  // bitwise

  cfg.train.mu = 0.05;
  const FederationResult prox2 = run_federation(tables, cfg, "prox2-run");
  CHECK(avg.global != prox2.global);
}

TEST_CASE("scaffold run conserves controls and beats divergence") {
  ModelSpec spec{ModelKind::kLogisticRegression, 2};
  HorizontalConfig cfg;
  cfg.model = spec;
  cfg.train.global_epochs = 4;
  cfg.train.local_epochs = 2;
  cfg.train.batch_size = 8;
  cfg.train.learning_rate = 0.4;
  cfg.train.aggregator = Aggregator::kScaffold;
  cfg.train.seed = 31;

  const std::vector<data::Table> tables = {make_table(24, 2, 81),
                                           make_table(30, 2, 82),
                                           make_table(27, 2, 83)};
  const FederationResult fed = run_federation(tables, cfg, "scaffold-run");

  // c_global must equal the mean of the trainers' final c_local vectors.
  ModelState mean_c = zeros_like(fed.c_global);
  for (const auto& c : fed.c_locals) {
    REQUIRE_FALSE(c.entries.empty());
    axpy(mean_c, 1.0 / double(tables.size()), c);
  }
  check_states_close(fed.c_global, mean_c, 1e-10);

  // Controls converge toward per-party gradient estimates: after training,
  // they are not all zero.
  double c_norm = 0.0;
  for (const auto& e : fed.c_global.entries) {
    for (double v : e.values) c_norm += v * v;
  }
  CHECK(c_norm > 0.0);
}

TEST_CASE("scaffold single round matches a hand-stepped reference trace") {
  // One global round, one local epoch, full batch => exactly one SGD step
  // per party with zero controls. Everything reduces to plain arithmetic:
  //   w_i = w0 - lr * g_i
  //   global = (n0*w_0 + n1*w_1) / (n0 + n1)
  //   c_local_i' = (w0 - w_i)/(K*lr) = g_i;  c_global = mean(g_i)
  ModelSpec spec{ModelKind::kLinearRegression, 1};
  HorizontalConfig cfg;
  cfg.model = spec;
  cfg.train.global_epochs = 1;
  cfg.train.local_epochs = 1;
  cfg.train.batch_size = 1 << 20;  // full batch
  cfg.train.learning_rate = 0.25;
  cfg.train.aggregator = Aggregator::kScaffold;
  cfg.train.seed = 17;

  std::vector<data::Table> tables(2);
  tables[0].ids = {"a", "b"};
  tables[0].feature_names = {"x"};
  tables[0].columns = {{1.0, 2.0}};
  tables[0].labels = std::vector<double>{1.0, 2.0};
  tables[1].ids = {"c", "d", "e"};
  tables[1].feature_names = {"x"};
  tables[1].columns = {{-1.0, 0.5, 3.0}};
  tables[1].labels = std::vector<double>{0.0, 1.0, 2.0};

  const FederationResult fed = run_federation(tables, cfg, "scaffold-trace");

  // Hand-stepped oracle in plain doubles.
  auto grad_of = [](const data::Table& t) {
    // w = b = 0: residual r = -y; g_w = mean(-y*x), g_b = mean(-y).
    double gw = 0.0, gb = 0.0;
    for (size_t i = 0; i < t.n_rows(); ++i) {
      gw += -(*t.labels)[i] * t.columns[0][i];
      gb += -(*t.labels)[i];
    }
    const double n = double(t.n_rows());
    return std::pair<double, double>{gw / n, gb / n};
  };
  const auto [g0w, g0b] = grad_of(tables[0]);
  const auto [g1w, g1b] = grad_of(tables[1]);
  const double lr = cfg.train.learning_rate;
  const double w0 = -lr * g0w, b0 = -lr * g0b;
  const double w1 = -lr * g1w, b1 = -lr * g1b;
  const double expect_w = (2.0 * w0 + 3.0 * w1) / 5.0;
  const double expect_b = (2.0 * b0 + 3.0 * b1) / 5.0;
  const double expect_cw = (g0w + g1w) / 2.0;
  const double expect_cb = (g0b + g1b) / 2.0;

  const double tol = 2.0 / (1 << 24);
  CHECK(std::fabs(fed.global.tensor("w")[0] - expect_w) <= tol);
  CHECK(std::fabs(fed.global.tensor("b")[0] - expect_b) <= tol);
  CHECK(std::fabs(fed.c_global.tensor("w")[0] - expect_cw) <= tol);
  CHECK(std::fabs(fed.c_global.tensor("b")[0] - expect_cb) <= tol);
  // Per-party controls equal their one-step gradients.
  CHECK(std::fabs(fed.c_locals[0].tensor("w")[0] - g0w) <= tol);
  CHECK(std::fabs(fed.c_locals[1].tensor("b")[0] - g1b) <= tol);
}

TEST_CASE("federated logistic regression actually learns") {
  ModelSpec spec{ModelKind::kLogisticRegression, 4};
  HorizontalConfig cfg;
  cfg.model = spec;
  cfg.train.global_epochs = 8;
  cfg.train.local_epochs = 3;
  cfg.train.batch_size = 16;
  cfg.train.learning_rate = 0.5;
  cfg.train.seed = 1234;

  // One generating model, split IID across three parties.
  data::Table full = make_table(180, 4, 91);
  data::PartitionSpec ps;
  ps.kind = data::PartitionSpec::Kind::kRandom;
  ps.n_parties = 3;
  ps.seed = 5;
  const std::vector<data::Table> parts = data::partition_table(full, ps);

  const FederationResult fed = run_federation(parts, cfg, "learning-run");

  const std::vector<double> probs = predict(spec, fed.global, full);
  const double acc = data::accuracy(probs, *full.labels);
  const double loss0 =
      model_loss(spec, init_model(spec), full);
  const double loss1 = model_loss(spec, fed.global, full);
  CHECK(loss1 < loss0);   // training reduced the loss
  CHECK(acc > 0.8);       // and separates a linearly separable-ish problem
}
