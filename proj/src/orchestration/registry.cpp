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

#include "xfl/orchestration/registry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "xfl/common/error.hpp"
#include "xfl/common/seed_mix.hpp"
#include "xfl/crypto/rng.hpp"
#include "xfl/data/metrics.hpp"
#include "xfl/horizontal/protocol.hpp"
#include "xfl/secagg/secagg.hpp"
#include "xfl/vertical/vlr.hpp"
#include "xfl/vertical/vxgb.hpp"

namespace xfl::orchestration {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

// ---------------------------------------------------------------------------
// Param validation helpers. apply_preset guarantees every preset key exists,
// so validators index with .at() and only check values.

int64_t int_in(const json& obj, const char* key, const std::string& path,
               int64_t lo, int64_t hi) {
  const json& v = obj.at(key);
  const std::string where = path + "." + key;
  if (v.is_null()) fail_at(where, "required, the preset has no default");
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    fail_at(where, "must be an integer");
  }
  const int64_t x = v.get<int64_t>();
  if (x < lo || x > hi) {
    fail_at(where, "must be in [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "], got " + std::to_string(x));
  }
  return x;
}

double num_in(const json& obj, const char* key, const std::string& path,
              double lo, double hi, bool exclusive_lo = false) {
  const json& v = obj.at(key);
  const std::string where = path + "." + key;
  if (!v.is_number()) fail_at(where, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x) || x > hi || (exclusive_lo ? x <= lo : x < lo)) {
    fail_at(where, "must be a finite number " +
                       std::string(exclusive_lo ? "> " : ">= ") +
                       std::to_string(lo) + " and <= " + std::to_string(hi));
  }
  return x;
}

std::string str_in(const json& obj, const char* key, const std::string& path,
                   bool allow_empty) {
  const json& v = obj.at(key);
  const std::string where = path + "." + key;
  if (!v.is_string()) fail_at(where, "must be a string");
  const std::string s = v.get<std::string>();
  if (!allow_empty && s.empty()) fail_at(where, "must not be empty");
  return s;
}

size_t count_role(const std::map<std::string, Role>& roles, Role wanted) {
  size_t n = 0;
  for (const auto& [name, role] : roles) {
    (void)name;
    if (role == wanted) ++n;
  }
  return n;
}

// Every party whose stage role satisfies `needs` must name a dataset; no
// dataset may point at an uninvolved party.
void check_datasets(const json& params,
                    const std::map<std::string, Role>& roles,
                    bool (*needs)(Role), const std::string& path) {
  const json& ds = params.at("input").at("dataset");
  const std::string where = path + ".params.input.dataset";
  if (!ds.is_object()) fail_at(where, "must map party names to csv paths");
  for (const auto& [name, role] : roles) {
    if (!needs(role)) continue;
    const auto it = ds.find(name);
    if (it == ds.end()) {
      fail_at(where + "." + name, "missing dataset path for this party");
    }
    if (!it->is_string() || it->get<std::string>().empty()) {
      fail_at(where + "." + name, "must be a non-empty path");
    }
  }
  for (const auto& [name, value] : ds.items()) {
    (void)value;
    const auto it = roles.find(name);
    if (it == roles.end()) {
      fail_at(where + "." + name, "names a party that is not in this task");
    }
    if (!needs(it->second)) {
      fail_at(where + "." + name, "role " + role_name(it->second) +
                                      " reads no dataset in this operator");
    }
  }
}

bool has_both_classes(const std::vector<double>& labels) {
  bool pos = false;
  bool neg = false;
  for (double y : labels) (y != 0.0 ? pos : neg) = true;
  return pos && neg;
}

json report_json(const data::MetricsReport& r) {
  return json{{"ks", r.ks},
              {"auc", r.auc},
              {"accuracy", r.accuracy},
              {"loss", r.loss}};
}

// Loss always; accuracy for the classifiers; AUC/KS only when the binary
// score is one-dimensional and both classes are present.
json horizontal_metrics(const horizontal::ModelSpec& spec,
                        const horizontal::ModelState& state,
                        const data::Table& table) {
  namespace hz = horizontal;
  json m = json::object();
  m["loss"] = hz::model_loss(spec, state, table);
  if (spec.kind == hz::ModelKind::kLinearRegression) return m;
  const std::vector<double>& y = *table.labels;
  const std::vector<double> scores = hz::predict(spec, state, table);
  if (spec.kind == hz::ModelKind::kSoftmax) {
    size_t hits = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] == y[i]) ++hits;
    }
    m["accuracy"] =
        static_cast<double>(hits) / static_cast<double>(scores.size());
    return m;
  }
  m["accuracy"] = data::accuracy(scores, y);
  if (has_both_classes(y)) {
    m["auc"] = data::auc(scores, y);
    m["ks"] = data::ks_statistic(scores, y);
  }
  return m;
}

// Output names from the config stay inside the party's stage directory;
// anything that could climb out of the workdir is rejected.
std::filesystem::path contained_output(const StageContext& ctx,
                                       const std::string& name) {
  const std::filesystem::path p(name);
  if (p.is_absolute() ||
      std::any_of(p.begin(), p.end(),
                  [](const auto& part) { return part == ".."; })) {
    throw ValidationError("output path '" + name +
                          "' must stay inside the stage directory");
  }
  return ctx.out_dir / p;
}

std::filesystem::path output_path(const StageContext& ctx, const char* key) {
  return contained_output(
      ctx, ctx.params.at("output").at(key).get<std::string>());
}

void write_predictions_csv(const StageContext& ctx,
                           const std::vector<std::string>& ids,
                           const std::vector<double>& scores) {
  const std::string name =
      ctx.params.at("output").at("predictions").get<std::string>();
  if (name.empty()) return;
  data::Table t;
  t.ids = ids;
  t.feature_names = {"score"};
  t.columns = {scores};
  data::save_csv(t, contained_output(ctx, name).string());
}

// ---------------------------------------------------------------------------
// Horizontal operators (one preset, model kind per registry name).

const json& horizontal_preset() {
  static const json preset = json::parse(R"({
    "input": {"dataset": {}},
    "output": {"model": "model.json"},
    "model": {"n_features": null, "hidden": 8, "n_classes": 2,
              "init_seed": 0},
    "train": {"aggregator": "fedavg", "global_epochs": 5, "local_epochs": 1,
              "batch_size": 32, "learning_rate": 0.1, "mu": 0.005},
    "round_timeout_ms": 120000
  })");
  return preset;
}

void validate_horizontal(const json& p,
                         const std::map<std::string, Role>& roles,
                         const std::string& path) {
  const size_t n_label = count_role(roles, Role::kLabelTrainer);
  const size_t n_assist = count_role(roles, Role::kAssistTrainer);
  const size_t n_plain = count_role(roles, Role::kTrainer);
  if (n_label < 1) {
    fail_at(path, "horizontal stage needs at least one label_trainer, got 0");
  }
  if (n_assist != 1) {
    fail_at(path, "horizontal stage needs exactly one assist_trainer, got " +
                      std::to_string(n_assist));
  }
  if (n_plain != 0) {
    fail_at(path, "horizontal stage takes label_trainer and assist_trainer "
                  "roles only; 'trainer' does not apply");
  }
  check_datasets(p, roles,
                 [](Role r) { return r == Role::kLabelTrainer; }, path);
  const std::string mp = path + ".params.model";
  int_in(p.at("model"), "n_features", mp, 1, 1000000);
  int_in(p.at("model"), "hidden", mp, 1, 1000000);
  int_in(p.at("model"), "n_classes", mp, 2, 100000);
  int_in(p.at("model"), "init_seed", mp, 0,
         std::numeric_limits<int64_t>::max());
  const std::string tp = path + ".params.train";
  const std::string agg = str_in(p.at("train"), "aggregator", tp, false);
  try {
    horizontal::aggregator_from_name(agg);
  } catch (const ValidationError& e) {
    fail_at(tp + ".aggregator", e.what());
  }
  int_in(p.at("train"), "global_epochs", tp, 1, 1000000);
  int_in(p.at("train"), "local_epochs", tp, 1, 1000000);
  int_in(p.at("train"), "batch_size", tp, 1, 1000000000);
  num_in(p.at("train"), "learning_rate", tp, 0.0, 1e9, true);
  num_in(p.at("train"), "mu", tp, 0.0, 1e9);
  int_in(p, "round_timeout_ms", path + ".params", 1, 86400000);
  str_in(p.at("output"), "model", path + ".params.output", false);
}

void run_horizontal_stage(StageContext& ctx, horizontal::ModelKind kind) {
  namespace hz = horizontal;
  const json& p = ctx.params;
  hz::HorizontalConfig hc;
  hc.model.kind = kind;
  hc.model.n_features = p.at("model").at("n_features").get<size_t>();
  hc.model.hidden = p.at("model").at("hidden").get<size_t>();
  hc.model.n_classes = p.at("model").at("n_classes").get<size_t>();
  hc.model.init_seed = p.at("model").at("init_seed").get<uint64_t>();
  hc.train.aggregator =
      hz::aggregator_from_name(p.at("train").at("aggregator"));
  hc.train.global_epochs = p.at("train").at("global_epochs").get<int>();
  hc.train.local_epochs = p.at("train").at("local_epochs").get<int>();
  hc.train.batch_size = p.at("train").at("batch_size").get<int>();
  hc.train.learning_rate = p.at("train").at("learning_rate").get<double>();
  hc.train.mu = p.at("train").at("mu").get<double>();
  hc.train.seed = ctx.stage_seed("horizontal_train");
  hc.round_timeout =
      transport::Duration(p.at("round_timeout_ms").get<int64_t>());

  const std::vector<transport::PartyId> trainers =
      ctx.with_role(Role::kLabelTrainer);
  hz::ModelState global;
  if (ctx.role == Role::kAssistTrainer) {
    global = hz::run_horizontal_assist(
        *ctx.ep, trainers, hc, [&](int round, const hz::ModelState&) {
          ctx.emit_metrics(json{{"round", round + 1}});
        });
  } else {
    const data::Table table = load_stage_table(ctx);
    auto rng = crypto::seeded_random(
        mix64(ctx.stage_seed("mask_dh"), hash_str(ctx.ep->self().name)));
    const secagg::MaskPlan plan =
        secagg::negotiate_masks(*ctx.ep, trainers, ctx.session_id, *rng);
    const transport::PartyId assist =
        ctx.with_role(Role::kAssistTrainer).front();
    global = hz::run_horizontal_trainer(
        *ctx.ep, assist, plan, table, hc,
        [&](int round, const hz::ModelState& incoming,
            const hz::LocalTrainResult& local) {
          json m = horizontal_metrics(hc.model, incoming, table);
          m["round"] = round + 1;
          m["local_loss"] = local.mean_loss;
          ctx.emit_metrics(m);
        });
    json m = horizontal_metrics(hc.model, global, table);
    m["round"] = hc.train.global_epochs;
    m["final"] = true;
    ctx.emit_metrics(m);
  }
  write_text(output_path(ctx, "model"), global.to_json());
}

// ---------------------------------------------------------------------------
// Vertical logistic regression.

const json& vlr_preset() {
  static const json preset = json::parse(R"({
    "input": {"dataset": {}},
    "output": {"model": "model.json", "predictions": ""},
    "epochs": 1, "batch_size": 2048, "learning_rate": 0.1,
    "key_bits": 1024, "scale_bits": 40, "stage_timeout_ms": 120000
  })");
  return preset;
}

void check_vertical_roles(const std::map<std::string, Role>& roles,
                          const std::string& path, const char* op) {
  const size_t n_label = count_role(roles, Role::kLabelTrainer);
  const size_t n_train = count_role(roles, Role::kTrainer);
  const size_t n_assist = count_role(roles, Role::kAssistTrainer);
  if (n_label != 1) {
    fail_at(path, std::string(op) + " needs exactly one label_trainer, got " +
                      std::to_string(n_label));
  }
  if (n_train < 1) {
    fail_at(path, std::string(op) + " needs at least one trainer, got 0");
  }
  if (n_assist != 0) {
    fail_at(path,
            std::string(op) + " takes no assist_trainer (got " +
                std::to_string(n_assist) + ")");
  }
}

void check_key_bits(const json& p, const std::string& path) {
  const int64_t bits = int_in(p, "key_bits", path, 512, 3072);
  if (bits != 512 && bits != 1024 && bits != 2048 && bits != 3072) {
    fail_at(path + ".key_bits", "must be one of 512, 1024, 2048, 3072");
  }
}

void validate_vlr(const json& p, const std::map<std::string, Role>& roles,
                  const std::string& path) {
  check_vertical_roles(roles, path, "vertical_logistic_regression");
  check_datasets(p, roles,
                 [](Role r) {
                   return r == Role::kLabelTrainer || r == Role::kTrainer;
                 },
                 path);
  const std::string pp = path + ".params";
  int_in(p, "epochs", pp, 1, 1000000);
  int_in(p, "batch_size", pp, 1, 1000000000);
  num_in(p, "learning_rate", pp, 0.0, 1e9, true);
  check_key_bits(p, pp);
  int_in(p, "scale_bits", pp, 8, 60);
  int_in(p, "stage_timeout_ms", pp, 1, 86400000);
  str_in(p.at("output"), "model", pp + ".output", false);
  str_in(p.at("output"), "predictions", pp + ".output", true);
}

void run_vlr_stage(StageContext& ctx) {
  const json& p = ctx.params;
  vertical::VlrParams vp;
  vp.epochs = p.at("epochs").get<int>();
  vp.batch_size = p.at("batch_size").get<size_t>();
  vp.learning_rate = p.at("learning_rate").get<double>();
  vp.key_bits = p.at("key_bits").get<uint32_t>();
  vp.scale_bits = p.at("scale_bits").get<int32_t>();
  vp.stage_timeout =
      transport::Duration(p.at("stage_timeout_ms").get<int64_t>());
  vp.seed = ctx.stage_seed("vlr");

  const data::Table table = load_stage_table(ctx);
  auto rng = crypto::seeded_random(
      mix64(ctx.stage_seed("vlr_rng"), hash_str(ctx.ep->self().name)));
  vertical::VlrResult res;
  if (ctx.role == Role::kLabelTrainer) {
    vertical::VlrEpochHook hook;
    if (has_both_classes(*table.labels)) {
      hook = [&](int epoch, const data::MetricsReport& r) {
        json m = report_json(r);
        m["epoch"] = epoch + 1;
        ctx.emit_metrics(m);
      };
    }
    res = vertical::run_vlr_label_trainer(
        *ctx.ep, ctx.with_role(Role::kTrainer), table, vp, *rng, hook);
    write_predictions_csv(ctx, table.ids, res.train_scores);
  } else {
    res = vertical::run_vlr_trainer(
        *ctx.ep, ctx.with_role(Role::kLabelTrainer).front(), table, vp, *rng);
  }
  write_text(output_path(ctx, "model"), res.model.to_json());
}

// ---------------------------------------------------------------------------
// Vertical XGBoost.

const json& vxgb_preset() {
  static const json preset = json::parse(R"({
    "input": {"dataset": {}},
    "output": {"model": "model.json", "predictions": ""},
    "num_trees": 2, "depth": 2, "learning_rate": 0.3, "lambda": 1.0,
    "gamma": 0.0, "max_bins": 32, "key_bits": 1024, "goss": null,
    "stage_timeout_ms": 120000
  })");
  return preset;
}

void validate_vxgb(const json& p, const std::map<std::string, Role>& roles,
                   const std::string& path) {
  check_vertical_roles(roles, path, "vertical_xgboost");
  check_datasets(p, roles,
                 [](Role r) {
                   return r == Role::kLabelTrainer || r == Role::kTrainer;
                 },
                 path);
  const std::string pp = path + ".params";
  int_in(p, "num_trees", pp, 1, 100000);
  int_in(p, "depth", pp, 1, 32);
  num_in(p, "learning_rate", pp, 0.0, 1e9, true);
  num_in(p, "lambda", pp, 0.0, 1e9);
  num_in(p, "gamma", pp, 0.0, 1e9);
  int_in(p, "max_bins", pp, 2, 65536);
  check_key_bits(p, pp);
  int_in(p, "stage_timeout_ms", pp, 1, 86400000);
  const json& goss = p.at("goss");
  if (!goss.is_null()) {
    if (!goss.is_object()) {
      fail_at(pp + ".goss", "must be null or {top_rate, other_rate}");
    }
    for (const auto& [key, value] : goss.items()) {
      (void)value;
      if (key != "top_rate" && key != "other_rate") {
        fail_at(pp + ".goss." + key, "unknown field");
      }
    }
    if (!goss.contains("top_rate") || !goss.contains("other_rate")) {
      fail_at(pp + ".goss", "needs both top_rate and other_rate");
    }
    vertical::GossSpec spec;
    spec.top_rate = num_in(goss, "top_rate", pp + ".goss", 0.0, 1.0, true);
    spec.other_rate = num_in(goss, "other_rate", pp + ".goss", 0.0, 1.0, true);
    try {
      spec.validate();
    } catch (const ValidationError& e) {
      fail_at(pp + ".goss", e.what());
    }
  }
  str_in(p.at("output"), "model", pp + ".output", false);
  str_in(p.at("output"), "predictions", pp + ".output", true);
}

json split_book_json(const vertical::SplitBook& book) {
  json b = json::object();
  for (const auto& [ref, rule] : book) {
    b[std::to_string(ref)] = {{"feature", rule.feature},
                              {"bin", rule.bin},
                              {"threshold", rule.threshold}};
  }
  return b;
}

void run_vxgb_stage(StageContext& ctx) {
  const json& p = ctx.params;
  vertical::VxgbParams xp;
  xp.num_trees = p.at("num_trees").get<int>();
  xp.depth = p.at("depth").get<int>();
  xp.learning_rate = p.at("learning_rate").get<double>();
  xp.lambda = p.at("lambda").get<double>();
  xp.gamma = p.at("gamma").get<double>();
  xp.max_bins = p.at("max_bins").get<size_t>();
  xp.key_bits = p.at("key_bits").get<uint32_t>();
  if (!p.at("goss").is_null()) {
    vertical::GossSpec goss;
    goss.top_rate = p.at("goss").at("top_rate").get<double>();
    goss.other_rate = p.at("goss").at("other_rate").get<double>();
    xp.goss = goss;  // per-tree seeds derive from xp.seed inside the protocol
  }
  xp.stage_timeout =
      transport::Duration(p.at("stage_timeout_ms").get<int64_t>());
  xp.seed = ctx.stage_seed("vxgb");

  const data::Table table = load_stage_table(ctx);
  json artifact = json::object();
  vertical::VxgbResult res;
  if (ctx.role == Role::kLabelTrainer) {
    auto rng = crypto::seeded_random(
        mix64(ctx.stage_seed("vxgb_keys"), hash_str(ctx.ep->self().name)));
    vertical::TreeHook hook;
    if (has_both_classes(*table.labels)) {
      hook = [&](int tree, const data::MetricsReport& r) {
        json m = report_json(r);
        m["tree"] = tree + 1;
        ctx.emit_metrics(m);
      };
    }
    res = vertical::run_vxgb_label_trainer(
        *ctx.ep, ctx.with_role(Role::kTrainer), table, xp, *rng, hook);
    artifact["trees"] = json::array();
    for (const vertical::TreeModel& tree : res.trees) {
      artifact["trees"].push_back(json::parse(tree.to_json()));
    }
    std::vector<double> probs(res.train_scores.size());
    for (size_t i = 0; i < probs.size(); ++i) {
      const double z = res.train_scores[i];
      probs[i] = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                          : std::exp(z) / (1.0 + std::exp(z));
    }
    write_predictions_csv(ctx, table.ids, probs);
  } else {
    res = vertical::run_vxgb_trainer(
        *ctx.ep, ctx.with_role(Role::kLabelTrainer).front(), ctx.participants,
        table, xp);
  }
  artifact["split_book"] = split_book_json(res.book);
  write_text(output_path(ctx, "model"), artifact.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Local operators: no networking, each party works on its own table.

const json& scaler_preset() {
  static const json preset = json::parse(R"({
    "input": {"dataset": {}},
    "output": {"dataset": "scaled.csv", "stats": "scaler.json"}
  })");
  return preset;
}

void validate_scaler(const json& p, const std::map<std::string, Role>& roles,
                     const std::string& path) {
  if (count_role(roles, Role::kAssistTrainer) != 0) {
    fail_at(path, "local operators have no routine for assist_trainer");
  }
  check_datasets(p, roles, [](Role) { return true; }, path);
  str_in(p.at("output"), "dataset", path + ".params.output", false);
  str_in(p.at("output"), "stats", path + ".params.output", true);
}

void run_scaler_stage(StageContext& ctx) {
  data::Table table = load_stage_table(ctx);
  if (table.n_rows() == 0) {
    throw ValidationError("standard scaler needs at least one row");
  }
  const double n = static_cast<double>(table.n_rows());
  json stats = {{"features", json::array()}};
  for (size_t j = 0; j < table.n_cols(); ++j) {
    std::vector<double>& col = table.columns[j];
    double mean = 0.0;
    for (double x : col) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : col) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / n);
    for (double& x : col) x = sd > 0.0 ? (x - mean) / sd : x - mean;
    stats["features"].push_back({{"name", table.feature_names[j]},
                                 {"mean", mean},
                                 {"std", sd}});
  }
  data::save_csv(table, output_path(ctx, "dataset").string());
  const std::string stats_name =
      ctx.params.at("output").at("stats").get<std::string>();
  if (!stats_name.empty()) {
    write_text(ctx.out_dir / stats_name, stats.dump(2) + "\n");
  }
  ctx.emit_metrics(
      json{{"rows", table.n_rows()}, {"features", table.n_cols()}});
}

const json& local_lr_preset() {
  static const json preset = json::parse(R"({
    "input": {"dataset": {}},
    "output": {"model": "model.json"},
    "model": {"n_features": null},
    "train": {"local_epochs": 5, "batch_size": 32, "learning_rate": 0.1}
  })");
  return preset;
}

void validate_local_lr(const json& p, const std::map<std::string, Role>& roles,
                       const std::string& path) {
  for (const auto& [name, role] : roles) {
    if (role != Role::kLabelTrainer) {
      fail_at(path, "local_logistic_regression trains on labeled data; "
                    "party '" +
                        name + "' has role " + role_name(role));
    }
  }
  check_datasets(p, roles, [](Role) { return true; }, path);
  int_in(p.at("model"), "n_features", path + ".params.model", 1, 1000000);
  const std::string tp = path + ".params.train";
  int_in(p.at("train"), "local_epochs", tp, 1, 1000000);
  int_in(p.at("train"), "batch_size", tp, 1, 1000000000);
  num_in(p.at("train"), "learning_rate", tp, 0.0, 1e9, true);
  str_in(p.at("output"), "model", path + ".params.output", false);
}

void run_local_lr_stage(StageContext& ctx) {
  namespace hz = horizontal;
  const json& p = ctx.params;
  const data::Table table = load_stage_table(ctx);
  hz::ModelSpec spec;
  spec.kind = hz::ModelKind::kLogisticRegression;
  spec.n_features = p.at("model").at("n_features").get<size_t>();
  hz::TrainConfig tc;
  tc.local_epochs = p.at("train").at("local_epochs").get<int>();
  tc.batch_size = p.at("train").at("batch_size").get<int>();
  tc.learning_rate = p.at("train").at("learning_rate").get<double>();
  tc.seed = mix64(ctx.stage_seed("local_lr"), hash_str(ctx.ep->self().name));
  const hz::LocalTrainResult res =
      hz::local_train(spec, hz::init_model(spec), table, tc);
  json m = horizontal_metrics(spec, res.state, table);
  m["epochs"] = tc.local_epochs;
  ctx.emit_metrics(m);
  write_text(output_path(ctx, "model"), res.state.to_json());
}

// ---------------------------------------------------------------------------

std::vector<OperatorDef> build_registry() {
  namespace hz = horizontal;
  std::vector<OperatorDef> defs;
  const auto add_horizontal = [&](const char* name, hz::ModelKind kind) {
    defs.push_back({name, horizontal_preset(), validate_horizontal,
                    [kind](StageContext& ctx) {
                      run_horizontal_stage(ctx, kind);
                    }});
  };
  add_horizontal("horizontal_linear_regression",
                 hz::ModelKind::kLinearRegression);
  add_horizontal("horizontal_logistic_regression",
                 hz::ModelKind::kLogisticRegression);
  add_horizontal("horizontal_mlp", hz::ModelKind::kMlp);
  add_horizontal("horizontal_softmax_regression", hz::ModelKind::kSoftmax);
  defs.push_back(
      {"vertical_logistic_regression", vlr_preset(), validate_vlr,
       run_vlr_stage});
  defs.push_back({"vertical_xgboost", vxgb_preset(), validate_vxgb,
                  run_vxgb_stage});
  defs.push_back({"local_standard_scaler", scaler_preset(), validate_scaler,
                  run_scaler_stage});
  defs.push_back({"local_logistic_regression", local_lr_preset(),
                  validate_local_lr, run_local_lr_stage});
  return defs;
}

const std::vector<OperatorDef>& registry() {
  static const std::vector<OperatorDef> defs = build_registry();
  return defs;
}

}  // namespace

uint64_t StageContext::stage_seed(std::string_view tag) const {
  return mix64(task_seed, hash_str(tag), static_cast<uint64_t>(stage));
}

std::vector<transport::PartyId> StageContext::with_role(Role wanted) const {
  std::vector<transport::PartyId> out;
  for (const transport::PartyId& p : participants) {
    if (roles.at(p.name) == wanted) out.push_back(p);
  }
  return out;
}

const OperatorDef* find_operator(const std::string& name) {
  for (const OperatorDef& def : registry()) {
    if (def.name == name) return &def;
  }
  return nullptr;
}

std::vector<std::string> operator_names() {
  std::vector<std::string> names;
  for (const OperatorDef& def : registry()) names.push_back(def.name);
  return names;
}

nlohmann::json apply_preset(const nlohmann::json& preset,
                            const nlohmann::json& user,
                            const std::string& path) {
  if (preset.is_null()) return user;  // free-form value (validated later)
  if (preset.is_object() && preset.empty()) return user;  // free-form map
  if (preset.is_object()) {
    if (!user.is_object()) fail_at(path, "must be an object");
    json merged = preset;
    for (const auto& [key, value] : user.items()) {
      const auto it = preset.find(key);
      if (it == preset.end()) fail_at(path + "." + key, "unknown field");
      merged[key] = apply_preset(*it, value, path + "." + key);
    }
    return merged;
  }
  return user;  // scalar override; type is checked by the validator
}

std::filesystem::path resolve_input(const StageContext& ctx,
                                    const std::string& ref) {
  constexpr std::string_view kWorkdirPrefix = "workdir:";
  if (ref.rfind(kWorkdirPrefix, 0) == 0) {
    return ctx.session_dir /
           std::filesystem::path(ref.substr(kWorkdirPrefix.size()));
  }
  const std::filesystem::path p(ref);
  return p.is_absolute() ? p : ctx.input_root / p;
}

data::Table load_stage_table(const StageContext& ctx) {
  const json& ds = ctx.params.at("input").at("dataset");
  const std::string& self = ctx.ep->self().name;
  const auto it = ds.find(self);
  if (it == ds.end()) {
    throw ValidationError("no input dataset configured for party '" + self +
                          "'");
  }
  const std::filesystem::path path =
      resolve_input(ctx, it->get<std::string>());
  const bool labeled = ctx.role == Role::kLabelTrainer;
  return data::load_csv(path.string(), labeled);
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(),
            static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace xfl::orchestration
