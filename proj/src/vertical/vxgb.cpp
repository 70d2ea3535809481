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

#include "xfl/vertical/vxgb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

#include <json.hpp>

#include "xfl/common/error.hpp"
#include "xfl/common/seed_mix.hpp"
#include "xfl/crypto/packing.hpp"
#include "xfl/crypto/paillier.hpp"

namespace xfl::vertical {

namespace {

using nlohmann::json;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::string as_text(const Bytes& b) { return std::string(b.begin(), b.end()); }

json parse_json(const Bytes& b, const char* what) {
  json v = json::parse(as_text(b), nullptr, false);
  if (v.is_discarded()) {
    throw ProtocolError(std::string("vxgb: malformed ") + what + " message");
  }
  return v;
}

// Per-feature bin ids for every row, fixed once per run.
std::vector<std::vector<uint32_t>> assign_bins(const data::Table& table,
                                               const data::BinMap& bins) {
  std::vector<std::vector<uint32_t>> ids(table.n_cols());
  for (size_t j = 0; j < table.n_cols(); ++j) {
    ids[j].resize(table.n_rows());
    for (size_t i = 0; i < table.n_rows(); ++i) {
      ids[j][i] = static_cast<uint32_t>(bins.bin_of(j, table.columns[j][i]));
    }
  }
  return ids;
}

std::vector<size_t> all_rows(size_t n) {
  std::vector<size_t> rows(n);
  std::iota(rows.begin(), rows.end(), size_t{0});
  return rows;
}

// Splits `rows` (ascending) into the announced left part and the
// order-preserving complement; rejects left rows that are not in `rows`.
std::pair<std::vector<size_t>, std::vector<size_t>> apply_partition(
    const std::vector<size_t>& rows, const std::vector<size_t>& left) {
  std::vector<size_t> l, r;
  l.reserve(left.size());
  r.reserve(rows.size() - std::min(rows.size(), left.size()));
  size_t k = 0;
  for (size_t row : rows) {
    if (k < left.size() && left[k] == row) {
      l.push_back(row);
      ++k;
    } else {
      r.push_back(row);
    }
  }
  if (k != left.size()) {
    throw ProtocolError("vxgb: partition names rows outside the node");
  }
  return {std::move(l), std::move(r)};
}

Bytes encode_partition(uint32_t tree, uint32_t node, uint64_t ref,
                       const std::vector<size_t>& left) {
  BinaryWriter w;
  w.u32(tree);
  w.u32(node);
  w.u64(ref);
  w.u64(left.size());
  for (size_t row : left) w.u64(row);
  return w.take();
}

std::vector<size_t> decode_partition(const Bytes& payload, uint32_t tree,
                                     uint32_t node, uint64_t ref) {
  BinaryReader r(payload);
  if (r.u32() != tree || r.u32() != node || r.u64() != ref) {
    throw ProtocolError("vxgb: partition does not match the expected node");
  }
  const uint64_t count = r.u64();
  std::vector<size_t> left(count);
  for (uint64_t k = 0; k < count; ++k) left[k] = r.u64();
  if (!r.done() || !std::is_sorted(left.begin(), left.end())) {
    throw ProtocolError("vxgb: malformed partition message");
  }
  return left;
}

}  // namespace

void VxgbParams::validate() const {
  if (num_trees < 1) throw ValidationError("vxgb: num_trees must be >= 1");
  if (depth < 1) throw ValidationError("vxgb: depth must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("vxgb: learning_rate must be positive");
  }
  if (!(lambda >= 0.0) || !(gamma >= 0.0)) {
    throw ValidationError("vxgb: lambda and gamma must be non-negative");
  }
  if (goss) goss->validate();
  if (max_bins < 2) throw ValidationError("vxgb: max_bins must be >= 2");
  pack.validate();
  if (stage_timeout.count() <= 0) {
    throw ValidationError("vxgb: stage_timeout must be positive");
  }
}

const TreeNode* TreeModel::find(int id) const {
  auto it = std::lower_bound(
      nodes.begin(), nodes.end(), id,
      [](const TreeNode& n, int key) { return n.id < key; });
  if (it == nodes.end() || it->id != id) return nullptr;
  return &*it;
}

std::string TreeModel::to_json() const {
  json out;
  out["depth"] = depth;
  json arr = json::array();
  for (const TreeNode& n : nodes) {
    json jn = {{"id", n.id},
               {"owner", n.owner},
               {"ref", n.split_ref},
               {"left", n.left},
               {"right", n.right}};
    if (n.leaf_weight) jn["leaf"] = *n.leaf_weight;
    arr.push_back(std::move(jn));
  }
  out["nodes"] = std::move(arr);
  return out.dump();
}

TreeModel TreeModel::from_json(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded() || !v.is_object() || !v.contains("depth") ||
      !v.contains("nodes") || !v["nodes"].is_array()) {
    throw ValidationError("vxgb: malformed tree model json");
  }
  TreeModel tree;
  tree.depth = v["depth"].get<int>();
  for (const json& jn : v["nodes"]) {
    TreeNode n;
    n.id = jn.at("id").get<int>();
    n.owner = jn.at("owner").get<std::string>();
    n.split_ref = jn.at("ref").get<uint64_t>();
    n.left = jn.at("left").get<int>();
    n.right = jn.at("right").get<int>();
    if (jn.contains("leaf")) n.leaf_weight = jn["leaf"].get<double>();
    tree.nodes.push_back(std::move(n));
  }
  std::sort(tree.nodes.begin(), tree.nodes.end(),
            [](const TreeNode& a, const TreeNode& b) { return a.id < b.id; });
  return tree;
}

VxgbResult run_vxgb_label_trainer(transport::Endpoint& ep,
                                  const std::vector<transport::PartyId>& trainers,
                                  const data::Table& table,
                                  const VxgbParams& params,
                                  crypto::RandomSource& rng,
                                  const TreeHook& on_tree) {
  params.validate();
  table.validate();
  if (!table.labels) {
    throw ValidationError("vxgb: the label trainer needs a labeled table");
  }
  if (trainers.empty()) {
    throw ValidationError("vxgb: at least one feature trainer is required");
  }
  const std::vector<double>& y = *table.labels;
  const size_t n = table.n_rows();
  if (n == 0) throw ValidationError("vxgb: empty table");

  const auto keys = crypto::paillier_keygen(params.key_bits, rng);
  const data::BinMap bins = data::build_bin_map(table, params.max_bins);
  const auto bin_ids = assign_bins(table, bins);
  const int self_ord = ep.self().ordinal;

  VxgbResult out;
  out.train_scores.assign(n, 0.0);

  for (int t = 0; t < params.num_trees; ++t) {
    // Gradients at the margins accumulated so far.
    std::vector<double> probs(n);
    for (size_t i = 0; i < n; ++i) probs[i] = sigmoid(out.train_scores[i]);
    const std::vector<GradPair> pairs = compute_grad_pairs(probs, y);

    // Sample selection: gradient-based one-side sampling keeps the large
    // gradients and re-weights a random slice of the rest; without it every
    // row participates with weight one.
    std::vector<size_t> selected;
    std::vector<double> mult;
    if (params.goss) {
      GossSpec spec = *params.goss;
      spec.seed = mix64(params.seed, hash_str("goss"),
                        static_cast<uint64_t>(t));
      std::vector<double> g(n);
      for (size_t i = 0; i < n; ++i) g[i] = pairs[i].g;
      GossSelection sel = goss_select(g, spec);
      selected = std::move(sel.indices);
      mult = std::move(sel.multipliers);
    } else {
      selected = all_rows(n);
      mult.assign(n, 1.0);
    }

    std::unordered_map<size_t, GradPair> wpairs;
    wpairs.reserve(selected.size());
    for (size_t k = 0; k < selected.size(); ++k) {
      const size_t i = selected[k];
      wpairs.emplace(i, GradPair{mult[k] * pairs[i].g, mult[k] * pairs[i].h});
    }

    // Ship one packed ciphertext per selected row to every feature holder.
    BinaryWriter w;
    w.u8(t == 0 ? 1 : 0);
    if (t == 0) w.bytes(keys.pub.serialize());
    w.u32(static_cast<uint32_t>(t));
    w.u64(selected.size());
    for (size_t i : selected) {
      const GradPair& gp = wpairs.at(i);
      const crypto::BigInt m = crypto::pack_pair(gp.g, gp.h, params.pack);
      const auto ct = crypto::paillier_encrypt_sk(keys.priv, keys.pub, m, rng);
      w.u64(i);
      w.bytes(ct.serialize());
    }
    ep.broadcast(trainers, kStageEncGrads, w.take());

    TreeModel tree;
    tree.depth = params.depth;

    const auto node_gh = [&](const std::vector<size_t>& rows) {
      double g_total = 0.0, h_total = 0.0;
      for (size_t i : rows) {
        auto it = wpairs.find(i);
        if (it != wpairs.end()) {
          g_total += it->second.g;
          h_total += it->second.h;
        }
      }
      return std::pair<double, double>{g_total, h_total};
    };
    const auto finish_leaf = [&](int id, const std::vector<size_t>& rows) {
      const auto [g_total, h_total] = node_gh(rows);
      const double weight =
          (h_total + params.lambda > 0.0)
              ? params.learning_rate *
                    leaf_weight(g_total, h_total, params.lambda)
              : 0.0;
      tree.nodes.push_back(TreeNode{id, "", 0, -1, -1, weight});
      for (size_t i : rows) out.train_scores[i] += weight;
    };

    std::map<int, std::vector<size_t>> level;
    level[0] = all_rows(n);

    for (int lvl = 0; lvl < params.depth; ++lvl) {
      std::map<int, std::vector<size_t>> next;
      for (const auto& [id, rows] : level) {
        if (rows.empty()) {
          // Every party sees the same empty partition, so the node closes
          // everywhere without a message.
          tree.nodes.push_back(TreeNode{id, "", 0, -1, -1, 0.0});
          continue;
        }
        const auto [g_total, h_total] = node_gh(rows);

        std::optional<SplitCandidate> best;
        const auto consider = [&](const FeatureHistogram& hist, int ordinal,
                                  uint32_t feature) {
          auto cand = best_split_for_feature(hist, g_total, h_total,
                                             params.lambda, params.gamma,
                                             ordinal, feature);
          if (cand && (!best || better_candidate(*cand, *best))) best = cand;
        };
        for (size_t j = 0; j < table.n_cols(); ++j) {
          consider(build_histogram(wpairs, bin_ids[j], rows,
                                   static_cast<uint32_t>(bins.n_bins(j))),
                   self_ord, static_cast<uint32_t>(j));
        }
        for (auto& [pid, payload] : ep.gather(trainers, kStageHist,
                                              params.stage_timeout)) {
          BinaryReader r(payload);
          if (r.u32() != static_cast<uint32_t>(t) ||
              r.u32() != static_cast<uint32_t>(id)) {
            throw ProtocolError("vxgb: histogram for an unexpected node");
          }
          const uint32_t n_features = r.u32();
          for (uint32_t f = 0; f < n_features; ++f) {
            const Bytes blob = r.bytes();
            BinaryReader hr(blob);
            const auto enc = EncryptedHistogram::deserialize(hr);
            consider(decrypt_histogram(keys.priv, enc, params.pack),
                     pid.ordinal, enc.feature);
          }
        }

        if (!best || best->gain <= 0.0) {
          const Bytes verdict = to_bytes(json{{"kind", "leaf"}}.dump());
          for (const auto& tr : trainers) ep.send(tr, kStageSplit, verdict);
          finish_leaf(id, rows);
          continue;
        }

        const uint64_t ref = mix64(params.seed, static_cast<uint64_t>(t),
                                   static_cast<uint64_t>(id));
        const int left_id = 2 * id + 1;
        const int right_id = 2 * id + 2;

        if (best->party_ordinal == self_ord) {
          out.book[ref] = SplitRule{best->feature, best->bin,
                                    bins.splits[best->feature][best->bin]};
          const Bytes verdict = to_bytes(
              json{{"kind", "split"}, {"owner", ep.self().name}, {"ref", ref}}
                  .dump());
          for (const auto& tr : trainers) ep.send(tr, kStageSplit, verdict);

          std::vector<size_t> left, right;
          for (size_t i : rows) {
            (bin_ids[best->feature][i] <= best->bin ? left : right)
                .push_back(i);
          }
          ep.broadcast(trainers, kStagePartition,
                       encode_partition(static_cast<uint32_t>(t),
                                        static_cast<uint32_t>(id), ref, left));
          tree.nodes.push_back(
              TreeNode{id, ep.self().name, ref, left_id, right_id, {}});
          next[left_id] = std::move(left);
          next[right_id] = std::move(right);
        } else {
          const transport::PartyId* owner = nullptr;
          for (const auto& tr : trainers) {
            if (tr.ordinal == best->party_ordinal) owner = &tr;
          }
          if (owner == nullptr) {
            throw ProtocolError("vxgb: split candidate from an unknown party");
          }
          // The owner learns which of its features and bins won; everyone
          // else sees only an opaque reference.
          const Bytes own = to_bytes(json{{"kind", "split_own"},
                                          {"ref", ref},
                                          {"feature", best->feature},
                                          {"bin", best->bin}}
                                         .dump());
          const Bytes other = to_bytes(
              json{{"kind", "split"}, {"owner", owner->name}, {"ref", ref}}
                  .dump());
          for (const auto& tr : trainers) {
            ep.send(tr, kStageSplit,
                    tr.ordinal == owner->ordinal ? own : other);
          }
          const Bytes payload =
              ep.recv(kStagePartition, *owner, params.stage_timeout);
          const std::vector<size_t> left = decode_partition(
              payload, static_cast<uint32_t>(t), static_cast<uint32_t>(id),
              ref);
          auto [l, r] = apply_partition(rows, left);
          tree.nodes.push_back(
              TreeNode{id, owner->name, ref, left_id, right_id, {}});
          next[left_id] = std::move(l);
          next[right_id] = std::move(r);
        }
      }
      level = std::move(next);
    }
    for (const auto& [id, rows] : level) finish_leaf(id, rows);
    std::sort(tree.nodes.begin(), tree.nodes.end(),
              [](const TreeNode& a, const TreeNode& b) { return a.id < b.id; });
    out.trees.push_back(std::move(tree));

    if (on_tree) {
      std::vector<double> scores(n);
      for (size_t i = 0; i < n; ++i) scores[i] = sigmoid(out.train_scores[i]);
      on_tree(t, data::evaluate_binary(scores, y));
    }
  }
  return out;
}

VxgbResult run_vxgb_trainer(transport::Endpoint& ep,
                            const transport::PartyId& label_trainer,
                            const std::vector<transport::PartyId>& all_parties,
                            const data::Table& table,
                            const VxgbParams& params) {
  params.validate();
  table.validate();
  const size_t n = table.n_rows();
  if (n == 0) throw ValidationError("vxgb: empty table");
  if (table.n_cols() == 0) {
    throw ValidationError("vxgb: a feature trainer needs at least one column");
  }

  const data::BinMap bins = data::build_bin_map(table, params.max_bins);
  const auto bin_ids = assign_bins(table, bins);

  std::vector<transport::PartyId> others;
  for (const auto& p : all_parties) {
    if (p.ordinal != ep.self().ordinal) others.push_back(p);
  }

  std::optional<crypto::PaillierPublicKey> pk;
  VxgbResult out;

  for (int t = 0; t < params.num_trees; ++t) {
    const Bytes grads =
        ep.recv(kStageEncGrads, label_trainer, params.stage_timeout);
    BinaryReader r(grads);
    if (r.u8() != 0) {
      const Bytes pk_bytes = r.bytes();
      BinaryReader pr(pk_bytes);
      pk = crypto::PaillierPublicKey::deserialize(pr);
    }
    if (!pk) {
      throw ProtocolError("vxgb: gradients arrived before the public key");
    }
    if (r.u32() != static_cast<uint32_t>(t)) {
      throw ProtocolError("vxgb: gradients for an unexpected tree");
    }
    const uint64_t count = r.u64();
    std::unordered_map<size_t, crypto::PaillierCiphertext> enc;
    enc.reserve(count);
    for (uint64_t k = 0; k < count; ++k) {
      const size_t row = r.u64();
      if (row >= n) throw ProtocolError("vxgb: gradient row out of range");
      const Bytes blob = r.bytes();
      BinaryReader cr(blob);
      enc.emplace(row, crypto::PaillierCiphertext::deserialize(cr));
    }

    std::map<int, std::vector<size_t>> level;
    level[0] = all_rows(n);

    for (int lvl = 0; lvl < params.depth; ++lvl) {
      std::map<int, std::vector<size_t>> next;
      for (const auto& [id, rows] : level) {
        if (rows.empty()) continue;  // closes silently everywhere

        BinaryWriter w;
        w.u32(static_cast<uint32_t>(t));
        w.u32(static_cast<uint32_t>(id));
        w.u32(static_cast<uint32_t>(table.n_cols()));
        for (size_t j = 0; j < table.n_cols(); ++j) {
          const auto hist = build_encrypted_histogram(
              *pk, enc, bin_ids[j], rows, static_cast<uint32_t>(j),
              static_cast<uint32_t>(bins.n_bins(j)), &out.counters);
          w.bytes(hist.serialize());
        }
        ep.send(label_trainer, kStageHist, w.take());

        const Bytes verdict_bytes =
            ep.recv(kStageSplit, label_trainer, params.stage_timeout);
        const json verdict = parse_json(verdict_bytes, "split");
        const std::string kind = verdict.at("kind").get<std::string>();
        if (kind == "leaf") continue;

        const int left_id = 2 * id + 1;
        const int right_id = 2 * id + 2;
        if (kind == "split_own") {
          const auto ref = verdict.at("ref").get<uint64_t>();
          const auto feature = verdict.at("feature").get<uint32_t>();
          const auto bin = verdict.at("bin").get<uint32_t>();
          if (feature >= table.n_cols() ||
              bin >= bins.splits[feature].size()) {
            throw ProtocolError("vxgb: split names a bin we do not have");
          }
          out.book[ref] = SplitRule{feature, bin, bins.splits[feature][bin]};
          std::vector<size_t> left, right;
          for (size_t i : rows) {
            (bin_ids[feature][i] <= bin ? left : right).push_back(i);
          }
          ep.broadcast(others, kStagePartition,
                       encode_partition(static_cast<uint32_t>(t),
                                        static_cast<uint32_t>(id), ref, left));
          next[left_id] = std::move(left);
          next[right_id] = std::move(right);
        } else if (kind == "split") {
          const auto ref = verdict.at("ref").get<uint64_t>();
          const auto owner = ep.party(verdict.at("owner").get<std::string>());
          const Bytes payload =
              ep.recv(kStagePartition, owner, params.stage_timeout);
          const std::vector<size_t> left = decode_partition(
              payload, static_cast<uint32_t>(t), static_cast<uint32_t>(id),
              ref);
          auto [l, rt] = apply_partition(rows, left);
          next[left_id] = std::move(l);
          next[right_id] = std::move(rt);
        } else {
          throw ProtocolError("vxgb: unknown split verdict '" + kind + "'");
        }
      }
      level = std::move(next);
    }
    // Whatever survives the last level is a leaf; weights live only with
    // the label holder, so there is nothing further to exchange.
  }
  return out;
}

std::vector<double> run_vxgb_predict_label(
    transport::Endpoint& ep, const std::vector<transport::PartyId>& trainers,
    const std::vector<TreeModel>& trees, const SplitBook& own_book,
    const data::Table& table, const VxgbParams& params) {
  params.validate();
  table.validate();
  if (trees.size() != static_cast<size_t>(params.num_trees)) {
    throw ValidationError("vxgb: model tree count does not match params");
  }
  const size_t n = table.n_rows();
  std::vector<double> scores(n, 0.0);

  struct Pending {
    int id = 0;
    uint64_t ref = 0;
    std::vector<size_t> rows;
  };

  for (const TreeModel& tree : trees) {
    if (tree.depth != params.depth) {
      throw ValidationError("vxgb: model depth does not match params");
    }
    std::map<int, std::vector<size_t>> level;
    level[0] = all_rows(n);

    for (int lvl = 0; lvl < params.depth; ++lvl) {
      std::map<int, std::vector<size_t>> next;
      std::map<int, std::vector<Pending>> queries;  // owner ordinal -> asks
      for (auto& [id, rows] : level) {
        const TreeNode* node = tree.find(id);
        if (node == nullptr) {
          throw ValidationError("vxgb: model is missing a node");
        }
        if (node->leaf_weight) {
          for (size_t i : rows) scores[i] += *node->leaf_weight;
          continue;
        }
        if (node->owner == ep.self().name) {
          const SplitRule& rule = own_book.at(node->split_ref);
          std::vector<size_t> left, right;
          for (size_t i : rows) {
            // Same partition as training: bin <= b means value < splits[b].
            (table.columns[rule.feature][i] < rule.threshold ? left : right)
                .push_back(i);
          }
          next[node->left] = std::move(left);
          next[node->right] = std::move(right);
        } else {
          queries[ep.party(node->owner).ordinal].push_back(
              Pending{id, node->split_ref, std::move(rows)});
        }
      }

      // One query per trainer per level, empty or not, so the helper loop
      // runs a fixed number of rounds.
      for (const auto& tr : trainers) {
        json q = json::array();
        auto it = queries.find(tr.ordinal);
        if (it != queries.end()) {
          for (const Pending& p : it->second) {
            q.push_back({{"ref", p.ref}, {"rows", p.rows}});
          }
        }
        ep.send(tr, kStagePartition, to_bytes(json{{"q", q}}.dump()));
      }
      for (const auto& tr : trainers) {
        const Bytes reply =
            ep.recv(kStagePartition, tr, params.stage_timeout);
        const json answers = parse_json(reply, "partition answer");
        auto it = queries.find(tr.ordinal);
        const size_t expect = it == queries.end() ? 0 : it->second.size();
        const json& arr = answers.at("answers");
        if (!arr.is_array() || arr.size() != expect) {
          throw ProtocolError("vxgb: partition answer count mismatch");
        }
        for (size_t k = 0; k < expect; ++k) {
          const Pending& p = it->second[k];
          if (arr[k].at("ref").get<uint64_t>() != p.ref) {
            throw ProtocolError("vxgb: partition answer out of order");
          }
          const auto left = arr[k].at("left").get<std::vector<size_t>>();
          auto [l, r] = apply_partition(p.rows, left);
          const TreeNode* node = tree.find(p.id);
          next[node->left] = std::move(l);
          next[node->right] = std::move(r);
        }
      }
      level = std::move(next);
    }
    for (const auto& [id, rows] : level) {
      const TreeNode* node = tree.find(id);
      if (node == nullptr || !node->leaf_weight) {
        throw ValidationError("vxgb: model leaf is missing its weight");
      }
      for (size_t i : rows) scores[i] += *node->leaf_weight;
    }
  }

  for (double& s : scores) s = sigmoid(s);
  return scores;
}

void run_vxgb_predict_helper(transport::Endpoint& ep,
                             const transport::PartyId& label_trainer,
                             const SplitBook& book, const data::Table& table,
                             const VxgbParams& params) {
  params.validate();
  table.validate();
  const int rounds = params.num_trees * params.depth;
  for (int k = 0; k < rounds; ++k) {
    const Bytes query_bytes =
        ep.recv(kStagePartition, label_trainer, params.stage_timeout);
    const json query = parse_json(query_bytes, "partition query");
    json answers = json::array();
    for (const json& item : query.at("q")) {
      const auto ref = item.at("ref").get<uint64_t>();
      const auto rows = item.at("rows").get<std::vector<size_t>>();
      auto it = book.find(ref);
      if (it == book.end()) {
        throw ProtocolError("vxgb: partition query for an unknown split");
      }
      const SplitRule& rule = it->second;
      const std::vector<double>& col = table.columns.at(rule.feature);
      std::vector<size_t> left;
      for (size_t i : rows) {
        if (i >= col.size()) {
          throw ProtocolError("vxgb: partition query row out of range");
        }
        if (col[i] < rule.threshold) left.push_back(i);
      }
      answers.push_back({{"ref", ref}, {"left", left}});
    }
    ep.send(label_trainer, kStagePartition,
            to_bytes(json{{"answers", answers}}.dump()));
  }
}

}  // namespace xfl::vertical
