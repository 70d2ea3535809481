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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "xfl/common/error.hpp"
#include "xfl/data/metrics.hpp"
#include "xfl/data/partition.hpp"
#include "xfl/data/preprocess.hpp"
#include "xfl/data/table.hpp"

using namespace xfl;
using namespace xfl::data;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("xfl-data-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Table small_table() {
  Table t;
  t.ids = {"a", "b", "c", "d"};
  t.feature_names = {"x0", "x1"};
  t.columns = {{1.0, 2.0, 3.0, 4.0}, {10.0, 20.0, 30.0, 40.0}};
  t.labels = std::vector<double>{0.0, 1.0, 0.0, 1.0};
  return t;
}

// Brute-force KS oracle: O(n^2) scan evaluating |TPR - FPR| with the
// threshold placed at every distinct score value (predict positive when
// score >= threshold).
double ks_oracle(const std::vector<double>& scores,
                 const std::vector<double>& labels) {
  double P = 0.0;
  double N = 0.0;
  for (double y : labels) (y != 0.0 ? P : N) += 1.0;
  double best = 0.0;
  for (double threshold : scores) {
    double tp = 0.0;
    double fp = 0.0;
    for (size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= threshold) (labels[i] != 0.0 ? tp : fp) += 1.0;
    }
    best = std::max(best, std::fabs(tp / P - fp / N));
  }
  return best;
}

// Pair-counting AUC oracle: P(score+ > score-) + 0.5 * P(tie).
double auc_oracle(const std::vector<double>& scores,
                  const std::vector<double>& labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 0.0) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0.0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

}  // namespace

TEST_CASE("csv load parses header, ids, features, labels") {
  TempDir dir;
  const std::string path = dir.file("basic.csv");
  write_file(path,
             "id,x0,x1,y\n"
             "r1,1.5,-2,1\n"
             "r2,0.25,3.125,0\n");
  const Table t = load_csv(path, /*has_label=*/true);
  CHECK(t.n_rows() == 2);
  CHECK(t.n_cols() == 2);
  CHECK(t.ids == std::vector<std::string>{"r1", "r2"});
  CHECK(t.feature_names == std::vector<std::string>{"x0", "x1"});
  CHECK(t.columns[0][0] == 1.5);
  CHECK(t.columns[1][0] == -2.0);
  CHECK(t.columns[0][1] == 0.25);
  CHECK((*t.labels)[0] == 1.0);
  CHECK((*t.labels)[1] == 0.0);
}

TEST_CASE("csv load accepts id column anywhere and no label") {
  TempDir dir;
  const std::string path = dir.file("mid.csv");
  write_file(path,
             "x0,id,x1\n"
             "1,alpha,2\n"
             "3,beta,4\n");
  const Table t = load_csv(path, /*has_label=*/false);
  CHECK(t.ids == std::vector<std::string>{"alpha", "beta"});
  CHECK(t.feature_names == std::vector<std::string>{"x0", "x1"});
  CHECK_FALSE(t.labels.has_value());
  CHECK(t.columns[0] == std::vector<double>{1.0, 3.0});
  CHECK(t.columns[1] == std::vector<double>{2.0, 4.0});
}

TEST_CASE("csv load rejects malformed inputs") {
  TempDir dir;
  CHECK_THROWS_AS(load_csv(dir.file("missing.csv"), false), IoError);

  const std::string ragged = dir.file("ragged.csv");
  write_file(ragged, "id,x0\nr1,1\nr2,1,2\n");
  CHECK_THROWS_AS(load_csv(ragged, false), ValidationError);

  const std::string dup = dir.file("dup.csv");
  write_file(dup, "id,x0\nr1,1\nr1,2\n");
  CHECK_THROWS_AS(load_csv(dup, false), ValidationError);

  const std::string text = dir.file("text.csv");
  write_file(text, "id,x0\nr1,abc\n");
  CHECK_THROWS_AS(load_csv(text, false), ValidationError);

  const std::string no_id = dir.file("noid.csv");
  write_file(no_id, "key,x0\nr1,1\n");
  CHECK_THROWS_AS(load_csv(no_id, false), ValidationError);

  const std::string no_label = dir.file("nolabel.csv");
  write_file(no_label, "id,x0\nr1,1\n");
  CHECK_THROWS_AS(load_csv(no_label, true), ValidationError);
}

TEST_CASE("csv save/load round trip is byte-stable after one canonical pass") {
  TempDir dir;
  const std::string original = dir.file("orig.csv");
  write_file(original,
             "id,x0,x1,y\n"
             "r1,0.1,1e3,1\n"
             "r2,-7.25,0.333333333333333314829616256247390992939472198486328125,0\n");
  const Table t1 = load_csv(original, true);

  const std::string first = dir.file("first.csv");
  save_csv(t1, first);
  const Table t2 = load_csv(first, true);
  const std::string second = dir.file("second.csv");
  save_csv(t2, second);

  CHECK(read_file(first) == read_file(second));
  CHECK(t1.ids == t2.ids);
  CHECK(t1.columns == t2.columns);  // exact doubles survive the round trip
  CHECK(*t1.labels == *t2.labels);
}

TEST_CASE("table validation catches inconsistencies") {
  Table t = small_table();
  t.columns[0].pop_back();
  CHECK_THROWS_AS(t.validate(), ValidationError);

  Table dup = small_table();
  dup.feature_names[1] = "x0";
  CHECK_THROWS_AS(dup.validate(), ValidationError);

  Table bad_labels = small_table();
  bad_labels.labels->pop_back();
  CHECK_THROWS_AS(bad_labels.validate(), ValidationError);
}

TEST_CASE("select_rows keeps alignment across ids, columns, labels") {
  const Table t = small_table();
  const Table s = t.select_rows({3, 1});
  CHECK(s.ids == std::vector<std::string>{"d", "b"});
  CHECK(s.columns[0] == std::vector<double>{4.0, 2.0});
  CHECK(s.columns[1] == std::vector<double>{40.0, 20.0});
  CHECK(*s.labels == std::vector<double>{1.0, 1.0});
}

// ---------------------------------------------------------------------------
// Partitioning
// ---------------------------------------------------------------------------

TEST_CASE("random partition is disjoint, covering, deterministic") {
  std::vector<double> labels(103);
  for (size_t i = 0; i < labels.size(); ++i) labels[i] = double(i % 2);
  PartitionSpec spec;
  spec.kind = PartitionSpec::Kind::kRandom;
  spec.n_parties = 4;
  spec.seed = 7;

  const auto parts = dirichlet_partition(labels, spec);
  REQUIRE(parts.size() == 4);
  std::set<size_t> seen;
  size_t total = 0;
  for (const auto& p : parts) {
    CHECK_FALSE(p.empty());
    CHECK(std::is_sorted(p.begin(), p.end()));
    for (size_t idx : p) CHECK(seen.insert(idx).second);
    total += p.size();
  }
  CHECK(total == labels.size());
  // Round-robin deal: party sizes differ by at most one.
  CHECK(parts[0].size() - parts[3].size() <= 1);

  const auto again = dirichlet_partition(labels, spec);
  CHECK(parts == again);
  spec.seed = 8;
  CHECK(parts != dirichlet_partition(labels, spec));
}

TEST_CASE("dirichlet partition is disjoint, covering, deterministic") {
  std::vector<double> labels(400);
  for (size_t i = 0; i < labels.size(); ++i) labels[i] = double(i % 4);
  PartitionSpec spec;
  spec.kind = PartitionSpec::Kind::kDirichlet;
  spec.n_parties = 3;
  spec.beta = 0.5;
  spec.seed = 42;

  const auto parts = dirichlet_partition(labels, spec);
  REQUIRE(parts.size() == 3);
  std::set<size_t> seen;
  size_t total = 0;
  for (const auto& p : parts) {
    CHECK_FALSE(p.empty());
    for (size_t idx : p) CHECK(seen.insert(idx).second);
    total += p.size();
  }
  CHECK(total == labels.size());
  CHECK(parts == dirichlet_partition(labels, spec));
}

TEST_CASE("smaller dirichlet beta concentrates classes within parties") {
  // Monte-Carlo comparison over 100 seeds: with beta = 0.1 a party's rows
  // should be dominated by few classes; with beta = 10 the class mix should
  // stay close to uniform. We measure the mean (over parties and seeds) of
  // the largest class share inside each party.
  std::vector<double> labels(300);
  for (size_t i = 0; i < labels.size(); ++i) labels[i] = double(i % 3);

  auto mean_max_share = [&](double beta) {
    double acc = 0.0;
    size_t count = 0;
    for (uint64_t seed = 0; seed < 100; ++seed) {
      PartitionSpec spec;
      spec.kind = PartitionSpec::Kind::kDirichlet;
      spec.n_parties = 3;
      spec.beta = beta;
      spec.seed = seed;
      const auto parts = dirichlet_partition(labels, spec);
      for (const auto& p : parts) {
        double counts[3] = {0, 0, 0};
        for (size_t idx : p) counts[size_t(labels[idx])] += 1.0;
        const double max_count = std::max({counts[0], counts[1], counts[2]});
        acc += max_count / double(p.size());
        ++count;
      }
    }
    return acc / double(count);
  };

  const double skewed = mean_max_share(0.1);
  const double uniform = mean_max_share(10.0);
  // With three classes the uniform share is 1/3; expect clear separation.
  CHECK(skewed > uniform + 0.1);
  CHECK(uniform < 0.55);
  CHECK(skewed > 0.55);
}

TEST_CASE("partition rejects invalid specs") {
  std::vector<double> labels = {0, 1, 0, 1};
  PartitionSpec spec;
  spec.n_parties = 0;
  CHECK_THROWS_AS(dirichlet_partition(labels, spec), ValidationError);
  spec.n_parties = 8;  // more parties than rows
  CHECK_THROWS_AS(dirichlet_partition(labels, spec), ValidationError);
  spec.n_parties = 2;
  spec.kind = PartitionSpec::Kind::kDirichlet;
  spec.beta = 0.0;
  CHECK_THROWS_AS(dirichlet_partition(labels, spec), ValidationError);
}

TEST_CASE("partition_table materializes aligned party tables") {
  Table t;
  const size_t n = 60;
  for (size_t i = 0; i < n; ++i) t.ids.push_back("r" + std::to_string(i));
  t.feature_names = {"x"};
  t.columns.resize(1);
  std::vector<double> y;
  for (size_t i = 0; i < n; ++i) {
    t.columns[0].push_back(double(i));
    y.push_back(double(i % 2));
  }
  t.labels = y;

  PartitionSpec spec;
  spec.kind = PartitionSpec::Kind::kDirichlet;
  spec.n_parties = 3;
  spec.beta = 1.0;
  spec.seed = 5;
  const auto tables = partition_table(t, spec);
  REQUIRE(tables.size() == 3);
  std::set<std::string> ids;
  for (const auto& pt : tables) {
    pt.validate();
    REQUIRE(pt.labels.has_value());
    for (size_t i = 0; i < pt.n_rows(); ++i) {
      CHECK(ids.insert(pt.ids[i]).second);
      // Row content stayed aligned: feature value x == index parsed from id.
      const double x = pt.columns[0][i];
      CHECK(pt.ids[i] == "r" + std::to_string(size_t(x)));
      CHECK((*pt.labels)[i] == double(size_t(x) % 2));
    }
  }
  CHECK(ids.size() == n);
}

TEST_CASE("vertical split assigns features exactly once and label once") {
  const Table t = small_table();
  const auto parts = vertical_split(
      t, {{"node-1", {"x1"}}, {"label", {"x0"}}}, "label");
  REQUIRE(parts.size() == 2);
  const Table& host = parts.at("label");
  const Table& guest = parts.at("node-1");
  CHECK(host.feature_names == std::vector<std::string>{"x0"});
  CHECK(guest.feature_names == std::vector<std::string>{"x1"});
  CHECK(host.labels.has_value());
  CHECK_FALSE(guest.labels.has_value());
  CHECK(host.ids == t.ids);
  CHECK(guest.ids == t.ids);
  CHECK(guest.columns[0] == t.columns[1]);
}

TEST_CASE("vertical split validates the assignment") {
  const Table t = small_table();
  using Assign = std::map<std::string, std::vector<std::string>>;
  // label party absent
  CHECK_THROWS_AS(
      vertical_split(t, Assign{{"a", {"x0", "x1"}}}, "label"),
      ValidationError);
  // feature assigned twice
  CHECK_THROWS_AS(vertical_split(
                      t, Assign{{"a", {"x0", "x1"}}, {"b", {"x1"}}}, "a"),
                  ValidationError);
  // feature left out
  CHECK_THROWS_AS(vertical_split(t, Assign{{"a", {"x0"}}, {"b", {}}}, "a"),
                  ValidationError);
  // unknown feature
  CHECK_THROWS_AS(
      vertical_split(t, Assign{{"a", {"x0", "zz"}}, {"b", {"x1"}}}, "a"),
      ValidationError);
}

TEST_CASE("data_split is seeded, disjoint, ratio-sized") {
  Table t;
  for (size_t i = 0; i < 100; ++i) {
    t.ids.push_back(std::to_string(i));
  }
  t.feature_names = {"x"};
  t.columns.resize(1);
  for (size_t i = 0; i < 100; ++i) t.columns[0].push_back(double(i));

  const auto [train, test] = data_split(t, 0.8, 123);
  CHECK(train.n_rows() == 80);
  CHECK(test.n_rows() == 20);
  std::set<std::string> ids(train.ids.begin(), train.ids.end());
  for (const auto& id : test.ids) CHECK(ids.insert(id).second);
  CHECK(ids.size() == 100);

  const auto [train2, test2] = data_split(t, 0.8, 123);
  CHECK(train.ids == train2.ids);
  const auto [train3, test3] = data_split(t, 0.8, 124);
  CHECK(train.ids != train3.ids);

  CHECK_THROWS_AS(data_split(t, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(data_split(t, 1.0, 1), ValidationError);
  Table tiny;
  tiny.ids = {"a", "b"};
  tiny.feature_names = {"x"};
  tiny.columns = {{1.0, 2.0}};
  CHECK_THROWS_AS(data_split(tiny, 0.01, 1), ValidationError);
}

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

TEST_CASE("standard scaler centers and scales with population std") {
  Table t;
  t.ids = {"1", "2"};
  t.feature_names = {"a", "b", "c"};
  // Column a: {0, 2} -> mean 1, population std 1 -> {-1, +1}.
  // Column b: constant -> centered only.
  // Column c: {1, 3} -> mean 2, std 1.
  t.columns = {{0.0, 2.0}, {5.0, 5.0}, {1.0, 3.0}};
  const ScalerParams params = standard_scaler(t);
  CHECK(t.columns[0] == std::vector<double>{-1.0, 1.0});
  CHECK(t.columns[1] == std::vector<double>{0.0, 0.0});
  CHECK(t.columns[2] == std::vector<double>{-1.0, 1.0});
  CHECK(params.mean == std::vector<double>{1.0, 5.0, 2.0});
  CHECK(params.std_dev == std::vector<double>{1.0, 0.0, 1.0});

  // Apply the fitted transform to new data.
  Table held;
  held.ids = {"3"};
  held.feature_names = t.feature_names;
  held.columns = {{3.0}, {6.0}, {2.0}};
  apply_scaler(held, params, true, true);
  CHECK(held.columns[0][0] == 2.0);
  CHECK(held.columns[1][0] == 1.0);  // centered, not divided
  CHECK(held.columns[2][0] == 0.0);

  Table no_mean;
  no_mean.ids = {"1", "2"};
  no_mean.feature_names = {"a"};
  no_mean.columns = {{0.0, 2.0}};
  standard_scaler(no_mean, /*with_mean=*/false, /*with_std=*/true);
  CHECK(no_mean.columns[0] == std::vector<double>{0.0, 2.0});
}

TEST_CASE("row normalization matches hand-computed norms") {
  Table t;
  t.ids = {"1", "2"};
  t.feature_names = {"a", "b"};
  t.columns = {{3.0, 0.0}, {4.0, 0.0}};  // rows: (3,4), (0,0)

  SUBCASE("l2") {
    normalization(t, Axis::kRow, Norm::kL2);
    CHECK(t.columns[0][0] == doctest::Approx(0.6));
    CHECK(t.columns[1][0] == doctest::Approx(0.8));
    CHECK(t.columns[0][1] == 0.0);  // zero row untouched
    CHECK(t.columns[1][1] == 0.0);
  }
  SUBCASE("l1") {
    normalization(t, Axis::kRow, Norm::kL1);
    CHECK(t.columns[0][0] == doctest::Approx(3.0 / 7.0));
    CHECK(t.columns[1][0] == doctest::Approx(4.0 / 7.0));
  }
  SUBCASE("max") {
    normalization(t, Axis::kRow, Norm::kMax);
    CHECK(t.columns[0][0] == doctest::Approx(0.75));
    CHECK(t.columns[1][0] == doctest::Approx(1.0));
  }
}

TEST_CASE("column normalization rescales each feature independently") {
  Table t;
  t.ids = {"1", "2", "3"};
  t.feature_names = {"a"};
  t.columns = {{-2.0, 0.0, 2.0}};
  normalization(t, Axis::kColumn, Norm::kMax);
  CHECK(t.columns[0] == std::vector<double>{-1.0, 0.0, 1.0});

  Table l2;
  l2.ids = {"1", "2"};
  l2.feature_names = {"a"};
  l2.columns = {{3.0, 4.0}};
  normalization(l2, Axis::kColumn, Norm::kL2);
  CHECK(l2.columns[0][0] == doctest::Approx(0.6));
  CHECK(l2.columns[0][1] == doctest::Approx(0.8));
}

TEST_CASE("equal frequency binning reproduces the quartile example") {
  std::vector<double> column(100);
  for (size_t i = 0; i < 100; ++i) column[i] = double(i + 1);  // 1..100
  const auto splits = equal_frequency_binning(column, 4);
  REQUIRE(splits.size() == 3);
  CHECK(splits[0] == 25.5);
  CHECK(splits[1] == 50.5);
  CHECK(splits[2] == 75.5);

  // Shuffled input gives identical splits (order independence).
  std::vector<double> shuffled = column;
  std::mt19937_64 rng(1);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(equal_frequency_binning(shuffled, 4) == splits);
}

TEST_CASE("binning collapses duplicates and handles constants") {
  // Heavy ties: only gaps between distinct runs can host a split.
  std::vector<double> ties = {1, 1, 1, 1, 1, 1, 2, 2, 3, 3};
  const auto splits = equal_frequency_binning(ties, 4);
  for (size_t i = 1; i < splits.size(); ++i) CHECK(splits[i - 1] < splits[i]);
  CHECK(splits.size() <= 3);
  for (double s : splits) {
    CHECK(s > 1.0);
    CHECK(s < 3.0);
  }

  const std::vector<double> constant(50, 3.25);
  CHECK(equal_frequency_binning(constant, 8).empty());

  // More bins than samples: at most n-1 splits, all between neighbors.
  const std::vector<double> few = {1.0, 2.0, 3.0};
  const auto fine = equal_frequency_binning(few, 32);
  CHECK(fine == std::vector<double>{1.5, 2.5});

  CHECK_THROWS_AS(equal_frequency_binning({}, 4), ValidationError);
  CHECK_THROWS_AS(equal_frequency_binning({1.0}, 0), ValidationError);
}

TEST_CASE("bin map covers every value and respects split boundaries") {
  Table t;
  t.ids.resize(100);
  for (size_t i = 0; i < 100; ++i) t.ids[i] = std::to_string(i);
  t.feature_names = {"u"};
  t.columns.resize(1);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (size_t i = 0; i < 100; ++i) t.columns[0].push_back(unif(rng));

  const BinMap map = build_bin_map(t, 8);
  REQUIRE(map.splits.size() == 1);
  CHECK(map.n_bins(0) == map.splits[0].size() + 1);
  // Every bin receives at least one sample; indices ordered with values.
  std::vector<size_t> counts(map.n_bins(0), 0);
  for (double v : t.columns[0]) {
    const size_t b = map.bin_of(0, v);
    REQUIRE(b < counts.size());
    ++counts[b];
    // Check adjacency against the split points directly.
    if (b > 0) CHECK(v > map.splits[0][b - 1]);
    if (b < map.splits[0].size()) CHECK(v <= map.splits[0][b]);
  }
  for (size_t c : counts) CHECK(c > 0);
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

TEST_CASE("ks statistic on a tiny hand-checked example") {
  // scores: pos {0.9, 0.8}, neg {0.7, 0.3}; at threshold 0.8:
  // TPR = 1.0, FPR = 0.0 -> KS = 1.0 (perfect separation).
  CHECK(ks_statistic({0.9, 0.8, 0.7, 0.3}, {1, 1, 0, 0}) == 1.0);
  // Interleaved: pos {0.9, 0.4}, neg {0.6, 0.1}. Thresholds at each value:
  //  >=0.9: TPR .5 FPR 0   -> .5
  //  >=0.6: TPR .5 FPR .5  -> 0
  //  >=0.4: TPR 1  FPR .5  -> .5
  //  >=0.1: TPR 1  FPR 1   -> 0
  CHECK(ks_statistic({0.9, 0.6, 0.4, 0.1}, {1, 0, 1, 0}) == 0.5);
}

TEST_CASE("ks statistic equals brute-force threshold oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> scores;
    std::vector<double> labels;
    for (int i = 0; i < 1000; ++i) {
      const double y = unif(rng) < 0.4 ? 1.0 : 0.0;
      // Overlapping score distributions with deliberate tie mass.
      double s = y != 0.0 ? 0.3 + 0.7 * unif(rng) : 0.7 * unif(rng);
      s = std::round(s * 50.0) / 50.0;  // quantize to force ties
      scores.push_back(s);
      labels.push_back(y);
    }
    CHECK(ks_statistic(scores, labels) ==
          doctest::Approx(ks_oracle(scores, labels)).epsilon(1e-12));
  }
}

TEST_CASE("auc equals pair-counting oracle including ties") {
  CHECK(auc({0.9, 0.8, 0.7, 0.3}, {1, 1, 0, 0}) == 1.0);
  CHECK(auc({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0}) == 0.0);
  CHECK(auc({0.5, 0.5, 0.5, 0.5}, {1, 1, 0, 0}) == 0.5);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> scores;
    std::vector<double> labels;
    for (int i = 0; i < 400; ++i) {
      const double y = unif(rng) < 0.5 ? 1.0 : 0.0;
      double s = std::round(unif(rng) * 20.0) / 20.0;
      if (y != 0.0) s = std::min(1.0, s + 0.15);
      scores.push_back(s);
      labels.push_back(y);
    }
    CHECK(auc(scores, labels) ==
          doctest::Approx(auc_oracle(scores, labels)).epsilon(1e-12));
  }
}

TEST_CASE("accuracy and log loss behave on known inputs") {
  CHECK(accuracy({0.9, 0.4, 0.6, 0.1}, {1, 0, 0, 0}) == 0.75);
  CHECK(accuracy({0.5}, {1}) == 1.0);  // threshold is inclusive

  // Perfectly confident correct predictions: loss near zero.
  CHECK(log_loss({1.0, 0.0}, {1, 0}) == doctest::Approx(0.0).epsilon(1e-9));
  // p = 0.5 everywhere: loss = ln 2.
  CHECK(log_loss({0.5, 0.5}, {1, 0}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // Confident and wrong saturates at the clamp, stays finite.
  CHECK(std::isfinite(log_loss({0.0}, {1})));
}

TEST_CASE("metrics validate inputs") {
  CHECK_THROWS_AS(ks_statistic({0.5, 0.5}, {1, 1}), ValidationError);
  CHECK_THROWS_AS(auc({0.5, 0.5}, {0, 0}), ValidationError);
  CHECK_THROWS_AS(ks_statistic({}, {}), ValidationError);
  CHECK_THROWS_AS(auc({0.5}, {1, 0}), ValidationError);
  CHECK_THROWS_AS(accuracy({}, {}), ValidationError);
  CHECK_THROWS_AS(log_loss({0.5}, {}), ValidationError);
}

TEST_CASE("metrics report serializes to json") {
  MetricsReport r;
  r.ks = 0.5;
  r.auc = 0.75;
  r.accuracy = 0.8;
  r.loss = 0.25;
  const std::string j = r.to_json();
  CHECK(j.find("\"ks\":0.5") != std::string::npos);
  CHECK(j.find("\"auc\":0.75") != std::string::npos);
  CHECK(j.find("\"accuracy\":0.8") != std::string::npos);
  CHECK(j.find("\"loss\":0.25") != std::string::npos);

  const MetricsReport full = evaluate_binary({0.9, 0.8, 0.7, 0.3}, {1, 1, 0, 0});
  CHECK(full.ks == 1.0);
  CHECK(full.auc == 1.0);
  CHECK(full.accuracy == 0.75);  // 0.7 crosses the 0.5 threshold as a false positive
  CHECK(full.loss > 0.0);
}
