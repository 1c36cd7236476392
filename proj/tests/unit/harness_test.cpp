/*
 * Copyright 2026 The fedgcn-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fedgcn/errors.hpp"
#include "fedgcn/experiment.hpp"

namespace fedgcn {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fedgcn_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.sbm.nodes = 150;
  c.sbm.blocks = 3;
  c.sbm.alpha = 0.08;
  c.sbm.mu = 0.2;
  c.sbm.feature_dim = 6;
  c.split = {5, 30, 60};
  c.clients = 3;
  c.iid_fraction = 0.5;
  c.training.rounds = 8;
  c.seeds = {3, 4};
  return c;
}

TEST(ExperimentConfig, JsonRoundTrip) {
  auto c = small_config();
  c.channel = "masked";
  c.weighting = Weighting::kByTrainNodes;
  c.sweep.iid_fractions = {0.0, 0.25};
  const auto back = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(back.hash(), c.hash());
}

TEST(ExperimentConfig, DefaultsMatchReferenceSettings) {
  const auto c = ExperimentConfig::from_json(nlohmann::json::object());
  EXPECT_EQ(c.model.hidden_dim, 16u);
  EXPECT_EQ(c.training.tau, 3);
  EXPECT_EQ(c.training.rounds, 300);
  EXPECT_DOUBLE_EQ(c.training.lr, 0.5);
  EXPECT_EQ(c.training.eval_every, 1);
}

TEST(ExperimentConfig, HashIgnoresOutputDirOnly) {
  auto a = small_config();
  auto b = a;
  b.output_dir = "elsewhere";
  EXPECT_EQ(a.hash(), b.hash());
  b.iid_fraction = 0.6;
  EXPECT_NE(a.hash(), b.hash());
}

TEST(ExperimentConfig, RejectsInvalidConfigs) {
  using nlohmann::json;
  EXPECT_THROW(ExperimentConfig::from_json(json{{"clients", 0}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"hops", 2}, {"model", {{"layers", 1}}}}),
               ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"bogus", 1}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"channel", "paillier"}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"seeds", json::array()}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"clients", "five"}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(json{{"data", {{"sbm", {{"alpha", 2.0}}}}}}),
               ConfigError);
}

TEST(ExperimentConfig, LoadReportsMalformedJson) {
  const auto dir = scratch("badjson");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << "{\"clients\": ";
  EXPECT_THROW(ExperimentConfig::load(dir / "c.json"), ConfigError);
}

TEST(Harness, TrainIsReproducible) {
  const auto c = small_config();
  const auto a = scratch("train_a"), b = scratch("train_b");
  cmd_train(c, a);
  cmd_train(c, b);
  EXPECT_EQ(slurp(a / "rounds.csv"), slurp(b / "rounds.csv"));
  EXPECT_EQ(slurp(a / "rounds.csv").rfind("config_hash,seed,round,t,client,loss,acc,val_acc,test_acc,"
                                          "up_bytes,down_bytes\n", 0),
            0u);
}

TEST(Harness, SingleClientSummaryIsFlagged) {
  auto c = small_config();
  c.clients = 1;
  c.seeds = {1};
  const auto dir = scratch("k1");
  cmd_train(c, dir);
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(j["schema_version"], kSummarySchemaVersion);
  EXPECT_EQ(j["config_hash"], c.hash());
  EXPECT_TRUE(j["centralized_equivalent"].get<bool>());
  EXPECT_EQ(j["flags"][0], "centralized-equivalent");
}

TEST(Harness, AnalyzeCommRatioNearOne) {
  auto c = small_config();
  c.sbm.nodes = 1500;
  c.sbm.blocks = 5;
  c.sbm.alpha = 0.02;
  c.sbm.mu = 0.1;
  c.sbm.feature_dim = 8;
  c.split = {5, 50, 50};
  c.clients = 5;
  c.iid_fraction = 1.0;
  c.seeds = {1};
  const auto dir = scratch("analyze");
  cmd_analyze(c, dir);
  std::istringstream is(slurp(dir / "comm.csv"));
  std::string line;
  std::getline(is, line);
  int checked = 0;
  while (std::getline(is, line)) {
    const auto cut = line.rfind(',');
    const std::string ratio = line.substr(cut + 1);
    if (ratio.empty()) continue;
    EXPECT_GE(std::stod(ratio), 0.95) << line;
    EXPECT_LE(std::stod(ratio), 1.05) << line;
    ++checked;
  }
  EXPECT_EQ(checked, 2);
  EXPECT_TRUE(fs::exists(dir / "bounds.csv"));
}

TEST(Harness, SweepWritesOneRowPerPoint) {
  auto c = small_config();
  c.training.rounds = 3;
  c.seeds = {1};
  c.sweep.iid_fractions = {0.0, 1.0};
  c.sweep.hops = {0, 1};
  c.sweep.workers = 2;
  const auto dir = scratch("sweep");
  cmd_sweep(c, dir);
  const auto csv = slurp(dir / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(std::distance(fs::directory_iterator(dir / "points"), fs::directory_iterator{}), 4);
}

TEST(Harness, GenerateRoundTripsThroughLoader) {
  auto c = small_config();
  c.seeds = {9};
  const auto dir = scratch("gen");
  cmd_generate(c, dir);
  const auto ds = load_dataset(dir);
  EXPECT_EQ(ds.graph.num_nodes(), 150u);
  ASSERT_TRUE(ds.split.has_value());
  EXPECT_EQ(ds.split->train.size(), 15u);
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(std::nan("")), "");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace fedgcn
