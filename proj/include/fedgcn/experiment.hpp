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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fedgcn/dataset.hpp"
#include "fedgcn/federation.hpp"
#include "fedgcn/partition.hpp"
#include "fedgcn/sbm.hpp"

namespace fedgcn {

inline constexpr int kSummarySchemaVersion = 1;

struct SbmSource {
  std::size_t nodes = 2000;
  int blocks = 5;
  double alpha = 0.05;
  double mu = 0.1;
  std::size_t feature_dim = 16;
  double feature_noise = 1.0;

  SbmParams params() const;
};

struct SplitSizes {
  std::size_t train_per_class = 20;
  std::size_t val = 500;
  std::size_t test = 1000;
};

struct SweepGrid {
  std::vector<double> iid_fractions{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<int> hops{0, 1, 2};
  // 0 picks the hardware concurrency.
  int workers = 0;
};

struct ExperimentConfig {
  // Exactly one of these is used; a dataset path wins when set.
  SbmSource sbm;
  std::optional<std::filesystem::path> dataset;
  SplitSizes split;

  int clients = 5;
  double iid_fraction = 1.0;
  int hops = 2;
  ModelConfig model;
  TrainConfig training;
  Weighting weighting = Weighting::kUniform;
  std::string channel = "plain";
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir = "out";
  SweepGrid sweep;

  // Throws ConfigError on cross-field violations.
  void validate() const;

  nlohmann::json to_json() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& file);

  // FNV-1a over the canonical JSON dump, without the output directory.
  std::string hash() const;
};

// Everything one seed needs before training.
struct Instance {
  Graph graph;
  Split split;
  Partition partition;
};

Instance prepare_instance(const ExperimentConfig& cfg, std::uint64_t seed);

// Subcommand bodies. Each writes its artifacts under `out` atomically and
// returns the paths written.
std::vector<std::filesystem::path> cmd_generate(const ExperimentConfig& cfg,
                                                const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_partition(const ExperimentConfig& cfg,
                                                 const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_train(const ExperimentConfig& cfg,
                                             const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_analyze(const ExperimentConfig& cfg,
                                               const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_bench_channel(const ExperimentConfig& cfg,
                                                     const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_sweep(const ExperimentConfig& cfg,
                                             const std::filesystem::path& out);

// Writes through a temporary sibling and renames into place.
void write_file_atomic(const std::filesystem::path& file, const std::string& contents);

// Shortest round-trip decimal, empty for NaN.
std::string format_number(double v);

}  // namespace fedgcn
