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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fedgcn/graph.hpp"

namespace fedgcn {

struct Split {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;
};

struct Manifest {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t features = 0;
  int classes = 0;
};

struct Dataset {
  Graph graph;
  Manifest manifest;
  // Number of records in edges.txt; duplicates collapse in the graph.
  std::size_t edge_records = 0;
  std::optional<Split> split;
};

enum class DatasetFormat { kEdgeListDirectory };

// Directory layout: edges.txt, features.csv, labels.txt, manifest.json and an
// optional split.json. Throws ParseError (with line number) on malformed
// input and IntegrityError when the parsed data disagrees with the manifest.
Dataset load_dataset(const std::filesystem::path& dir,
                     DatasetFormat format = DatasetFormat::kEdgeListDirectory);

void write_dataset(const std::filesystem::path& dir, const Graph& g,
                   const std::optional<Split>& split = std::nullopt);

Split load_split(const std::filesystem::path& file, std::size_t num_nodes);
void write_split(const std::filesystem::path& file, const Split& split);

// Per-class training sample plus fixed-size validation/test sets drawn from
// the remaining nodes.
Split random_split(const Graph& g, std::size_t train_per_class, std::size_t num_val,
                   std::size_t num_test, std::uint64_t seed);

}  // namespace fedgcn
