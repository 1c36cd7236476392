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
#include <vector>

#include "fedgcn/graph.hpp"

namespace fedgcn {

// Disjoint node -> client assignment with the induced per-client internal
// edge sets E_k and cross-client edge sets E_k^c. A cross edge appears in the
// lists of both endpoint clients.
struct Partition {
  int num_clients = 0;
  double iid_fraction = 1.0;
  std::vector<int> assignment;
  std::vector<std::vector<NodeId>> client_nodes;
  std::vector<std::vector<Edge>> internal_edges;
  std::vector<std::vector<Edge>> cross_edges;

  static Partition from_assignment(const Graph& g, int num_clients, std::vector<int> assignment,
                                   double iid_fraction);

  // Number of distinct unordered cross-client edges.
  std::size_t num_cross_edges() const;
};

// With probability p a node goes to a uniformly random client; otherwise to
// client (label mod K).
Partition partition_nodes(const Graph& g, int num_clients, double iid_fraction,
                          std::uint64_t seed);

}  // namespace fedgcn
