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

#include "fedgcn/partition.hpp"

#include <string>

#include "fedgcn/errors.hpp"
#include "fedgcn/rng.hpp"

namespace fedgcn {

Partition Partition::from_assignment(const Graph& g, int num_clients, std::vector<int> assignment,
                                     double iid_fraction) {
  if (num_clients <= 0) throw ParameterError("number of clients must be positive");
  if (assignment.size() != g.num_nodes()) throw ParameterError("assignment size != node count");
  Partition p;
  p.num_clients = num_clients;
  p.iid_fraction = iid_fraction;
  p.client_nodes.resize(static_cast<std::size_t>(num_clients));
  p.internal_edges.resize(static_cast<std::size_t>(num_clients));
  p.cross_edges.resize(static_cast<std::size_t>(num_clients));
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const int k = assignment[i];
    if (k < 0 || k >= num_clients) {
      throw ParameterError("node " + std::to_string(i) + " assigned to invalid client " +
                           std::to_string(k));
    }
    p.client_nodes[static_cast<std::size_t>(k)].push_back(static_cast<NodeId>(i));
  }
  for (const auto& e : undirected_edges(g)) {
    const int a = assignment[e.first];
    const int b = assignment[e.second];
    if (a == b) {
      p.internal_edges[static_cast<std::size_t>(a)].push_back(e);
    } else {
      p.cross_edges[static_cast<std::size_t>(a)].push_back(e);
      p.cross_edges[static_cast<std::size_t>(b)].push_back(e);
    }
  }
  p.assignment = std::move(assignment);
  return p;
}

std::size_t Partition::num_cross_edges() const {
  std::size_t twice = 0;
  for (const auto& c : cross_edges) twice += c.size();
  return twice / 2;
}

Partition partition_nodes(const Graph& g, int num_clients, double iid_fraction,
                          std::uint64_t seed) {
  if (num_clients <= 0) throw ParameterError("number of clients must be positive");
  if (!(iid_fraction >= 0.0 && iid_fraction <= 1.0)) {
    throw ParameterError("iid fraction must lie in [0,1]");
  }
  Rng rng(derive_seed({seed, 0x9a27ULL}));
  std::vector<int> assignment(g.num_nodes());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (bernoulli(rng, iid_fraction)) {
      assignment[i] = static_cast<int>(uniform01(rng) * num_clients);
    } else {
      assignment[i] = g.labels[i] % num_clients;
    }
  }
  return Partition::from_assignment(g, num_clients, std::move(assignment), iid_fraction);
}

}  // namespace fedgcn
