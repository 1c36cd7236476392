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
#include <utility>
#include <vector>

#include "fedgcn/csr_matrix.hpp"

namespace fedgcn {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Undirected attributed graph: symmetric weighted adjacency in CSR form,
// dense node features and integer labels in [0, num_classes).
struct Graph {
  CsrMatrix adjacency;
  Matrix features;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t num_nodes() const noexcept { return adjacency.rows(); }
  std::size_t feature_dim() const noexcept { return static_cast<std::size_t>(features.cols()); }

  // Builds a unit-weight symmetric adjacency from an edge list. Duplicate and
  // reversed edges collapse into one; u == v yields a single self-loop.
  static Graph from_edges(std::size_t num_nodes, const std::vector<Edge>& edges, Matrix features,
                          std::vector<int> labels, int num_classes);

  // Throws IntegrityError when an invariant is violated (asymmetry, label
  // range, row/feature count mismatch).
  void validate() const;
};

// Unordered edges excluding self-loops.
std::size_t num_undirected_edges(const Graph& g);
std::vector<Edge> undirected_edges(const Graph& g);
bool has_all_self_loops(const Graph& g);

// A + I. Nodes that already carry a self-loop keep their existing weight,
// so the result has exactly one self-loop per node.
Graph add_self_loops(const Graph& g);

// D^{-1} A. Throws DegenerateInputError on a zero-degree row. Rows that
// already sum to one (within rounding) are left untouched, which makes the
// operation idempotent.
Graph row_normalize(const Graph& g);
CsrMatrix row_normalized(const CsrMatrix& a);

// Order-normalized 64-bit digest of the whole graph, labels included.
std::uint64_t graph_digest(const Graph& g);

}  // namespace fedgcn
