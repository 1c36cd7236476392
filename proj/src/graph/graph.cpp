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

#include "fedgcn/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "fedgcn/errors.hpp"

namespace fedgcn {

Graph Graph::from_edges(std::size_t num_nodes, const std::vector<Edge>& edges, Matrix features,
                        std::vector<int> labels, int num_classes) {
  std::vector<Triplet> triplets;
  triplets.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) {
      throw ParameterError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                           ") references a node outside [0," + std::to_string(num_nodes) + ")");
    }
    triplets.push_back({u, v, 1.0});
    if (u != v) triplets.push_back({v, u, 1.0});
  }
  CsrMatrix summed = CsrMatrix::from_triplets(num_nodes, num_nodes, std::move(triplets));
  // Collapse multi-edges to unit weight.
  for (double& w : summed.mutable_values()) w = 1.0;

  Graph g;
  g.adjacency = std::move(summed);
  g.features = std::move(features);
  g.labels = std::move(labels);
  g.num_classes = num_classes;
  g.validate();
  return g;
}

void Graph::validate() const {
  const std::size_t n = num_nodes();
  if (adjacency.cols() != n) throw IntegrityError("adjacency is not square");
  if (static_cast<std::size_t>(features.rows()) != n) {
    throw IntegrityError("feature rows (" + std::to_string(features.rows()) +
                         ") != nodes (" + std::to_string(n) + ")");
  }
  if (labels.size() != n) throw IntegrityError("label count != node count");
  if (num_classes <= 0 && n > 0) throw IntegrityError("num_classes must be positive");
  for (int y : labels) {
    if (y < 0 || y >= num_classes) {
      throw IntegrityError("label " + std::to_string(y) + " outside [0," +
                           std::to_string(num_classes) + ")");
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    const auto cols = adjacency.row_cols(r);
    for (std::size_t i = 1; i < cols.size(); ++i) {
      if (cols[i - 1] >= cols[i]) throw IntegrityError("columns not strictly increasing");
    }
  }
  if (!(adjacency.transpose() == adjacency)) {
    throw IntegrityError("adjacency is not symmetric");
  }
}

std::size_t num_undirected_edges(const Graph& g) {
  std::size_t count = 0;
  for (std::size_t r = 0; r < g.num_nodes(); ++r) {
    for (NodeId c : g.adjacency.row_cols(r)) {
      if (c > r) ++count;
    }
  }
  return count;
}

std::vector<Edge> undirected_edges(const Graph& g) {
  std::vector<Edge> out;
  for (std::size_t r = 0; r < g.num_nodes(); ++r) {
    for (NodeId c : g.adjacency.row_cols(r)) {
      if (c > r) out.emplace_back(static_cast<NodeId>(r), c);
    }
  }
  return out;
}

bool has_all_self_loops(const Graph& g) {
  for (std::size_t r = 0; r < g.num_nodes(); ++r) {
    const auto cols = g.adjacency.row_cols(r);
    if (!std::binary_search(cols.begin(), cols.end(), static_cast<NodeId>(r))) return false;
  }
  return true;
}

Graph add_self_loops(const Graph& g) {
  const std::size_t n = g.num_nodes();
  CsrBuilder b(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto cols = g.adjacency.row_cols(r);
    const auto vals = g.adjacency.row_values(r);
    bool placed = false;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (!placed && cols[i] >= r) {
        if (cols[i] != r) b.push(static_cast<NodeId>(r), 1.0);
        placed = true;
      }
      b.push(cols[i], vals[i]);
    }
    if (!placed) b.push(static_cast<NodeId>(r), 1.0);
    b.finish_row();
  }
  Graph out = g;
  out.adjacency = std::move(b).build();
  return out;
}

CsrMatrix row_normalized(const CsrMatrix& a) {
  CsrMatrix out = a;
  const auto offsets = out.row_offsets();
  auto values = out.mutable_values();
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const std::size_t begin = offsets[r];
    const std::size_t end = offsets[r + 1];
    double sum = 0.0;
    for (std::size_t p = begin; p < end; ++p) sum += values[p];
    if (end == begin || sum == 0.0) {
      throw DegenerateInputError("row " + std::to_string(r) +
                                 " has zero degree; add self-loops before normalizing");
    }
    if (std::abs(sum - 1.0) <= 4.0 * kEps * static_cast<double>(end - begin)) continue;
    for (std::size_t p = begin; p < end; ++p) values[p] /= sum;
  }
  return out;
}

Graph row_normalize(const Graph& g) {
  Graph out = g;
  out.adjacency = row_normalized(g.adjacency);
  return out;
}

namespace {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(buf, 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v)); }
};

}  // namespace

std::uint64_t graph_digest(const Graph& g) {
  // CSR is already canonical (sorted rows, sorted columns), so hashing it in
  // row-major order is independent of the order edges were supplied in.
  Fnv1a f;
  f.u64(g.num_nodes());
  f.u64(static_cast<std::uint64_t>(g.num_classes));
  for (std::size_t off : g.adjacency.row_offsets()) f.u64(off);
  for (NodeId c : g.adjacency.col_indices()) f.u64(c);
  for (double v : g.adjacency.values()) f.f64(v);
  f.u64(static_cast<std::uint64_t>(g.features.cols()));
  for (Eigen::Index i = 0; i < g.features.size(); ++i) f.f64(g.features.data()[i]);
  for (int y : g.labels) f.u64(static_cast<std::uint64_t>(y));
  return f.h;
}

}  // namespace fedgcn
