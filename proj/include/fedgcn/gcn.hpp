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
#include <span>
#include <vector>

#include "fedgcn/csr_matrix.hpp"
#include "fedgcn/graph.hpp"

namespace fedgcn {

// Per-layer weights W^(1): d x h, ..., W^(L): h x M.
struct GcnWeights {
  std::vector<Matrix> layers;

  std::size_t num_layers() const noexcept { return layers.size(); }
  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t num_parameters() const;

  // Glorot-uniform initialization for dims {d, h, ..., h, M}.
  static GcnWeights glorot(std::span<const std::size_t> dims, std::uint64_t seed);
  static GcnWeights zeros(std::span<const std::size_t> dims);
  static std::vector<std::size_t> layer_dims(std::size_t input_dim, std::size_t hidden_dim,
                                             std::size_t output_dim, std::size_t num_layers);

  // Throws ShapeError on incompatible consecutive dims, IntegrityError on
  // non-finite entries.
  void validate() const;

  // Checkpoint: one JSON header line listing layer shapes, followed by the
  // row-major little-endian f64 payload of every layer.
  void save(const std::filesystem::path& file) const;
  static GcnWeights load(const std::filesystem::path& file);

  friend bool operator==(const GcnWeights& a, const GcnWeights& b);
};

// Propagation operators for one forward pass. The first layer consumes the
// precomputed aggregate S = A_1 X directly, since A and X never change during
// training. Layer l >= 2 multiplies its input by propagation[l - 2], which may
// be rectangular (rows are that layer's output nodes, columns the previous
// layer's output nodes).
struct GcnInput {
  CsrMatrix aggregated_features;
  std::vector<CsrMatrix> propagation;
  // Global node ids of the final-layer rows.
  std::vector<NodeId> output_nodes;

  std::size_t num_layers() const noexcept { return propagation.size() + 1; }
  std::size_t num_outputs() const noexcept { return output_nodes.size(); }
};

// Row i of the result is (sum_j w_ij x_j) / (sum_j w_ij) over the stored
// entries of row i of a raw (unnormalized) adjacency, accumulated in column
// order. Every code path that needs an aggregated feature row goes through
// this helper so that equal inputs give bit-equal rows.
Vector aggregate_row(std::span<const std::uint32_t> cols, std::span<const double> weights,
                     const Matrix& x);
CsrMatrix sparse_rows(const std::vector<Vector>& rows, std::size_t cols);

// Centralized input: every layer uses the row-normalized A + I.
GcnInput centralized_input(const Graph& g, std::size_t num_layers);

// Generic input from explicit per-layer normalized adjacencies and features.
GcnInput make_input(const std::vector<CsrMatrix>& a_layers, const Matrix& x);

enum class Mode { kTrain, kEval };

struct ForwardCache {
  // Input to each layer's weight product: P_1 = S (sparse, kept in GcnInput),
  // P_l = A_l H^(l-1) for l >= 2.
  std::vector<Matrix> layer_inputs;
  // Pre-activations Z^(l).
  std::vector<Matrix> pre_activations;
  // Post-ReLU, post-dropout hidden activations H^(l), l < L.
  std::vector<Matrix> activations;
  // Dropout multipliers (0 or 1/(1-rate)); empty when dropout is off.
  std::vector<Matrix> dropout_masks;
  // Row-softmax of Z^(L).
  Matrix probabilities;
};

ForwardCache gcn_forward(const GcnInput& input, const GcnWeights& w, double dropout, Mode mode,
                         std::uint64_t dropout_seed);

// Mean cross-entropy over the masked output rows plus (l2 / 2) * sum ||W||^2.
// Throws DegenerateInputError on an empty mask.
double xent_loss(const ForwardCache& cache, std::span<const int> labels,
                 std::span<const std::uint32_t> mask, const GcnWeights& w, double l2);

std::vector<Matrix> gcn_backward(const ForwardCache& cache, const GcnInput& input,
                                 std::span<const int> labels, std::span<const std::uint32_t> mask,
                                 const GcnWeights& w, double l2);

GcnWeights sgd_step(const GcnWeights& w, const std::vector<Matrix>& grads, double lr);

// Index of the largest probability per row; ties go to the lowest class.
std::vector<int> predict(const Matrix& probabilities);

struct TrainConfig {
  double lr = 0.5;
  double l2 = 5e-4;
  int tau = 3;
  int rounds = 300;
  double dropout = 0.5;
  double global_lr = 1.0;
  int eval_every = 1;

  // Throws ConfigError.
  void validate() const;
};

}  // namespace fedgcn
