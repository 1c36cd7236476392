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
#include <optional>
#include <vector>

#include "fedgcn/graph.hpp"

namespace fedgcn {

// Stochastic block model with within-block edge probability alpha and
// cross-block probability mu * alpha. Node features are drawn from
// N(H * onehot(y), sigma^2 I).
struct SbmParams {
  std::size_t num_nodes = 0;
  int num_blocks = 0;
  double alpha = 0.0;
  double mu = 0.0;
  // Empty means uniform over blocks.
  std::vector<double> block_probs;
  std::size_t feature_dim = 0;
  // feature_dim x num_blocks; empty means identity padded with zero rows.
  Matrix feature_matrix;
  double feature_noise = 1.0;

  // Throws ParameterError.
  void validate() const;
  // B with B_ii = alpha and B_ij = mu * alpha.
  Matrix connectivity() const;
  Matrix resolved_feature_matrix() const;
};

Graph sbm_generate(const SbmParams& params, std::uint64_t seed);

}  // namespace fedgcn
