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

#include "fedgcn/sbm.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "fedgcn/errors.hpp"
#include "fedgcn/rng.hpp"

namespace fedgcn {

void SbmParams::validate() const {
  if (num_blocks <= 0) throw ParameterError("SBM needs at least one block");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0,1]");
  if (!(mu >= 0.0 && mu <= 1.0)) throw ParameterError("mu must lie in [0,1]");
  if (!(feature_noise >= 0.0)) throw ParameterError("feature noise must be nonnegative");
  if (!block_probs.empty()) {
    if (block_probs.size() != static_cast<std::size_t>(num_blocks)) {
      throw ParameterError("block_probs length != num_blocks");
    }
    double sum = 0.0;
    for (double p : block_probs) {
      if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("block probability outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ParameterError("block_probs must sum to 1");
  }
  if (feature_matrix.size() != 0) {
    if (static_cast<std::size_t>(feature_matrix.rows()) != feature_dim ||
        feature_matrix.cols() != num_blocks) {
      throw ParameterError("feature_matrix must be feature_dim x num_blocks");
    }
  } else if (feature_dim < static_cast<std::size_t>(num_blocks)) {
    throw ParameterError("default feature matrix needs feature_dim >= num_blocks");
  }
}

Matrix SbmParams::connectivity() const {
  Matrix b = Matrix::Constant(num_blocks, num_blocks, mu * alpha);
  b.diagonal().setConstant(alpha);
  return b;
}

Matrix SbmParams::resolved_feature_matrix() const {
  if (feature_matrix.size() != 0) return feature_matrix;
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(feature_dim), num_blocks);
  for (int k = 0; k < num_blocks; ++k) h(k, k) = 1.0;
  return h;
}

Graph sbm_generate(const SbmParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t n = params.num_nodes;
  const int blocks = params.num_blocks;
  Rng rng(derive_seed({seed, 0x5b5bULL}));

  std::vector<double> cumulative(static_cast<std::size_t>(blocks));
  if (params.block_probs.empty()) {
    for (int k = 0; k < blocks; ++k) cumulative[k] = static_cast<double>(k + 1) / blocks;
  } else {
    std::partial_sum(params.block_probs.begin(), params.block_probs.end(), cumulative.begin());
  }
  std::vector<int> labels(n);
  for (auto& y : labels) {
    const double u = uniform01(rng) * cumulative.back();
    int k = 0;
    while (k + 1 < blocks && u >= cumulative[k]) ++k;
    y = k;
  }

  const Matrix b = params.connectivity();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (bernoulli(rng, b(labels[i], labels[j]))) {
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
      }
    }
  }

  const Matrix h = params.resolved_feature_matrix();
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(params.feature_dim));
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < params.feature_dim; ++f) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) =
          h(static_cast<Eigen::Index>(f), labels[i]) + params.feature_noise * noise(rng);
    }
  }
  return Graph::from_edges(n, edges, std::move(x), std::move(labels), blocks);
}

}  // namespace fedgcn
