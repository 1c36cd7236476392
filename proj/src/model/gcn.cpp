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

#include "fedgcn/gcn.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "fedgcn/errors.hpp"
#include "fedgcn/rng.hpp"

namespace fedgcn {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint and wire formats assume a little-endian host");

void check_dims(std::span<const std::size_t> dims) {
  if (dims.size() < 2) throw ShapeError("a GCN needs at least one layer");
  for (std::size_t d : dims) {
    if (d == 0) throw ShapeError("layer dimensions must be positive");
  }
}

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

std::size_t GcnWeights::input_dim() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().rows());
}

std::size_t GcnWeights::output_dim() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().cols());
}

std::size_t GcnWeights::num_parameters() const {
  std::size_t n = 0;
  for (const auto& w : layers) n += static_cast<std::size_t>(w.size());
  return n;
}

std::vector<std::size_t> GcnWeights::layer_dims(std::size_t input_dim, std::size_t hidden_dim,
                                                std::size_t output_dim, std::size_t num_layers) {
  if (num_layers == 0) throw ConfigError("num_layers must be at least 1");
  std::vector<std::size_t> dims{input_dim};
  for (std::size_t l = 1; l < num_layers; ++l) dims.push_back(hidden_dim);
  dims.push_back(output_dim);
  return dims;
}

GcnWeights GcnWeights::glorot(std::span<const std::size_t> dims, std::uint64_t seed) {
  check_dims(dims);
  GcnWeights w;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Rng rng(derive_seed({seed, 0x9107ULL, l}));
    const double limit = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
    Matrix m(static_cast<Eigen::Index>(dims[l]), static_cast<Eigen::Index>(dims[l + 1]));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = (2.0 * uniform01(rng) - 1.0) * limit;
    }
    w.layers.push_back(std::move(m));
  }
  return w;
}

GcnWeights GcnWeights::zeros(std::span<const std::size_t> dims) {
  check_dims(dims);
  GcnWeights w;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    w.layers.push_back(Matrix::Zero(static_cast<Eigen::Index>(dims[l]),
                                    static_cast<Eigen::Index>(dims[l + 1])));
  }
  return w;
}

void GcnWeights::validate() const {
  if (layers.empty()) throw ShapeError("no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (l > 0 && layers[l - 1].cols() != layers[l].rows()) {
      throw ShapeError("layer " + std::to_string(l) + " is " + shape(layers[l]) +
                       " but previous layer is " + shape(layers[l - 1]));
    }
    if (!layers[l].allFinite()) {
      throw IntegrityError("layer " + std::to_string(l) + " has non-finite weights");
    }
  }
}

void GcnWeights::save(const std::filesystem::path& file) const {
  nlohmann::json header = {{"format", "fedgcn-weights"}, {"version", 1}};
  header["layers"] = nlohmann::json::array();
  for (const auto& m : layers) header["layers"].push_back({m.rows(), m.cols()});
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ParameterError("cannot write " + file.string());
  out << header.dump() << '\n';
  for (const auto& m : layers) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
  }
}

GcnWeights GcnWeights::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseError(file.string(), 0, "cannot open file");
  std::string line;
  std::getline(in, line);
  GcnWeights w;
  try {
    const auto header = nlohmann::json::parse(line);
    if (header.at("format") != "fedgcn-weights" || header.at("version") != 1) {
      throw ParseError(file.string(), 1, "not a version 1 weight checkpoint");
    }
    for (const auto& s : header.at("layers")) {
      Matrix m(s.at(0).get<Eigen::Index>(), s.at(1).get<Eigen::Index>());
      in.read(reinterpret_cast<char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
      if (!in) throw IntegrityError(file.string() + ": truncated weight payload");
      w.layers.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(file.string(), 1, e.what());
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IntegrityError(file.string() + ": trailing bytes after weight payload");
  }
  w.validate();
  return w;
}

bool operator==(const GcnWeights& a, const GcnWeights& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    if (a.layers[l].rows() != b.layers[l].rows() || a.layers[l].cols() != b.layers[l].cols() ||
        std::memcmp(a.layers[l].data(), b.layers[l].data(),
                    static_cast<std::size_t>(a.layers[l].size()) * sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

Vector aggregate_row(std::span<const std::uint32_t> cols, std::span<const double> weights,
                     const Matrix& x) {
  Vector sum = Vector::Zero(x.cols());
  double degree = 0.0;
  for (std::size_t p = 0; p < cols.size(); ++p) {
    sum += weights[p] * x.row(cols[p]).transpose();
    degree += weights[p];
  }
  if (degree == 0.0) throw DegenerateInputError("aggregating a row with zero degree");
  return sum / degree;
}

CsrMatrix sparse_rows(const std::vector<Vector>& rows, std::size_t cols) {
  CsrBuilder b(rows.size(), cols);
  for (const auto& r : rows) {
    if (static_cast<std::size_t>(r.size()) != cols) throw ShapeError("row length mismatch");
    for (Eigen::Index c = 0; c < r.size(); ++c) {
      if (r[c] != 0.0) b.push(static_cast<std::uint32_t>(c), r[c]);
    }
    b.finish_row();
  }
  return std::move(b).build();
}

GcnInput centralized_input(const Graph& g, std::size_t num_layers) {
  if (num_layers == 0) throw ConfigError("num_layers must be at least 1");
  const Graph looped = add_self_loops(g);
  GcnInput in;
  std::vector<Vector> rows;
  rows.reserve(g.num_nodes());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    rows.push_back(aggregate_row(looped.adjacency.row_cols(i), looped.adjacency.row_values(i),
                                 g.features));
  }
  in.aggregated_features = sparse_rows(rows, g.feature_dim());
  const CsrMatrix normalized = row_normalize(looped).adjacency;
  for (std::size_t l = 1; l < num_layers; ++l) in.propagation.push_back(normalized);
  in.output_nodes.resize(g.num_nodes());
  std::iota(in.output_nodes.begin(), in.output_nodes.end(), NodeId{0});
  return in;
}

GcnInput make_input(const std::vector<CsrMatrix>& a_layers, const Matrix& x) {
  if (a_layers.empty()) throw ShapeError("need at least one adjacency");
  if (a_layers.front().cols() != static_cast<std::size_t>(x.rows())) {
    throw ShapeError("first adjacency does not match feature rows");
  }
  GcnInput in;
  in.aggregated_features = CsrMatrix::from_dense(a_layers.front().multiply(x));
  for (std::size_t l = 1; l < a_layers.size(); ++l) {
    if (a_layers[l].cols() != a_layers[l - 1].rows()) {
      throw ShapeError("adjacency " + std::to_string(l) + " does not chain with its predecessor");
    }
    in.propagation.push_back(a_layers[l]);
  }
  in.output_nodes.resize(a_layers.back().rows());
  std::iota(in.output_nodes.begin(), in.output_nodes.end(), NodeId{0});
  return in;
}

namespace {

void softmax_rows(Matrix& z) {
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    auto row = z.row(r);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
}

}  // namespace

ForwardCache gcn_forward(const GcnInput& input, const GcnWeights& w, double dropout, Mode mode,
                         std::uint64_t dropout_seed) {
  const std::size_t L = w.num_layers();
  if (input.num_layers() != L) {
    throw ShapeError("input has " + std::to_string(input.num_layers()) +
                     " propagation layers but weights have " + std::to_string(L));
  }
  if (input.aggregated_features.cols() != w.input_dim()) {
    throw ShapeError("feature dim " + std::to_string(input.aggregated_features.cols()) +
                     " does not match first weight " + shape(w.layers[0]));
  }
  if (input.num_outputs() != (L == 1 ? input.aggregated_features.rows()
                                     : input.propagation.back().rows())) {
    throw ShapeError("output node list does not match final layer rows");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ParameterError("dropout must be in [0, 1)");
  const bool use_dropout = mode == Mode::kTrain && dropout > 0.0;
  const double keep_scale = 1.0 / (1.0 - dropout);

  ForwardCache c;
  c.pre_activations.push_back(input.aggregated_features.multiply(w.layers[0]));
  for (std::size_t l = 1; l < L; ++l) {
    Matrix h = c.pre_activations.back().cwiseMax(0.0);
    if (use_dropout) {
      Rng rng(derive_seed({dropout_seed, 0xd0d0ULL, l}));
      Matrix mask(h.rows(), h.cols());
      for (Eigen::Index i = 0; i < mask.size(); ++i) {
        mask.data()[i] = bernoulli(rng, dropout) ? 0.0 : keep_scale;
      }
      h = h.cwiseProduct(mask);
      c.dropout_masks.push_back(std::move(mask));
    }
    const CsrMatrix& a = input.propagation[l - 1];
    if (a.cols() != static_cast<std::size_t>(h.rows())) {
      throw ShapeError("propagation " + std::to_string(l + 1) + " expects " +
                       std::to_string(a.cols()) + " input rows, got " + std::to_string(h.rows()));
    }
    c.layer_inputs.push_back(a.multiply(h));
    c.activations.push_back(std::move(h));
    c.pre_activations.push_back(c.layer_inputs.back() * w.layers[l]);
  }
  c.probabilities = c.pre_activations.back();
  softmax_rows(c.probabilities);
  return c;
}

namespace {

void check_mask(const ForwardCache& cache, std::span<const int> labels,
                std::span<const std::uint32_t> mask) {
  if (mask.empty()) throw DegenerateInputError("loss over an empty node mask");
  const auto n = static_cast<std::size_t>(cache.probabilities.rows());
  if (labels.size() != n) throw ShapeError("label count does not match output rows");
  for (auto i : mask) {
    if (i >= n) throw ShapeError("mask index out of range");
    if (labels[i] < 0 || labels[i] >= cache.probabilities.cols()) {
      throw ShapeError("label out of class range");
    }
  }
}

double l2_penalty(const GcnWeights& w, double l2) {
  if (l2 == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& m : w.layers) s += m.squaredNorm();
  return 0.5 * l2 * s;
}

}  // namespace

double xent_loss(const ForwardCache& cache, std::span<const int> labels,
                 std::span<const std::uint32_t> mask, const GcnWeights& w, double l2) {
  check_mask(cache, labels, mask);
  const Matrix& z = cache.pre_activations.back();
  double total = 0.0;
  for (auto i : mask) {
    const auto row = z.row(i);
    const double m = row.maxCoeff();
    const double lse = m + std::log((row.array() - m).exp().sum());
    total += lse - row[labels[i]];
  }
  return total / static_cast<double>(mask.size()) + l2_penalty(w, l2);
}

std::vector<Matrix> gcn_backward(const ForwardCache& cache, const GcnInput& input,
                                 std::span<const int> labels, std::span<const std::uint32_t> mask,
                                 const GcnWeights& w, double l2) {
  const std::size_t L = w.num_layers();
  if (cache.pre_activations.size() != L || input.num_layers() != L) {
    throw ShapeError("forward cache does not match the weights");
  }
  for (std::size_t l = 0; l < L; ++l) {
    if (cache.pre_activations[l].cols() != w.layers[l].cols()) {
      throw ShapeError("stale forward cache at layer " + std::to_string(l + 1));
    }
  }
  check_mask(cache, labels, mask);

  // dF/dZ^(L) = (Q - Y) / |mask| on masked rows.
  Matrix dz = Matrix::Zero(cache.probabilities.rows(), cache.probabilities.cols());
  const double inv = 1.0 / static_cast<double>(mask.size());
  for (auto i : mask) {
    dz.row(i) = cache.probabilities.row(i) * inv;
    dz(i, labels[i]) -= inv;
  }

  std::vector<Matrix> grads(L);
  for (std::size_t l = L; l-- > 0;) {
    if (l == 0) {
      grads[0] = input.aggregated_features.transpose_multiply(dz);
    } else {
      grads[l] = cache.layer_inputs[l - 1].transpose() * dz;
      Matrix dp = dz * w.layers[l].transpose();
      Matrix dh = input.propagation[l - 1].transpose_multiply(dp);
      if (!cache.dropout_masks.empty()) dh = dh.cwiseProduct(cache.dropout_masks[l - 1]);
      const Matrix& z = cache.pre_activations[l - 1];
      dz = (z.array() > 0.0).select(dh, 0.0);
    }
    if (l2 > 0.0) grads[l] += l2 * w.layers[l];
  }
  return grads;
}

GcnWeights sgd_step(const GcnWeights& w, const std::vector<Matrix>& grads, double lr) {
  if (grads.size() != w.layers.size()) throw ShapeError("gradient layer count mismatch");
  GcnWeights out = w;
  for (std::size_t l = 0; l < grads.size(); ++l) {
    if (grads[l].rows() != w.layers[l].rows() || grads[l].cols() != w.layers[l].cols()) {
      throw ShapeError("gradient " + shape(grads[l]) + " vs weight " + shape(w.layers[l]));
    }
    out.layers[l] -= lr * grads[l];
  }
  return out;
}

std::vector<int> predict(const Matrix& probabilities) {
  std::vector<int> out(static_cast<std::size_t>(probabilities.rows()));
  for (Eigen::Index r = 0; r < probabilities.rows(); ++r) {
    int best = 0;
    for (Eigen::Index c = 1; c < probabilities.cols(); ++c) {
      if (probabilities(r, c) > probabilities(r, best)) best = static_cast<int>(c);
    }
    out[static_cast<std::size_t>(r)] = best;
  }
  return out;
}

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("lr must be positive");
  if (!(l2 >= 0.0)) throw ConfigError("l2 must be nonnegative");
  if (tau < 1) throw ConfigError("tau must be at least 1");
  if (rounds < 0) throw ConfigError("rounds must be nonnegative");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must be in [0, 1)");
  if (!(global_lr > 0.0)) throw ConfigError("global_lr must be positive");
  if (eval_every < 1) throw ConfigError("eval_every must be at least 1");
}

}  // namespace fedgcn
