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
#include <span>
#include <string>
#include <vector>

#include "fedgcn/dataset.hpp"
#include "fedgcn/gcn.hpp"
#include "fedgcn/graph.hpp"
#include "fedgcn/partition.hpp"
#include "fedgcn/secure.hpp"

namespace fedgcn {

// One client's share of A + I: rows of every node it owns, including the
// cross-client edges it observes, in the global column order.
struct PartialSum {
  Vector sum;
  double degree = 0.0;
};

// sum_j w_ij x_j and sum_j w_ij over the entries of one row of A + I whose
// column passes `keep`, in column order.
template <typename Keep>
PartialSum partial_row(std::span<const std::uint32_t> cols, std::span<const double> weights,
                       const Matrix& x, Keep keep) {
  PartialSum p{Vector::Zero(x.cols()), 0.0};
  for (std::size_t q = 0; q < cols.size(); ++q) {
    if (!keep(cols[q])) continue;
    p.sum += weights[q] * x.row(cols[q]).transpose();
    p.degree += weights[q];
  }
  return p;
}

// The one-hop closure N(V_k): V_k plus every node adjacent to it, ascending.
std::vector<NodeId> client_closure(const Graph& g, const Partition& part, int client);

// For every node i, the sorted set of clients holding a node of N_i (i
// included). This is what the server announces so clients can mask each
// node's partial against exactly the other contributors.
using ParticipantTable = std::vector<std::vector<int>>;
ParticipantTable build_participants(std::size_t num_nodes,
                                    std::span<const std::vector<NodeId>> closures);

enum class Direction { kClientToServer, kServerToClient };

struct HopMessage {
  Direction direction = Direction::kClientToServer;
  int client = 0;
  int hops = 0;
  std::vector<NodeId> node_ids;
  // Encrypted (sum_1..d, degree) per node.
  std::vector<Blob> payloads;

  std::vector<WireRecord> to_records() const;
};

struct PretrainOptions {
  // Privacy option: a client whose partial for a foreign node involves a
  // single neighbor sends zeros instead.
  bool drop_single_neighbor = false;
};

// Partials for every node the participant table assigns to `client`. A node
// without local neighbors yields a zero partial. Throws ProtocolError when the
// table does not match the graph.
HopMessage pretrain_collect(const Graph& g, const Partition& part, int client,
                            const ParticipantTable& participants, const SecureChannel& channel,
                            const PretrainOptions& options = {});

struct ServerTotals {
  // Node ids with at least one contributor, ascending.
  std::vector<NodeId> node_ids;
  std::vector<Blob> totals;
  const Blob& at(NodeId id) const;
};

// Sums partials per node in ascending client order. Throws
// IncompleteRoundError when any client or any expected contribution is missing.
ServerTotals pretrain_aggregate(std::span<const HopMessage> partials, int num_clients,
                                const ParticipantTable& participants,
                                const SecureChannel& channel);

// Server -> client messages: totals for V_k (1 hop) or N(V_k) (2 hops), none
// for 0 hops. Throws ConfigError when hops exceeds min(num_layers, 2).
std::vector<HopMessage> pretrain_distribute(const ServerTotals& totals, const Partition& part,
                                            std::span<const std::vector<NodeId>> closures,
                                            int hops, std::size_t num_layers);

void check_hops(int hops, std::size_t num_layers);

struct ClientView {
  int client = 0;
  std::vector<NodeId> nodes;
  GcnInput input;
  std::vector<int> labels;
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> val;
  std::vector<std::uint32_t> test;
};

// Builds the client's per-layer operators. `download` holds the decrypted
// totals the client received (ignored for 0 hops).
ClientView build_client_view(const Graph& g, const Partition& part, int client, int hops,
                             std::size_t num_layers, const HopMessage* download,
                             const SecureChannel& channel, const Split& split);

struct CommStats {
  std::uint64_t upload_bytes = 0;
  std::uint64_t download_bytes = 0;
  // Participant announcement used by masked channels (ids up, contributor
  // lists down).
  std::uint64_t setup_upload_bytes = 0;
  std::uint64_t setup_download_bytes = 0;
  // Feature elements (d per node record), the unit of the closed-form costs.
  std::uint64_t upload_elements = 0;
  std::uint64_t download_elements = 0;

  std::uint64_t total_bytes() const {
    return upload_bytes + download_bytes + setup_upload_bytes + setup_download_bytes;
  }
  std::uint64_t total_elements() const { return upload_elements + download_elements; }
};

struct PretrainResult {
  std::vector<ClientView> views;
  CommStats comm;
};

// Full pre-training round: announcement, collect, aggregate, distribute and
// view construction.
PretrainResult run_pretraining(const Graph& g, const Partition& part, int hops,
                               std::size_t num_layers, SecureChannel& channel, const Split& split,
                               const PretrainOptions& options = {});

struct ModelConfig {
  std::size_t num_layers = 2;
  std::size_t hidden_dim = 16;
};

enum class Weighting { kUniform, kByTrainNodes };

struct FederationConfig {
  int hops = 2;
  Weighting weighting = Weighting::kUniform;
  PretrainOptions pretrain;
};

struct ClientRoundStats {
  double loss = 0.0;
  double train_acc = 0.0;
  bool trained = false;
};

struct RoundRecord {
  int round = 0;
  int t = 0;
  std::vector<ClientRoundStats> clients;
  bool evaluated = false;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
  std::uint64_t up_bytes = 0;
  std::uint64_t down_bytes = 0;
  double wall_seconds = 0.0;
};

struct TrainingResult {
  std::vector<RoundRecord> rounds;
  GcnWeights weights;
  CommStats pretrain;
  std::uint64_t model_bytes_per_round = 0;
  bool diverged = false;
  std::string diagnostic;

  // Validation accuracy of every evaluated training round, in order.
  std::vector<double> val_curve() const;
  double final_test_acc() const;
};

TrainingResult run_training(const Graph& g, const Partition& part, const Split& split,
                            const FederationConfig& fed, const ModelConfig& model,
                            const TrainConfig& train, SecureChannel& channel, std::uint64_t seed);

// Full-batch SGD on the whole graph with the same seeding and dropout
// schedule as a single federated client.
TrainingResult run_centralized(const Graph& g, const Split& split, const ModelConfig& model,
                               const TrainConfig& train, std::uint64_t seed);

std::uint64_t dropout_key(std::uint64_t seed, int round, int step, int client);

struct Counts {
  std::size_t correct = 0;
  std::size_t total = 0;
  // Throws UndefinedMetricError when total is zero.
  double accuracy() const;
};

struct Accuracy {
  Counts train;
  Counts val;
  Counts test;
};

// Counts correct argmax predictions over each client's masks and sums the
// counts across clients.
Accuracy evaluate(const GcnWeights& w, std::span<const ClientView> views);

struct ConvergenceTime {
  // 1-based evaluation index.
  std::size_t index = 0;
  bool converged = false;
};

// First index t >= 2 with |acc_t - acc_{t-1}| <= threshold; the last index
// (flagged unconverged) otherwise. Throws ParameterError on empty input.
ConvergenceTime convergence_time(std::span<const double> val_acc, double threshold = 0.01);

}  // namespace fedgcn
