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

#include <algorithm>

#include "fedgcn/errors.hpp"
#include "fedgcn/federation.hpp"

namespace fedgcn {
namespace {

bool contains(const std::vector<int>& sorted, int v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

std::size_t index_of(const std::vector<NodeId>& sorted, NodeId id) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
  if (it == sorted.end() || *it != id) {
    throw ProtocolError("node " + std::to_string(id) + " missing from message");
  }
  return static_cast<std::size_t>(it - sorted.begin());
}

constexpr std::uint64_t kIdBytes = 4;

}  // namespace

std::vector<NodeId> client_closure(const Graph& g, const Partition& part, int client) {
  std::vector<char> seen(g.num_nodes(), 0);
  for (NodeId v : part.client_nodes.at(static_cast<std::size_t>(client))) {
    seen[v] = 1;
    for (auto c : g.adjacency.row_cols(v)) seen[c] = 1;
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

ParticipantTable build_participants(std::size_t num_nodes,
                                    std::span<const std::vector<NodeId>> closures) {
  ParticipantTable table(num_nodes);
  for (std::size_t k = 0; k < closures.size(); ++k) {
    for (NodeId i : closures[k]) {
      if (i >= num_nodes) throw ProtocolError("announced node id out of range");
      table[i].push_back(static_cast<int>(k));
    }
  }
  return table;
}

std::vector<WireRecord> HopMessage::to_records() const {
  std::vector<WireRecord> out;
  out.reserve(node_ids.size());
  for (std::size_t n = 0; n < node_ids.size(); ++n) {
    out.push_back({node_ids[n], static_cast<std::uint32_t>(hops), payloads[n]});
  }
  return out;
}

HopMessage pretrain_collect(const Graph& g, const Partition& part, int client,
                            const ParticipantTable& participants, const SecureChannel& channel,
                            const PretrainOptions& options) {
  if (participants.size() != g.num_nodes()) {
    throw ProtocolError("participant table names unknown node ids");
  }
  if (client < 0 || client >= part.num_clients) throw ProtocolError("unknown client");
  const Graph looped = add_self_loops(g);
  auto local = [&](std::uint32_t j) { return part.assignment[j] == client; };

  HopMessage msg;
  msg.direction = Direction::kClientToServer;
  msg.client = client;
  std::vector<double> values(g.feature_dim() + 1);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    if (!contains(participants[i], client)) continue;
    const auto cols = looped.adjacency.row_cols(i);
    PartialSum p = partial_row(cols, looped.adjacency.row_values(i), g.features, local);
    if (options.drop_single_neighbor && part.assignment[i] != client &&
        std::count_if(cols.begin(), cols.end(), local) == 1) {
      p.sum.setZero();
      p.degree = 0.0;
    }
    std::copy(p.sum.data(), p.sum.data() + p.sum.size(), values.begin());
    values.back() = p.degree;
    msg.node_ids.push_back(static_cast<NodeId>(i));
    msg.payloads.push_back(
        channel.encrypt({client, participants[i], i, PayloadKind::kFeatures}, values));
  }
  return msg;
}

const Blob& ServerTotals::at(NodeId id) const { return totals[index_of(node_ids, id)]; }

ServerTotals pretrain_aggregate(std::span<const HopMessage> partials, int num_clients,
                                const ParticipantTable& participants,
                                const SecureChannel& channel) {
  std::vector<const HopMessage*> by_client(static_cast<std::size_t>(num_clients), nullptr);
  for (const auto& m : partials) {
    if (m.client < 0 || m.client >= num_clients || m.direction != Direction::kClientToServer) {
      throw ProtocolError("unexpected message from client " + std::to_string(m.client));
    }
    auto& slot = by_client[static_cast<std::size_t>(m.client)];
    if (slot) throw ProtocolError("duplicate message from client " + std::to_string(m.client));
    slot = &m;
  }
  for (int k = 0; k < num_clients; ++k) {
    if (!by_client[static_cast<std::size_t>(k)]) {
      throw IncompleteRoundError("client " + std::to_string(k) + " did not report");
    }
  }

  ServerTotals out;
  std::vector<Blob> contributions;
  for (std::size_t i = 0; i < participants.size(); ++i) {
    if (participants[i].empty()) continue;
    contributions.clear();
    for (int k : participants[i]) {
      const HopMessage& m = *by_client[static_cast<std::size_t>(k)];
      const auto it = std::lower_bound(m.node_ids.begin(), m.node_ids.end(), i);
      if (it == m.node_ids.end() || *it != i) {
        throw IncompleteRoundError("client " + std::to_string(k) + " sent no partial for node " +
                                   std::to_string(i));
      }
      contributions.push_back(m.payloads[static_cast<std::size_t>(it - m.node_ids.begin())]);
    }
    out.node_ids.push_back(static_cast<NodeId>(i));
    out.totals.push_back(channel.aggregate(contributions, PayloadKind::kFeatures));
  }
  return out;
}

void check_hops(int hops, std::size_t num_layers) {
  if (hops < 0) throw ConfigError("hops must be nonnegative");
  if (static_cast<std::size_t>(hops) > std::min<std::size_t>(num_layers, 2)) {
    throw ConfigError("hops = " + std::to_string(hops) + " exceeds min(L, 2) for L = " +
                      std::to_string(num_layers));
  }
}

std::vector<HopMessage> pretrain_distribute(const ServerTotals& totals, const Partition& part,
                                            std::span<const std::vector<NodeId>> closures,
                                            int hops, std::size_t num_layers) {
  check_hops(hops, num_layers);
  std::vector<HopMessage> out(static_cast<std::size_t>(part.num_clients));
  for (int k = 0; k < part.num_clients; ++k) {
    auto& m = out[static_cast<std::size_t>(k)];
    m.direction = Direction::kServerToClient;
    m.client = k;
    m.hops = hops;
    if (hops == 0) continue;
    m.node_ids = hops == 1 ? part.client_nodes[static_cast<std::size_t>(k)]
                           : closures[static_cast<std::size_t>(k)];
    for (NodeId id : m.node_ids) m.payloads.push_back(totals.at(id));
  }
  return out;
}

namespace {

// Restriction of A + I to rows and columns owned by `client`, normalized by
// the local degree.
CsrMatrix local_adjacency(const Graph& looped, const Partition& part, int client,
                          const std::vector<std::int64_t>& local) {
  const auto& nodes = part.client_nodes[static_cast<std::size_t>(client)];
  CsrBuilder b(nodes.size(), nodes.size());
  for (NodeId i : nodes) {
    const auto cols = looped.adjacency.row_cols(i);
    const auto vals = looped.adjacency.row_values(i);
    for (std::size_t q = 0; q < cols.size(); ++q) {
      if (part.assignment[cols[q]] == client) {
        b.push(static_cast<std::uint32_t>(local[cols[q]]), vals[q]);
      }
    }
    b.finish_row();
  }
  return row_normalized(std::move(b).build());
}

std::vector<std::uint32_t> local_mask(const std::vector<NodeId>& global,
                                      const std::vector<std::int64_t>& local) {
  std::vector<std::uint32_t> out;
  for (NodeId v : global) {
    if (v >= local.size()) throw IntegrityError("split references node outside the graph");
    if (local[v] >= 0) out.push_back(static_cast<std::uint32_t>(local[v]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vector> rows_from_totals(const HopMessage& download,
                                     const std::vector<NodeId>& expected,
                                     const SecureChannel& channel, std::size_t dim) {
  if (download.node_ids != expected) {
    throw ProtocolError("client " + std::to_string(download.client) +
                        " received totals for an unexpected node set");
  }
  std::vector<Vector> rows;
  rows.reserve(expected.size());
  for (const auto& blob : download.payloads) {
    const auto v = channel.decrypt(blob, PayloadKind::kFeatures);
    if (v.size() != dim + 1) throw ProtocolError("total payload has the wrong length");
    const Vector sum = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(dim));
    const double degree = v.back();
    if (!(degree > 0.0)) throw DegenerateInputError("node total with zero degree");
    rows.push_back(sum / degree);
  }
  return rows;
}

}  // namespace

ClientView build_client_view(const Graph& g, const Partition& part, int client, int hops,
                             std::size_t num_layers, const HopMessage* download,
                             const SecureChannel& channel, const Split& split) {
  check_hops(hops, num_layers);
  if (hops > 0 && !download) throw ProtocolError("hop mode requires downloaded totals");
  const Graph looped = add_self_loops(g);
  const auto& nodes = part.client_nodes.at(static_cast<std::size_t>(client));
  std::vector<std::int64_t> local(g.num_nodes(), -1);
  for (std::size_t n = 0; n < nodes.size(); ++n) local[nodes[n]] = static_cast<std::int64_t>(n);

  ClientView view;
  view.client = client;
  view.nodes = nodes;
  view.input.output_nodes = nodes;
  for (NodeId v : nodes) view.labels.push_back(g.labels[v]);
  view.train = local_mask(split.train, local);
  view.val = local_mask(split.val, local);
  view.test = local_mask(split.test, local);

  const CsrMatrix a_local = local_adjacency(looped, part, client, local);
  std::vector<Vector> first_rows;
  std::size_t local_layers_from = 1;
  if (hops == 0) {
    auto keep = [&](std::uint32_t j) { return part.assignment[j] == client; };
    for (NodeId i : nodes) {
      PartialSum p =
          partial_row(looped.adjacency.row_cols(i), looped.adjacency.row_values(i), g.features, keep);
      first_rows.push_back(p.sum / p.degree);
    }
  } else if (hops == 1) {
    first_rows = rows_from_totals(*download, nodes, channel, g.feature_dim());
  } else {
    const auto closure = client_closure(g, part, client);
    first_rows = rows_from_totals(*download, closure, channel, g.feature_dim());
    if (num_layers >= 2) {
      // Rows of the client's own nodes over the closure, normalized by the
      // true degree, which the client knows from E_k and E_k^c.
      const CsrMatrix normalized = row_normalized(looped.adjacency);
      CsrBuilder b(nodes.size(), closure.size());
      for (NodeId i : nodes) {
        const auto cols = normalized.row_cols(i);
        const auto vals = normalized.row_values(i);
        for (std::size_t q = 0; q < cols.size(); ++q) {
          const auto at = std::lower_bound(closure.begin(), closure.end(), cols[q]);
          b.push(static_cast<std::uint32_t>(at - closure.begin()), vals[q]);
        }
        b.finish_row();
      }
      view.input.propagation.push_back(std::move(b).build());
      local_layers_from = 2;
    }
  }
  view.input.aggregated_features = sparse_rows(first_rows, g.feature_dim());
  for (std::size_t l = local_layers_from; l < num_layers; ++l) {
    view.input.propagation.push_back(a_local);
  }
  return view;
}

PretrainResult run_pretraining(const Graph& g, const Partition& part, int hops,
                               std::size_t num_layers, SecureChannel& channel, const Split& split,
                               const PretrainOptions& options) {
  check_hops(hops, num_layers);
  const int K = part.num_clients;
  PretrainResult result;
  if (hops == 0) {
    for (int k = 0; k < K; ++k) {
      result.views.push_back(build_client_view(g, part, k, 0, num_layers, nullptr, channel, split));
    }
    return result;
  }

  channel.begin_round(0);
  std::vector<std::vector<NodeId>> closures;
  for (int k = 0; k < K; ++k) closures.push_back(client_closure(g, part, k));
  const auto participants = build_participants(g.num_nodes(), closures);

  auto& comm = result.comm;
  if (channel.name() != "plain") {
    // Clients announce the node ids they can contribute to; the server
    // answers with each node's contributor list so masks can be paired.
    for (const auto& c : closures) {
      comm.setup_upload_bytes += kIdBytes * c.size();
      for (NodeId i : c) comm.setup_download_bytes += kIdBytes * participants[i].size();
    }
  }

  const std::uint64_t d = g.feature_dim();
  std::vector<HopMessage> uploads;
  for (int k = 0; k < K; ++k) {
    uploads.push_back(pretrain_collect(g, part, k, participants, channel, options));
    uploads.back().hops = hops;
    comm.upload_bytes += channel.wire_bytes(uploads.back().to_records(), PayloadKind::kFeatures);
    comm.upload_elements += d * uploads.back().node_ids.size();
  }
  const auto totals = pretrain_aggregate(uploads, K, participants, channel);
  const auto downloads = pretrain_distribute(totals, part, closures, hops, num_layers);
  for (const auto& m : downloads) {
    comm.download_bytes += channel.wire_bytes(m.to_records(), PayloadKind::kFeatures);
    comm.download_elements += d * m.node_ids.size();
  }
  for (int k = 0; k < K; ++k) {
    result.views.push_back(build_client_view(g, part, k, hops, num_layers,
                                             &downloads[static_cast<std::size_t>(k)], channel,
                                             split));
  }
  return result;
}

}  // namespace fedgcn
