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

#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

#include "fedgcn/errors.hpp"
#include "fedgcn/federation.hpp"
#include "fedgcn/rng.hpp"

namespace fedgcn {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Counts count_correct(const std::vector<int>& predicted, const std::vector<int>& labels,
                     std::span<const std::uint32_t> mask) {
  Counts c;
  for (auto i : mask) c.correct += predicted[i] == labels[i];
  c.total = mask.size();
  return c;
}

void add(Counts& into, const Counts& c) {
  into.correct += c.correct;
  into.total += c.total;
}

Accuracy evaluate_view(const GcnWeights& w, const ClientView& v) {
  const auto cache = gcn_forward(v.input, w, 0.0, Mode::kEval, 0);
  const auto predicted = predict(cache.probabilities);
  return {count_correct(predicted, v.labels, v.train), count_correct(predicted, v.labels, v.val),
          count_correct(predicted, v.labels, v.test)};
}

double accuracy_or_nan(const Counts& c) {
  return c.total == 0 ? std::numeric_limits<double>::quiet_NaN() : c.accuracy();
}

bool all_finite(const GcnWeights& w) {
  for (const auto& m : w.layers) {
    if (!m.allFinite()) return false;
  }
  return true;
}

std::vector<WireRecord> model_records(const GcnWeights& w) {
  std::vector<WireRecord> recs;
  for (std::size_t l = 0; l < w.num_layers(); ++l) {
    const auto& m = w.layers[l];
    WireRecord r{static_cast<std::uint32_t>(l), kModelHop, {}};
    r.payload.resize(static_cast<std::size_t>(m.size()));
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      r.payload[static_cast<std::size_t>(k)] = std::bit_cast<std::uint64_t>(m.data()[k]);
    }
    recs.push_back(std::move(r));
  }
  return recs;
}

struct LocalResult {
  GcnWeights weights;
  double loss = 0.0;
  bool trained = false;
};

LocalResult local_training(const ClientView& v, GcnWeights w, const TrainConfig& cfg,
                           std::uint64_t seed, int round, int client) {
  LocalResult r;
  if (v.train.empty()) {
    r.weights = std::move(w);
    r.loss = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.trained = true;
  for (int s = 0; s < cfg.tau; ++s) {
    const auto cache =
        gcn_forward(v.input, w, cfg.dropout, Mode::kTrain, dropout_key(seed, round, s, client));
    r.loss = xent_loss(cache, v.labels, v.train, w, cfg.l2);
    const auto grads = gcn_backward(cache, v.input, v.labels, v.train, w, cfg.l2);
    w = sgd_step(w, grads, cfg.lr);
  }
  r.weights = std::move(w);
  return r;
}

void record_evaluation(RoundRecord& rec, const GcnWeights& w, std::span<const ClientView> views) {
  Accuracy total;
  for (std::size_t k = 0; k < views.size(); ++k) {
    const auto a = evaluate_view(w, views[k]);
    rec.clients[k].train_acc = accuracy_or_nan(a.train);
    add(total.train, a.train);
    add(total.val, a.val);
    add(total.test, a.test);
  }
  rec.evaluated = true;
  rec.train_acc = accuracy_or_nan(total.train);
  rec.val_acc = accuracy_or_nan(total.val);
  rec.test_acc = accuracy_or_nan(total.test);
}

}  // namespace

std::uint64_t dropout_key(std::uint64_t seed, int round, int step, int client) {
  return derive_seed({seed, 0xd40bULL, static_cast<std::uint64_t>(round),
                      static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(client)});
}

double Counts::accuracy() const {
  if (total == 0) throw UndefinedMetricError("accuracy over an empty mask");
  return static_cast<double>(correct) / static_cast<double>(total);
}

Accuracy evaluate(const GcnWeights& w, std::span<const ClientView> views) {
  Accuracy total;
  for (const auto& v : views) {
    const auto a = evaluate_view(w, v);
    add(total.train, a.train);
    add(total.val, a.val);
    add(total.test, a.test);
  }
  return total;
}

ConvergenceTime convergence_time(std::span<const double> val_acc, double threshold) {
  if (val_acc.empty()) throw ParameterError("convergence time of an empty sequence");
  for (std::size_t t = 1; t < val_acc.size(); ++t) {
    if (std::abs(val_acc[t] - val_acc[t - 1]) <= threshold) return {t + 1, true};
  }
  return {val_acc.size(), false};
}

std::vector<double> TrainingResult::val_curve() const {
  std::vector<double> out;
  for (const auto& r : rounds) {
    if (r.round > 0 && r.evaluated) out.push_back(r.val_acc);
  }
  return out;
}

double TrainingResult::final_test_acc() const {
  for (auto it = rounds.rbegin(); it != rounds.rend(); ++it) {
    if (it->evaluated) return it->test_acc;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

TrainingResult run_training(const Graph& g, const Partition& part, const Split& split,
                            const FederationConfig& fed, const ModelConfig& model,
                            const TrainConfig& train, SecureChannel& channel, std::uint64_t seed) {
  train.validate();
  check_hops(fed.hops, model.num_layers);
  const int K = part.num_clients;
  const auto start = Clock::now();

  TrainingResult result;
  auto pre = run_pretraining(g, part, fed.hops, model.num_layers, channel, split, fed.pretrain);
  const auto& views = pre.views;
  result.pretrain = pre.comm;
  {
    RoundRecord r0;
    r0.clients.resize(static_cast<std::size_t>(K));
    r0.up_bytes = pre.comm.upload_bytes + pre.comm.setup_upload_bytes;
    r0.down_bytes = pre.comm.download_bytes + pre.comm.setup_download_bytes;
    r0.wall_seconds = seconds_since(start);
    result.rounds.push_back(std::move(r0));
  }

  std::size_t total_train = 0;
  for (const auto& v : views) total_train += v.train.size();
  if (total_train == 0) throw ConfigError("no training nodes in the split");
  std::vector<double> coeff(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    coeff[static_cast<std::size_t>(k)] =
        fed.weighting == Weighting::kUniform
            ? 1.0 / K
            : static_cast<double>(views[static_cast<std::size_t>(k)].train.size()) /
                  static_cast<double>(total_train);
  }

  const auto dims = GcnWeights::layer_dims(g.feature_dim(), model.hidden_dim,
                                           static_cast<std::size_t>(g.num_classes),
                                           model.num_layers);
  GcnWeights w = GcnWeights::glorot(dims, seed);
  const std::uint64_t broadcast_bytes =
      channel.wire_bytes(model_records(w), PayloadKind::kModel);

  for (int t = 1; t <= train.rounds; ++t) {
    const auto round_start = Clock::now();
    channel.begin_round(static_cast<std::uint64_t>(t));
    RoundRecord rec;
    rec.round = t;
    rec.t = t * train.tau;
    rec.clients.resize(static_cast<std::size_t>(K));
    rec.down_bytes = broadcast_bytes * static_cast<std::uint64_t>(K);

    std::vector<std::vector<Blob>> uploads(w.num_layers());
    for (int k = 0; k < K; ++k) {
      auto local = local_training(views[static_cast<std::size_t>(k)], w, train, seed, t, k);
      auto& cs = rec.clients[static_cast<std::size_t>(k)];
      cs.loss = local.loss;
      cs.trained = local.trained;
      if (local.trained && !std::isfinite(local.loss)) {
        result.diverged = true;
        result.diagnostic = "non-finite loss at round " + std::to_string(t) + ", client " +
                            std::to_string(k);
      }
      std::vector<WireRecord> msg;
      for (std::size_t l = 0; l < w.num_layers(); ++l) {
        const Matrix scaled = coeff[static_cast<std::size_t>(k)] * local.weights.layers[l];
        Blob b = channel.encrypt({k, {}, l, PayloadKind::kModel},
                                 std::span<const double>(scaled.data(),
                                                         static_cast<std::size_t>(scaled.size())));
        msg.push_back({static_cast<std::uint32_t>(l), kModelHop, b});
        uploads[l].push_back(std::move(b));
      }
      rec.up_bytes += channel.wire_bytes(msg, PayloadKind::kModel);
    }

    if (!result.diverged) {
      GcnWeights next = w;
      for (std::size_t l = 0; l < w.num_layers(); ++l) {
        const auto avg = channel.decrypt(channel.aggregate(uploads[l], PayloadKind::kModel),
                                         PayloadKind::kModel);
        const Matrix mean =
            Eigen::Map<const Matrix>(avg.data(), w.layers[l].rows(), w.layers[l].cols());
        if (train.global_lr == 1.0) {
          next.layers[l] = mean;
        } else {
          next.layers[l] = w.layers[l] + train.global_lr * (mean - w.layers[l]);
        }
      }
      if (!all_finite(next)) {
        result.diverged = true;
        result.diagnostic = "non-finite weights after aggregation at round " + std::to_string(t);
      } else {
        w = std::move(next);
      }
    }

    if (!result.diverged && (t % train.eval_every == 0 || t == train.rounds)) {
      record_evaluation(rec, w, views);
    }
    rec.wall_seconds = seconds_since(round_start);
    result.rounds.push_back(std::move(rec));
    if (result.diverged) break;
  }
  result.weights = std::move(w);
  result.model_bytes_per_round =
      result.rounds.size() > 1 ? result.rounds[1].up_bytes + result.rounds[1].down_bytes : 0;
  return result;
}

TrainingResult run_centralized(const Graph& g, const Split& split, const ModelConfig& model,
                               const TrainConfig& train, std::uint64_t seed) {
  train.validate();
  ClientView view;
  view.input = centralized_input(g, model.num_layers);
  view.nodes = view.input.output_nodes;
  view.labels = g.labels;
  auto sorted = [](std::vector<NodeId> ids) {
    std::sort(ids.begin(), ids.end());
    return std::vector<std::uint32_t>(ids.begin(), ids.end());
  };
  view.train = sorted(split.train);
  view.val = sorted(split.val);
  view.test = sorted(split.test);
  if (view.train.empty()) throw ConfigError("no training nodes in the split");

  const auto dims = GcnWeights::layer_dims(g.feature_dim(), model.hidden_dim,
                                           static_cast<std::size_t>(g.num_classes),
                                           model.num_layers);
  TrainingResult result;
  result.rounds.push_back(RoundRecord{});
  result.rounds.back().clients.resize(1);
  GcnWeights w = GcnWeights::glorot(dims, seed);
  for (int t = 1; t <= train.rounds; ++t) {
    const auto round_start = Clock::now();
    RoundRecord rec;
    rec.round = t;
    rec.t = t * train.tau;
    rec.clients.resize(1);
    for (int s = 0; s < train.tau; ++s) {
      const auto cache = gcn_forward(view.input, w, train.dropout, Mode::kTrain,
                                     dropout_key(seed, t, s, 0));
      rec.clients[0].loss = xent_loss(cache, view.labels, view.train, w, train.l2);
      w = sgd_step(w, gcn_backward(cache, view.input, view.labels, view.train, w, train.l2),
                   train.lr);
    }
    rec.clients[0].trained = true;
    if (!std::isfinite(rec.clients[0].loss) || !all_finite(w)) {
      result.diverged = true;
      result.diagnostic = "non-finite loss or weights at round " + std::to_string(t);
    } else if (t % train.eval_every == 0 || t == train.rounds) {
      record_evaluation(rec, w, std::span<const ClientView>(&view, 1));
    }
    rec.wall_seconds = seconds_since(round_start);
    result.rounds.push_back(std::move(rec));
    if (result.diverged) break;
  }
  result.weights = std::move(w);
  return result;
}

}  // namespace fedgcn
