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

#include "fedgcn/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "fedgcn/errors.hpp"
#include "fedgcn/sbm.hpp"

namespace fedgcn {
namespace {

void check_sbm_args(double n, int k, double alpha, double mu, double p) {
  if (!(n > 0) || k < 1) throw ParameterError("need N > 0 and K >= 1");
  if (!(alpha >= 0 && alpha <= 1) || !(mu >= 0 && mu <= 1)) {
    throw ParameterError("alpha and mu must lie in [0, 1]");
  }
  if (!(p >= 0 && p <= 1)) throw ParameterError("iid fraction must lie in [0, 1]");
}

void check_hop_arg(int hops) {
  if (hops < 0 || hops > 2) throw ParameterError("hops must be 0, 1 or 2");
}

// Probability that a given other client holds no neighbor of a node.
double no_neighbor_probability(double n, int k, double alpha, double mu, double p) {
  const double k2 = static_cast<double>(k) * k;
  return std::pow(1 - alpha, n * p / k2) * std::pow(1 - mu * alpha, n * (k - p) / k2);
}

}  // namespace

SbmConstants sbm_constants(double n, int k, double alpha, double mu) {
  const double kd = k;
  return {(1 - mu) * alpha * n * (kd - 1) / (kd * kd), mu * alpha * n * (kd - 1) / kd};
}

double b4_norm_dense(int k, double alpha, double mu) {
  SbmParams sp;
  sp.num_blocks = k;
  sp.alpha = alpha;
  sp.mu = mu;
  const Matrix b = sp.connectivity();
  const Matrix b2 = b * b;
  return (b2 * b2).norm();
}

double b4_norm_eigen(int k, double alpha, double mu) {
  const double l1 = alpha + (k - 1) * mu * alpha;
  const double l2 = alpha - mu * alpha;
  return std::sqrt(std::pow(l1, 8) + (k - 1) * std::pow(l2, 8));
}

BoundCell sbm_expected_bound(double n, int k, double alpha, double mu, double p, int hops,
                             double sigma) {
  check_sbm_args(n, k, alpha, mu, p);
  check_hop_arg(hops);
  const auto c = sbm_constants(n, k, alpha, mu);
  BoundCell cell;
  cell.exponent = hops == 0 ? 0 : hops == 1 ? 2 : 6;
  cell.growth = 1 + c.c_alpha * p + c.c_mu;
  const double k4 = std::pow(static_cast<double>(k), 4);
  const double shrink = std::pow(cell.growth, cell.exponent) / k4;
  cell.valid = shrink <= 1.0;
  cell.value = (1 - shrink) * std::pow(n / k, 5) * b4_norm_eigen(k, alpha, mu) + (1 - p) * sigma;
  return cell;
}

std::vector<double> label_shift_sigma(const Graph& g, const Partition& part) {
  const int m = g.num_classes;
  std::vector<double> out;
  for (const auto& nodes : part.client_nodes) {
    std::vector<double> freq(static_cast<std::size_t>(m), 0.0);
    for (NodeId v : nodes) freq[static_cast<std::size_t>(g.labels[v])] += 1;
    double s = 0;
    for (double f : freq) {
      const double share = nodes.empty() ? 0.0 : f / static_cast<double>(nodes.size());
      s += (share - 1.0 / m) * (share - 1.0 / m);
    }
    out.push_back(std::sqrt(s));
  }
  return out;
}

double single_class_label_shift(int num_classes) {
  return std::sqrt(static_cast<double>(num_classes - 1) / num_classes);
}

double commensurate_sigma(double shift, double n, int k, double alpha, double mu) {
  return shift * std::pow(n / k, 5) * b4_norm_eigen(k, alpha, mu);
}

namespace {

CsrMatrix local_normalized(const CsrMatrix& looped, const Partition& part, int client) {
  const auto& nodes = part.client_nodes[static_cast<std::size_t>(client)];
  std::vector<std::int64_t> local(looped.rows(), -1);
  for (std::size_t n = 0; n < nodes.size(); ++n) local[nodes[n]] = static_cast<std::int64_t>(n);
  CsrBuilder b(nodes.size(), nodes.size());
  for (NodeId i : nodes) {
    const auto cols = looped.row_cols(i);
    const auto vals = looped.row_values(i);
    for (std::size_t q = 0; q < cols.size(); ++q) {
      if (local[cols[q]] >= 0) b.push(static_cast<std::uint32_t>(local[cols[q]]), vals[q]);
    }
    b.finish_row();
  }
  return row_normalized(std::move(b).build());
}

Matrix take_rows(const Matrix& m, const std::vector<NodeId>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(rows[r]);
  return out;
}

}  // namespace

std::vector<double> gradient_gap_generic(const Graph& g, const Partition& part, int hops,
                                         GapForm form) {
  check_hop_arg(hops);
  if (part.assignment.size() != g.num_nodes()) throw ShapeError("partition does not match graph");
  const CsrMatrix looped = add_self_loops(g).adjacency;
  const CsrMatrix a = row_normalized(looped);
  const Matrix ax = a.multiply(g.features);
  const Matrix q = a.multiply(ax);
  const Matrix global = q.transpose() * q;
  const double factor = form == GapForm::kWithClientFactor ? part.num_clients : 1.0;

  std::vector<double> out;
  for (int k = 0; k < part.num_clients; ++k) {
    const auto& nodes = part.client_nodes[static_cast<std::size_t>(k)];
    Matrix qk;
    if (hops == 0) {
      const CsrMatrix ak = local_normalized(looped, part, k);
      qk = ak.multiply(ak.multiply(take_rows(g.features, nodes)));
    } else if (hops == 1) {
      // A1_k X1_k equals the true-degree aggregate rows of V_k.
      const CsrMatrix ak = local_normalized(looped, part, k);
      qk = ak.multiply(take_rows(ax, nodes));
    } else {
      // A1_k A2_k X2_k equals the centralized two-layer propagation rows.
      qk = take_rows(q, nodes);
    }
    out.push_back((factor * (qk.transpose() * qk) - global).norm());
  }
  return out;
}

double gradient_gap_empirical(const Graph& g, std::span<const ClientView> views,
                              const Split& split, const GcnWeights& w, double l2) {
  const GcnInput central = centralized_input(g, w.num_layers());
  std::vector<std::uint32_t> train(split.train.begin(), split.train.end());
  std::sort(train.begin(), train.end());
  const auto cache = gcn_forward(central, w, 0.0, Mode::kEval, 0);
  const auto global = gcn_backward(cache, central, g.labels, train, w, l2);
  double worst = 0.0;
  for (const auto& v : views) {
    if (v.train.empty()) continue;
    const auto c = gcn_forward(v.input, w, 0.0, Mode::kEval, 0);
    const auto local = gcn_backward(c, v.input, v.labels, v.train, w, l2);
    double s = 0.0;
    for (std::size_t l = 0; l < local.size(); ++l) s += (local[l] - global[l]).squaredNorm();
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

CommForms comm_cost_closed_form(double n, int k, double d, double alpha, double mu, double p,
                                int hops) {
  check_sbm_args(n, k, alpha, mu, p);
  check_hop_arg(hops);
  if (hops == 0) return {0.0, 0.0};
  const double upload = n * (1 + (k - 1) * (1 - no_neighbor_probability(n, k, alpha, mu, p))) * d;
  const auto c = sbm_constants(n, k, alpha, mu);
  const double cp = c.c_alpha * p + c.c_mu;
  if (hops == 1) return {upload + n * d, (cp + 2) * n * d};
  return {2 * upload, 2 * (cp + 1) * n * d};
}

CommForms comm_cost_placement_exact(double n, int k, double d, double alpha, double mu, double p,
                                    int hops) {
  check_sbm_args(n, k, alpha, mu, p);
  check_hop_arg(hops);
  if (hops == 0) return {0.0, 0.0};
  // Symmetric in the class, so fix class 0 and average over the host client.
  double incidences = 0.0;
  for (int host = 0; host < k; ++host) {
    const double placed = (host == 0 ? 1 - p : 0.0) + p / k;
    double count = 1.0;
    for (int other = 0; other < k; ++other) {
      if (other == host) continue;
      double log_none = 0.0;
      for (int cls = 0; cls < k; ++cls) {
        const double members = n / k * (p / k + (cls == other ? 1 - p : 0.0));
        const double prob = cls == 0 ? alpha : mu * alpha;
        log_none += members * std::log1p(-std::min(prob, 1.0 - 1e-300));
      }
      count += 1 - std::exp(log_none);
    }
    incidences += placed * count;
  }
  const double upload = n * incidences * d;
  const double download = hops == 1 ? n * d : upload;
  const auto forms = comm_cost_closed_form(n, k, d, alpha, mu, p, hops);
  return {upload + download, forms.approx};
}

std::uint64_t comm_cost_instance(const Graph& g, const Partition& part, int hops) {
  check_hop_arg(hops);
  if (hops == 0) return 0;
  std::uint64_t closure_total = 0;
  for (int k = 0; k < part.num_clients; ++k) closure_total += client_closure(g, part, k).size();
  // sum_i |c(N_i)| counts (node, client) incidences, the same pairs as the
  // closure sizes summed over clients.
  const std::uint64_t d = g.feature_dim();
  const std::uint64_t download = hops == 1 ? g.num_nodes() : closure_total;
  return (closure_total + download) * d;
}

double expected_neighbor_counts(double n, int k, double alpha, double mu, double p, int hop) {
  check_sbm_args(n, k, alpha, mu, p);
  if (hop < 0) throw ParameterError("hop must be nonnegative");
  const double k2 = static_cast<double>(k) * k;
  const double growth = 1 + (k - 1) * alpha * n / k2 * ((1 - mu) * p + mu * k);
  return n / k * std::pow(growth, hop);
}

double expected_closure_size(double n, int k, double alpha, double mu, double p) {
  check_sbm_args(n, k, alpha, mu, p);
  return n / k + (k - 1.0) / k * n * (1 - no_neighbor_probability(n, k, alpha, mu, p));
}

ConvergenceBound convergence_bound_eval(double gap_norm, int tau, double eta_l, double eta_lambda,
                                        double lambda, int rounds, double f0_minus_fstar,
                                        double b) {
  if (tau <= 0 || rounds <= 0) throw ParameterError("tau and T must be positive");
  if (!(eta_l > 0) || !(eta_lambda > 0) || !(b > 0) || !(lambda > 0)) {
    throw ParameterError("learning rates, lambda and b must be positive");
  }
  ConvergenceBound r;
  r.phi = f0_minus_fstar / (b * eta_lambda * eta_l * tau * rounds);
  r.variance = 15.0 * tau * tau * eta_l * eta_l * lambda * lambda / b * gap_norm * gap_norm;
  r.value = r.phi + r.variance;
  r.valid = eta_lambda <= 1.0 / (8.0 * tau * lambda) && eta_lambda * eta_l <= 1.0 / (tau * lambda);
  return r;
}

}  // namespace fedgcn
