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
#include <vector>

#include "fedgcn/federation.hpp"
#include "fedgcn/graph.hpp"
#include "fedgcn/partition.hpp"

namespace fedgcn {

struct SbmConstants {
  double c_alpha = 0.0;
  double c_mu = 0.0;
};

// c_alpha = (1 - mu) alpha N (K - 1) / K^2, c_mu = mu alpha N (K - 1) / K.
SbmConstants sbm_constants(double n, int k, double alpha, double mu);

// Frobenius norm of B^4 for the K x K connectivity with B_ii = alpha and
// B_ij = mu alpha: by repeated dense multiplication, and from the two
// eigenvalues alpha + (K - 1) mu alpha and alpha - mu alpha (multiplicity
// K - 1).
double b4_norm_dense(int k, double alpha, double mu);
double b4_norm_eigen(int k, double alpha, double mu);

struct BoundCell {
  double value = 0.0;
  // False when K^-4 (1 + c)^m exceeds 1 and the cell is outside its regime.
  bool valid = true;
  // The (1 + c)^m factor's base and exponent.
  double growth = 1.0;
  int exponent = 0;
};

// Expected gradient-gap bound on the SBM for iid fraction p in [0, 1]:
//   (1 - K^-4 (1 + c_alpha p + c_mu)^m) N^5 / K^5 ||B^4|| + (1 - p) sigma
// with m = 0, 2, 6 for 0, 1, 2 hops. p = 1 gives the iid cell and p = 0 the
// non-iid cell.
BoundCell sbm_expected_bound(double n, int k, double alpha, double mu, double p, int hops,
                             double sigma);

// Per-client Frobenius norm of diag(local label frequencies) - I / M.
std::vector<double> label_shift_sigma(const Graph& g, const Partition& part);
// The same quantity for a client holding one class only.
double single_class_label_shift(int num_classes);
// Scales a label-shift norm by N^5 / K^5 ||B^4|| so it is commensurate with
// the other bound term.
double commensurate_sigma(double shift, double n, int k, double alpha, double mu);

enum class GapForm { kWithClientFactor, kWithoutClientFactor };

// Per-client || K Q_k^T Q_k - Q^T Q || with Q = A A X and Q_k the client's
// two-layer propagation of its features for the given hop mode:
//   0 hops: A_k A_k X_k;  1 hop: A_k A1_k X1_k;  2 hops: A1_k A2_k X2_k
// where A1_k holds the client's rows over N(V_k) and A2_k the rows of N(V_k)
// over its own closure, all normalized by true degree. The unscaled form
// drops the factor K.
std::vector<double> gradient_gap_generic(const Graph& g, const Partition& part, int hops,
                                         GapForm form = GapForm::kWithClientFactor);

// max_k || grad f_k(w) - grad f(w) || over the client views, a proxy for the
// bounded-variability constant.
double gradient_gap_empirical(const Graph& g, std::span<const ClientView> views,
                              const Split& split, const GcnWeights& w, double l2);

struct CommForms {
  double exact = 0.0;
  double approx = 0.0;
};

// Expected pre-training element counts. Upload part
//   U = N (1 + (K - 1)(1 - (1 - alpha)^{N p / K^2} (1 - mu alpha)^{N (K - p) / K^2})) d
// plus N d download for one hop or U for two hops. The approximation is the
// first-order expansion (c_alpha p + c_mu + 2) N d, 2 (c_alpha p + c_mu + 1) N d.
CommForms comm_cost_closed_form(double n, int k, double d, double alpha, double mu, double p,
                                int hops);

// The same upload/download expectation computed over every (class, client)
// placement of the node-placement model, including iid-placed nodes that land
// on another class's home client. Agrees with the closed form at p = 0 and
// p = 1; between them the closed form undercounts.
CommForms comm_cost_placement_exact(double n, int k, double d, double alpha, double mu, double p,
                                    int hops);

// Element count on a concrete partition: sum_i |c(N_i)| d plus N d (1 hop)
// or sum_k |N(V_k)| d (2 hops).
std::uint64_t comm_cost_instance(const Graph& g, const Partition& part, int hops);

// Expected |N(V_k)| per client under the first-order approximation:
//   (N / K)(1 + (K - 1) alpha N / K^2 ((1 - mu) p + mu K))^hop
double expected_neighbor_counts(double n, int k, double alpha, double mu, double p, int hop);
// Exact expectation of the one-hop closure size.
double expected_closure_size(double n, int k, double alpha, double mu, double p);

struct ConvergenceBound {
  double value = 0.0;
  double phi = 0.0;
  double variance = 0.0;
  // eta_lambda <= 1 / (8 tau lambda) and eta_lambda eta_L <= 1 / (tau lambda).
  bool valid = true;
};

// Phi + 15 tau^2 eta_L^2 lambda^2 / b * gap^2 with
// Phi = (f0 - f*) / (b eta_lambda eta_L tau T).
ConvergenceBound convergence_bound_eval(double gap_norm, int tau, double eta_l, double eta_lambda,
                                        double lambda, int rounds, double f0_minus_fstar, double b);

}  // namespace fedgcn
