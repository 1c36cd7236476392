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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fedgcn/analysis.hpp"
#include "fedgcn/errors.hpp"
#include "fedgcn/sbm.hpp"
#include "oracles.hpp"

namespace fedgcn {
namespace {

Graph sbm(std::size_t n, int k, double alpha, double mu, std::uint64_t seed, std::size_t d = 0) {
  SbmParams p;
  p.num_nodes = n;
  p.num_blocks = k;
  p.alpha = alpha;
  p.mu = mu;
  p.feature_dim = d == 0 ? static_cast<std::size_t>(k) : d;
  p.feature_noise = 0.3;
  return sbm_generate(p, seed);
}

TEST(SbmConstants, KnownValues) {
  const auto c = sbm_constants(1000, 5, 0.05, 0.1);
  EXPECT_NEAR(c.c_alpha, 7.2, 1e-12);
  EXPECT_NEAR(c.c_mu, 4.0, 1e-12);
}

TEST(B4Norm, EigenFormMatchesDenseProduct) {
  for (int k : {1, 2, 5, 10}) {
    for (double alpha : {0.0, 0.05, 0.3, 1.0}) {
      for (double mu : {0.0, 0.1, 0.5, 1.0}) {
        EXPECT_NEAR(b4_norm_dense(k, alpha, mu), b4_norm_eigen(k, alpha, mu), 1e-10)
            << k << " " << alpha << " " << mu;
      }
    }
  }
}

TEST(ExpectedBound, IidFractionEndpoints) {
  const double sigma = 3.5;
  for (int hops : {0, 1, 2}) {
    const auto iid = sbm_expected_bound(1000, 5, 0.001, 0.1, 1.0, hops, sigma);
    const auto non = sbm_expected_bound(1000, 5, 0.001, 0.1, 0.0, hops, sigma);
    const auto c = sbm_constants(1000, 5, 0.001, 0.1);
    const int m = hops == 0 ? 0 : hops == 1 ? 2 : 6;
    const double base = std::pow(200.0, 5) * b4_norm_eigen(5, 0.001, 0.1);
    EXPECT_NEAR(iid.value, (1 - std::pow(1 + c.c_alpha + c.c_mu, m) / 625) * base,
                1e-9 * base);
    EXPECT_NEAR(non.value, (1 - std::pow(1 + c.c_mu, m) / 625) * base + sigma, 1e-9 * base);
  }
}

TEST(ExpectedBound, ZeroHopIsIndependentOfMixing) {
  const auto a = sbm_expected_bound(1000, 5, 0.01, 0.1, 1.0, 0, 0.0);
  EXPECT_EQ(a.exponent, 0);
  EXPECT_NEAR(a.value, (1 - 1.0 / 625) * std::pow(200.0, 5) * b4_norm_eigen(5, 0.01, 0.1),
              1e-6);
  EXPECT_TRUE(a.valid);
}

TEST(ExpectedBound, MoreHopsShrinkBoundWhileValid) {
  const double n = 1000, alpha = 0.0005, mu = 0.1;
  for (double p : {0.0, 0.5, 1.0}) {
    const auto b0 = sbm_expected_bound(n, 5, alpha, mu, p, 0, 0);
    const auto b1 = sbm_expected_bound(n, 5, alpha, mu, p, 1, 0);
    const auto b2 = sbm_expected_bound(n, 5, alpha, mu, p, 2, 0);
    ASSERT_TRUE(b2.valid);
    EXPECT_GT(b0.value, b1.value);
    EXPECT_GT(b1.value, b2.value);
  }
}

TEST(ExpectedBound, DenseRegimeMarkedInvalid) {
  const auto b = sbm_expected_bound(2000, 5, 0.05, 0.1, 1.0, 2, 0);
  EXPECT_FALSE(b.valid);
  EXPECT_LT(b.value, 0.0);
}

TEST(ExpectedBound, RejectsBadArguments) {
  EXPECT_THROW(sbm_expected_bound(100, 5, 0.1, 0.1, 1.5, 1, 0), ParameterError);
  EXPECT_THROW(sbm_expected_bound(100, 5, 0.1, 0.1, 0.5, 3, 0), ParameterError);
  EXPECT_THROW(sbm_expected_bound(100, 0, 0.1, 0.1, 0.5, 1, 0), ParameterError);
}

TEST(LabelShift, SingleClassClient) {
  EXPECT_NEAR(single_class_label_shift(7), std::sqrt(6.0 / 7.0), 1e-15);
  const auto g = sbm(60, 3, 0.2, 0.1, 4);
  const auto part = partition_nodes(g, 3, 0.0, 1);
  for (double s : label_shift_sigma(g, part)) EXPECT_NEAR(s, single_class_label_shift(3), 1e-12);
}

// Dense scalar oracle: A_k, A1_k, A2_k built from the index sets directly.
std::vector<double> dense_gap(const Graph& g, const Partition& part, int hops) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  const Matrix a = oracle::dense_normalized_adjacency(g);
  Matrix looped = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) looped(i, j) = a(i, j) > 0 ? 1.0 : 0.0;
  const Matrix q = a * a * g.features;
  const Matrix gram = q.transpose() * q;

  auto closure = [&](const std::vector<Eigen::Index>& s) {
    std::set<Eigen::Index> out;
    for (auto i : s)
      for (Eigen::Index j = 0; j < n; ++j)
        if (looped(i, j) > 0) out.insert(j);
    return std::vector<Eigen::Index>(out.begin(), out.end());
  };
  auto block = [&](const Matrix& m, const std::vector<Eigen::Index>& r,
                   const std::vector<Eigen::Index>& c) {
    Matrix out(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(r[i], c[j]);
    return out;
  };
  auto rows = [&](const std::vector<Eigen::Index>& r) {
    Matrix out(static_cast<Eigen::Index>(r.size()), g.features.cols());
    for (std::size_t i = 0; i < r.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = g.features.row(r[i]);
    return out;
  };

  std::vector<double> gaps;
  for (int k = 0; k < part.num_clients; ++k) {
    std::vector<Eigen::Index> vk(part.client_nodes[k].begin(), part.client_nodes[k].end());
    Matrix local = block(looped, vk, vk);
    for (Eigen::Index i = 0; i < local.rows(); ++i) local.row(i) /= local.row(i).sum();
    Matrix qk;
    if (hops == 0) {
      qk = local * local * rows(vk);
    } else if (hops == 1) {
      const auto n1 = closure(vk);
      qk = local * block(a, vk, n1) * rows(n1);
    } else {
      const auto n1 = closure(vk);
      const auto n2 = closure(n1);
      qk = block(a, vk, n1) * block(a, n1, n2) * rows(n2);
    }
    gaps.push_back((part.num_clients * (qk.transpose() * qk) - gram).norm());
  }
  return gaps;
}

TEST(GradientGap, MatchesDenseOracle) {
  const auto g = sbm(40, 3, 0.2, 0.3, 11, 4);
  const auto part = partition_nodes(g, 3, 0.4, 2);
  for (int hops : {0, 1, 2}) {
    const auto got = gradient_gap_generic(g, part, hops);
    const auto want = dense_gap(g, part, hops);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-9 * (1 + want[k]));
  }
}

TEST(GradientGap, SingleClientHasNoGap) {
  const auto g = sbm(50, 2, 0.2, 0.2, 3);
  const auto part = partition_nodes(g, 1, 1.0, 1);
  for (int hops : {0, 1, 2}) EXPECT_NEAR(gradient_gap_generic(g, part, hops)[0], 0.0, 1e-10);
}

TEST(GradientGap, UnscaledFormDropsClientFactor) {
  const auto g = sbm(30, 2, 0.3, 0.2, 5);
  const auto part = partition_nodes(g, 2, 0.5, 1);
  EXPECT_NE(gradient_gap_generic(g, part, 1, GapForm::kWithoutClientFactor)[0],
            gradient_gap_generic(g, part, 1)[0]);
}

TEST(GradientGap, MoreHopsReduceGapOnSbm) {
  int ordered = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = sbm(200, 4, 0.05, 0.2, seed);
    const auto part = partition_nodes(g, 4, 0.5, seed);
    double s[3] = {0, 0, 0};
    for (int h = 0; h < 3; ++h)
      for (double x : gradient_gap_generic(g, part, h)) s[h] += x;
    if (s[0] >= s[1] && s[1] >= s[2]) ++ordered;
  }
  EXPECT_GE(ordered, 9);
}

TEST(CommCost, ZeroHopsIsFree) {
  const auto f = comm_cost_closed_form(1000, 5, 16, 0.05, 0.1, 0.5, 0);
  EXPECT_EQ(f.exact, 0.0);
  EXPECT_EQ(f.approx, 0.0);
  const auto g = sbm(30, 2, 0.2, 0.2, 1);
  EXPECT_EQ(comm_cost_instance(g, partition_nodes(g, 2, 0.5, 1), 0), 0u);
}

TEST(CommCost, NonIidApproximation) {
  const auto c = sbm_constants(1000, 5, 0.001, 0.1);
  const auto f1 = comm_cost_closed_form(1000, 5, 16, 0.001, 0.1, 0.0, 1);
  const auto f2 = comm_cost_closed_form(1000, 5, 16, 0.001, 0.1, 0.0, 2);
  EXPECT_NEAR(f1.approx, (c.c_mu + 2) * 1000 * 16, 1e-9);
  EXPECT_NEAR(f2.approx, 2 * (c.c_mu + 1) * 1000 * 16, 1e-9);
}

TEST(CommCost, ApproximationTracksExactInSparseRegime) {
  for (double p : {0.0, 0.5, 1.0}) {
    for (int hops : {1, 2}) {
      const auto f = comm_cost_closed_form(2000, 5, 16, 0.0005, 0.5, p, hops);
      EXPECT_NEAR(f.approx / f.exact, 1.0, 0.03);
    }
  }
}

TEST(CommCost, PlacementExpectationAgreesAtEndpoints) {
  for (double p : {0.0, 1.0}) {
    for (int hops : {1, 2}) {
      EXPECT_NEAR(comm_cost_placement_exact(2000, 5, 16, 0.01, 0.1, p, hops).exact /
                      comm_cost_closed_form(2000, 5, 16, 0.01, 0.1, p, hops).exact,
                  1.0, 1e-12);
    }
  }
  EXPECT_GT(comm_cost_placement_exact(2000, 5, 16, 0.01, 0.1, 0.5, 2).exact,
            comm_cost_closed_form(2000, 5, 16, 0.01, 0.1, 0.5, 2).exact);
}

TEST(CommCost, InstanceMatchesPlacementExpectation) {
  for (int hops : {1, 2}) {
    double measured = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto g = sbm(1000, 5, 0.01, 0.1, seed, 16);
      measured += static_cast<double>(comm_cost_instance(g, partition_nodes(g, 5, 0.5, seed), hops));
    }
    const double exact = comm_cost_placement_exact(1000, 5, 16, 0.01, 0.1, 0.5, hops).exact;
    EXPECT_NEAR(measured / 3 / exact, 1.0, 0.02) << hops;
  }
}

TEST(CommCost, InstanceMatchesExactExpectation) {
  for (double p : {0.0, 1.0}) {
    for (int hops : {1, 2}) {
      double measured = 0;
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto g = sbm(1000, 5, 0.01, 0.1, seed, 16);
        measured += static_cast<double>(comm_cost_instance(g, partition_nodes(g, 5, p, seed), hops));
      }
      const double exact = comm_cost_closed_form(1000, 5, 16, 0.01, 0.1, p, hops).exact;
      EXPECT_NEAR(measured / 3 / exact, 1.0, 0.05) << p << " " << hops;
    }
  }
}

TEST(NeighborCounts, NoMixingNoIidGivesOwnShare) {
  EXPECT_DOUBLE_EQ(expected_neighbor_counts(1000, 5, 0.05, 0.0, 0.0, 1), 200.0);
  EXPECT_DOUBLE_EQ(expected_neighbor_counts(1000, 5, 0.05, 0.0, 0.0, 2), 200.0);
}

TEST(NeighborCounts, TwoHopIsSquareOfGrowth) {
  const double n0 = expected_neighbor_counts(1000, 5, 0.001, 0.3, 0.4, 0);
  const double n1 = expected_neighbor_counts(1000, 5, 0.001, 0.3, 0.4, 1);
  const double n2 = expected_neighbor_counts(1000, 5, 0.001, 0.3, 0.4, 2);
  EXPECT_NEAR(n2 / n0, (n1 / n0) * (n1 / n0), 1e-12);
}

TEST(NeighborCounts, ClosureSizeMatchesSample) {
  const std::size_t n = 1000;
  for (double p : {0.0, 1.0}) {
    double total = 0;
    int count = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto g = sbm(n, 5, 0.002, 0.3, seed);
      const auto part = partition_nodes(g, 5, p, seed);
      for (int k = 0; k < 5; ++k, ++count) total += static_cast<double>(client_closure(g, part, k).size());
    }
    const double exact = expected_closure_size(n, 5, 0.002, 0.3, p);
    EXPECT_NEAR(total / count / exact, 1.0, 0.05);
    EXPECT_NEAR(expected_neighbor_counts(n, 5, 0.002, 0.3, p, 1) / exact, 1.0, 0.05);
  }
}

TEST(ConvergenceBound, ZeroGapLeavesOptimizationTerm) {
  const auto b = convergence_bound_eval(0.0, 3, 0.1, 0.05, 0.5, 100, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(b.value, b.phi);
  EXPECT_DOUBLE_EQ(b.variance, 0.0);
  EXPECT_TRUE(b.valid);
}

TEST(ConvergenceBound, DoublingRoundsHalvesPhi) {
  const auto a = convergence_bound_eval(1.0, 3, 0.1, 0.1, 0.5, 100, 2.0, 1.0);
  const auto b = convergence_bound_eval(1.0, 3, 0.1, 0.1, 0.5, 200, 2.0, 1.0);
  EXPECT_NEAR(b.phi, a.phi / 2, 1e-15);
  EXPECT_DOUBLE_EQ(a.variance, b.variance);
}

TEST(ConvergenceBound, MonotoneInGap) {
  double last = -1;
  for (double gap : {0.0, 0.5, 1.0, 4.0}) {
    const double v = convergence_bound_eval(gap, 3, 0.1, 0.1, 0.5, 100, 2.0, 1.0).value;
    EXPECT_GT(v, last);
    last = v;
  }
}

TEST(ConvergenceBound, StepSizeConditions) {
  EXPECT_FALSE(convergence_bound_eval(1.0, 3, 0.1, 1.0, 0.5, 100, 2.0, 1.0).valid);
  EXPECT_THROW(convergence_bound_eval(1.0, 0, 0.1, 0.1, 0.5, 100, 2.0, 1.0), ParameterError);
  EXPECT_THROW(convergence_bound_eval(1.0, 3, 0.1, 0.1, 0.5, 0, 2.0, 1.0), ParameterError);
}

}  // namespace
}  // namespace fedgcn
