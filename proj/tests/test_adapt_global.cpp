// Copyright 2026 The ssrlda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "ssrlda/adapt_global.hpp"
#include "ssrlda/classify.hpp"
#include "ssrlda/mmd.hpp"
#include "ssrlda/synthetic.hpp"

using namespace ssrlda;

namespace {

GlobalAdaptProblem problem(int ns, int nt, int d, int classes, std::uint64_t seed, double p, double lambda,
                           double beta) {
  GlobalAdaptProblem pr;
  pr.x = oracle::random_matrix(ns + nt, d, seed);
  pr.source_labels = oracle::random_labels(ns, classes, seed + 1);
  pr.target_pseudo_labels = oracle::random_labels(nt, classes, seed + 2);
  pr.noise.p = p;
  pr.lambda = lambda;
  pr.beta = beta;
  pr.class_count = classes;
  return pr;
}

}  // namespace

TEST_CASE("no alignment weight reduces to the plain denoiser") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pr = problem(7, 6, 5, 2, seed, 0.4, 0.5, 0.0);
    const Matrix a = solve_mda_ad(pr).weights.w;
    const Matrix b = solve_mda(pr.x, pr.noise, pr.lambda).w;
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
  }
  auto pr = problem(8, 6, 4, 2, 3, 0.0, 0.0, 0.0);
  CHECK((solve_mda_ad(pr).weights.w - Matrix::Identity(4, 4)).norm() <= 1e-8);
}

TEST_CASE("stationarity and finite differences of the aligned objective") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pr = problem(5, 5, 4, 2, seed * 7, 0.3, 0.8, 2.5);
    const GlobalSolution sol = solve_mda_ad(pr);
    CHECK(sol.weights.residual <= 1e-8);

    const Matrix mmd = oracle::all_class_mmd(pr.source_labels, pr.target_pseudo_labels, 2);
    const auto m = oracle::moments(pr.x, 0.3, &mmd);
    CHECK(oracle::analytic_gradient(m, 0.8, 2.5, sol.weights.w).norm() <= 1e-8 * m.p.norm());

    const Matrix probe = oracle::random_matrix(4, 4, seed + 40);
    const Matrix fd = oracle::finite_difference(pr.x, 0.3, 0.8, probe, 2.5, &m.q2);
    CHECK(oracle::rel_fro(fd, oracle::analytic_gradient(m, 0.8, 2.5, probe)) <= 1e-4);
    CHECK(oracle::finite_difference(pr.x, 0.3, 0.8, sol.weights.w, 2.5, &m.q2).norm() <= 1e-4 * m.p.norm());
  }
}

TEST_CASE("alignment term is positive semidefinite") {
  const auto pr = problem(12, 9, 6, 3, 5, 0.5, 1.0, 1.0);
  const auto mmd = build_adaptation_mmd(pr.source_labels, pr.target_pseudo_labels, 3);
  const auto s = expected_stats(pr.x, pr.noise, &mmd.total);
  REQUIRE(s.q2);
  CHECK((*s.q2 - s.q2->transpose()).norm() <= 1e-14 * (1 + s.q2->norm()));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Vector v = oracle::random_matrix(6, 1, seed).col(0);
    CHECK(v.dot(*s.q2 * v) >= -1e-10);
  }
  const Matrix dense = oracle::all_class_mmd(pr.source_labels, pr.target_pseudo_labels, 3);
  CHECK((mmd.total.dense() - dense).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("permuting within each domain leaves the solution unchanged") {
  auto pr = problem(9, 8, 5, 2, 11, 0.5, 1.0, 3.0);
  const Matrix w = solve_mda_ad(pr).weights.w;
  auto shuffled = pr;
  std::mt19937 rng(5);
  auto permute_block = [&](int begin, std::vector<int>& labels) {
    const int n = static_cast<int>(labels.size());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto old_labels = labels;
    for (int i = 0; i < n; ++i) {
      shuffled.x.row(begin + i) = pr.x.row(begin + perm[static_cast<std::size_t>(i)]);
      labels[static_cast<std::size_t>(i)] = old_labels[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    }
  };
  permute_block(0, shuffled.source_labels);
  permute_block(9, shuffled.target_pseudo_labels);
  CHECK((solve_mda_ad(shuffled).weights.w - w).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("residual stays small across alignment weights") {
  const auto base = problem(10, 10, 6, 2, 2, 0.5, 1e-3, 0.0);
  for (double beta : {0.0, 0.1, 10.0, 1e3, 1e6}) {
    auto pr = base;
    pr.beta = beta;
    CHECK(solve_mda_ad(pr).weights.residual <= 1e-8);
  }
}

TEST_CASE("classes missing from one domain are skipped") {
  GlobalAdaptProblem pr = problem(4, 4, 3, 2, 1, 0.5, 1.0, 1.0);
  pr.source_labels = {0, 1, 0, 1};
  pr.target_pseudo_labels = {0, 0, 0, 0};
  auto sol = solve_mda_ad(pr);
  CHECK(sol.skipped_classes == std::vector<int>{1});
  CHECK(sol.warnings.empty());

  pr.source_labels = {0, 0, 0, 0};
  pr.target_pseudo_labels = {1, 1, 1, 1};
  sol = solve_mda_ad(pr);
  CHECK(sol.skipped_classes == std::vector<int>{0, 1});
  CHECK_FALSE(sol.warnings.empty());
  // marginal term only
  const MmdMatrix m0 = build_marginal_mmd(4, 4);
  const auto s = expected_stats(pr.x, pr.noise, &m0);
  const Matrix a = s.q + pr.lambda * Matrix::Identity(3, 3) + pr.beta * *s.q2;
  CHECK((a * sol.weights.w - s.p_cross).norm() <= 1e-10 * s.p_cross.norm());
}

TEST_CASE("problem validation") {
  auto pr = problem(4, 4, 3, 2, 1, 0.5, 1.0, 1.0);
  pr.target_pseudo_labels = {0, 2, 0, 1};
  CHECK_THROWS_AS(solve_mda_ad(pr), Error);
  pr = problem(4, 4, 3, 2, 1, 0.5, -1.0, 1.0);
  CHECK_THROWS_AS(solve_mda_ad(pr), Error);
  pr = problem(4, 4, 3, 2, 1, 0.5, 1.0, -1.0);
  CHECK_THROWS_AS(solve_mda_ad(pr), Error);
  pr = problem(4, 4, 3, 2, 1, 0.5, 1.0, 1.0);
  pr.source_labels.pop_back();
  CHECK_THROWS_AS(solve_mda_ad(pr), Error);
}

TEST_CASE("global encoding") {
  const Matrix x = oracle::random_matrix(5, 3, 1);
  CHECK(encode_global(x, LayerWeights{Matrix::Zero(3, 3), 0.0}).isZero());
  CHECK(encode_global(Matrix::Zero(5, 3), LayerWeights{Matrix::Identity(3, 3), 0.0}).isZero());
}

TEST_CASE("alignment lowers the encoded domain discrepancy") {
  ShiftedGaussianSpec spec;  // seed 1
  const DomainPair pair = make_shifted_gaussian_pair(spec);
  const LinearModel svm = train_linear(pair.source.values, *pair.source.labels);

  GlobalAdaptProblem pr;
  pr.x = pair.stacked();
  pr.source_labels = *pair.source.labels;
  pr.target_pseudo_labels = predict(svm, pair.target.values);
  pr.noise.p = 0.3;
  pr.lambda = 10.0;
  pr.class_count = 2;
  const auto ns = static_cast<Eigen::Index>(pair.source_count());
  auto discrepancy = [&](double beta) {
    pr.beta = beta;
    const Matrix h = encode_global(pr.x, solve_mda_ad(pr).weights);
    return mmd_squared_linear(h.topRows(ns), h.bottomRows(h.rows() - ns));
  };
  const double plain = discrepancy(0.0);
  const double aligned = discrepancy(10.0);
  MESSAGE("encoded MMD beta=0: " << plain << "  beta=10: " << aligned);
  CHECK(aligned <= plain);
}
