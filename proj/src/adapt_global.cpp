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

#include "ssrlda/adapt_global.hpp"

namespace ssrlda {

void GlobalAdaptProblem::validate() const {
  noise.validate();
  if (!(lambda >= 0.0)) throw Error("lambda must be non-negative");
  if (!(beta >= 0.0)) throw Error("beta must be non-negative");
  if (class_count < 1) throw Error("class_count must be at least 1");
  if (source_labels.empty() || target_pseudo_labels.empty())
    throw Error("both domains need at least one instance");
  if (static_cast<std::size_t>(x.rows()) != source_count() + target_count())
    throw Error("row count " + std::to_string(x.rows()) + " != n_s + n_t = " +
                std::to_string(source_count() + target_count()));
  for (int y : source_labels)
    if (y < 0 || y >= class_count) throw Error("source label out of range");
  for (int y : target_pseudo_labels)
    if (y < 0 || y >= class_count) throw Error("target pseudo-label out of range");
}

AdaptationMmd build_adaptation_mmd(std::span<const int> source_labels,
                                   std::span<const int> target_labels, int class_count) {
  if (class_count < 1) throw Error("class_count must be at least 1");
  for (std::span<const int> labels : {source_labels, target_labels})
    for (int y : labels)
      if (y < 0 || y >= class_count) throw Error("build_adaptation_mmd: label out of range");
  std::vector<MmdMatrix> parts;
  parts.push_back(build_marginal_mmd(source_labels.size(), target_labels.size()));
  AdaptationMmd out;
  std::vector<MmdMatrix> conditional(static_cast<std::size_t>(class_count));
  // Each M_c touches only its own class; the builds are independent.
#pragma omp parallel for schedule(static)
  for (int c = 0; c < class_count; ++c) {
    std::size_t ns = 0;
    std::size_t nt = 0;
    for (int y : source_labels) ns += (y == c);
    for (int y : target_labels) nt += (y == c);
    conditional[static_cast<std::size_t>(c)] =
        (ns == 0 && nt == 0)
            ? MmdMatrix::zero(source_labels.size() + target_labels.size(), c + 1, true)
            : build_conditional_mmd(source_labels, target_labels, c, class_count);
  }
  for (int c = 0; c < class_count; ++c) {
    auto& m = conditional[static_cast<std::size_t>(c)];
    if (m.skipped())
      out.skipped_classes.push_back(c);
    else
      parts.push_back(std::move(m));
  }
  out.total = sum_mmd_matrices(parts);
  return out;
}

GlobalSolution solve_mda_ad(const GlobalAdaptProblem& problem) {
  problem.validate();
  GlobalSolution sol;
  AdaptationMmd mmd =
      build_adaptation_mmd(problem.source_labels, problem.target_pseudo_labels, problem.class_count);
  sol.skipped_classes = mmd.skipped_classes;
  if (!mmd.skipped_classes.empty() &&
      mmd.skipped_classes.size() == static_cast<std::size_t>(problem.class_count))
    sol.warnings.emplace_back("all conditional MMD terms skipped; using the marginal term only");

  const ExpectationStats s = expected_stats(problem.x, problem.noise, &mmd.total, problem.append_bias);
  Matrix a = s.q;
  a.diagonal().array() += problem.lambda;
  a += problem.beta * *s.q2;
  sol.weights = solve_spd(a, s.p_cross);
  return sol;
}

Matrix encode_global(const Matrix& x, const LayerWeights& w, bool append_bias) {
  return encode(x, w, append_bias);
}

}  // namespace ssrlda
