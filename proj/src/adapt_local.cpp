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

#include "ssrlda/adapt_local.hpp"

#include <exception>
#include <string>

namespace ssrlda {

std::vector<std::size_t> ClassPartition::uncovered_rows() const {
  std::vector<bool> covered(total_rows, false);
  for (const auto& s : subsets)
    for (std::size_t r : s.origin_index) covered[r] = true;
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < total_rows; ++r)
    if (!covered[r]) out.push_back(r);
  return out;
}

ClassPartition partition_by_class(const Matrix& x, std::span<const int> source_labels,
                                  std::span<const int> target_labels, int class_count) {
  if (class_count < 1) throw Error("class_count must be at least 1");
  const std::size_t ns = source_labels.size();
  const std::size_t n = ns + target_labels.size();
  if (static_cast<std::size_t>(x.rows()) != n)
    throw Error("partition_by_class: " + std::to_string(x.rows()) + " rows for " +
                std::to_string(n) + " labels");

  std::vector<std::vector<std::size_t>> src(static_cast<std::size_t>(class_count));
  std::vector<std::vector<std::size_t>> tgt(static_cast<std::size_t>(class_count));
  for (std::size_t i = 0; i < ns; ++i) {
    const int y = source_labels[i];
    if (y < 0 || y >= class_count) throw Error("partition_by_class: source label out of range");
    src[static_cast<std::size_t>(y)].push_back(i);
  }
  for (std::size_t j = 0; j < target_labels.size(); ++j) {
    const int y = target_labels[j];
    if (y < 0 || y >= class_count) throw Error("partition_by_class: target label out of range");
    tgt[static_cast<std::size_t>(y)].push_back(ns + j);
  }

  ClassPartition part;
  part.total_rows = n;
  part.feature_dim = static_cast<std::size_t>(x.cols());
  for (int c = 0; c < class_count; ++c) {
    const auto& s = src[static_cast<std::size_t>(c)];
    const auto& t = tgt[static_cast<std::size_t>(c)];
    if (s.empty() || t.empty()) {
      part.skipped_classes.push_back(c);
      continue;
    }
    ClassSubset sub;
    sub.label = c;
    sub.source_rows = s.size();
    sub.origin_index = s;
    sub.origin_index.insert(sub.origin_index.end(), t.begin(), t.end());
    sub.x.resize(static_cast<Eigen::Index>(sub.origin_index.size()), x.cols());
    for (std::size_t r = 0; r < sub.origin_index.size(); ++r)
      sub.x.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(sub.origin_index[r]));
    part.subsets.push_back(std::move(sub));
  }
  if (part.subsets.empty())
    throw Error("partition_by_class: every class is missing from one of the domains");
  return part;
}

LayerWeights solve_class_subset(const ClassSubset& subset, const NoiseSpec& noise, double lambda,
                                double beta, bool append_bias) {
  if (!(lambda >= 0.0)) throw Error("lambda must be non-negative");
  if (!(beta >= 0.0)) throw Error("beta must be non-negative");
  const MmdMatrix m0 = build_marginal_mmd(subset.source_rows, subset.target_rows());
  const ExpectationStats s = expected_stats(subset.x, noise, &m0, append_bias);
  Matrix a = s.q;
  a.diagonal().array() += lambda;
  a += beta * *s.q2;
  try {
    return solve_spd(a, s.p_cross);
  } catch (const SingularSystemError& e) {
    throw SingularSystemError("class " + std::to_string(subset.label) + ": " + e.what());
  }
}

LocalWeights solve_mmda(const ClassPartition& partition, const NoiseSpec& noise, double lambda,
                        double beta, bool append_bias) {
  noise.validate();
  const std::size_t k = partition.subsets.size();
  std::vector<LayerWeights> solved(k);
  std::vector<std::exception_ptr> failures(k);
  // Classes do not couple in the objective; solve them independently.
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < k; ++i) {
    try {
      solved[i] = solve_class_subset(partition.subsets[i], noise, lambda, beta, append_bias);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  LocalWeights out;
  for (std::size_t i = 0; i < k; ++i)
    out.per_class.emplace(partition.subsets[i].label, std::move(solved[i]));
  return out;
}

LocalEncoding encode_local(const ClassPartition& partition, const LocalWeights& weights,
                           std::size_t total_rows, bool append_bias) {
  Eigen::Index width = -1;
  for (const auto& [c, w] : weights.per_class) {
    if (width >= 0 && w.w.cols() != width) throw Error("encode_local: inconsistent weight widths");
    width = w.w.cols();
  }
  if (width < 0) throw Error("encode_local: no class weights");

  LocalEncoding out;
  out.values = Matrix::Zero(static_cast<Eigen::Index>(total_rows), width);
  std::vector<bool> covered(total_rows, false);
  for (const auto& sub : partition.subsets) {
    const auto it = weights.per_class.find(sub.label);
    if (it == weights.per_class.end())
      throw Error("encode_local: no weights for class " + std::to_string(sub.label));
    const Matrix enc = encode(sub.x, it->second, append_bias);
    for (std::size_t r = 0; r < sub.origin_index.size(); ++r) {
      const std::size_t dst = sub.origin_index[r];
      if (dst >= total_rows)
        throw Error("encode_local: origin index " + std::to_string(dst) + " out of range");
      out.values.row(static_cast<Eigen::Index>(dst)) = enc.row(static_cast<Eigen::Index>(r));
      covered[dst] = true;
    }
  }
  for (std::size_t r = 0; r < total_rows; ++r)
    if (!covered[r]) out.zero_rows.push_back(r);
  return out;
}

}  // namespace ssrlda
