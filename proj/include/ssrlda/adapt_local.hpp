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

#pragma once

// Per-class local autoencoders: instances are grouped by (pseudo-)label and
// each class subset gets its own marginalized denoiser with a within-class
// source/target MMD penalty.

#include <map>
#include <vector>

#include "ssrlda/denoiser.hpp"

namespace ssrlda {

struct ClassSubset {
  int label = 0;
  Matrix x;                 // [X_S^(c); X_T^(c)]
  std::size_t source_rows = 0;
  // Row r of x came from row origin_index[r] of the stacked [X_S; X_T].
  std::vector<std::size_t> origin_index;

  std::size_t target_rows() const { return origin_index.size() - source_rows; }
};

struct ClassPartition {
  std::vector<ClassSubset> subsets;  // ascending label, skipped classes omitted
  std::vector<int> skipped_classes;  // empty on at least one side
  std::size_t total_rows = 0;
  std::size_t feature_dim = 0;

  // Original rows not covered by any subset (members of skipped classes).
  std::vector<std::size_t> uncovered_rows() const;
};

// Throws if every class is skipped.
ClassPartition partition_by_class(const Matrix& x, std::span<const int> source_labels,
                                  std::span<const int> target_labels, int class_count);

struct LocalWeights {
  std::map<int, LayerWeights> per_class;
};

// One class: (E[Q^(c)] + lambda I + beta E[Q2^(c)]) W^(c) = E[P^(c)] with the
// subset's own marginal MMD matrix.
LayerWeights solve_class_subset(const ClassSubset& subset, const NoiseSpec& noise, double lambda,
                                double beta, bool append_bias = false);

LocalWeights solve_mmda(const ClassPartition& partition, const NoiseSpec& noise, double lambda,
                        double beta, bool append_bias = false);

struct LocalEncoding {
  Matrix values;  // total_rows x d_out in original instance order
  std::vector<std::size_t> zero_rows;  // rows of skipped classes
};

LocalEncoding encode_local(const ClassPartition& partition, const LocalWeights& weights,
                           std::size_t total_rows, bool append_bias = false);

}  // namespace ssrlda
