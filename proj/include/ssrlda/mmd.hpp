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

#include <iosfwd>
#include <span>
#include <vector>

#include "ssrlda/types.hpp"

namespace ssrlda {

// One weighted rank-one piece w * c c^T of an MMD coefficient matrix.
struct MmdTerm {
  double weight = 1.0;
  Vector coeff;
};

// The (n_s + n_t)^2 coefficient matrix of a linear-kernel MMD, with instances
// ordered source rows first. Each marginal or conditional matrix is the outer
// product of a signed mean-coefficient vector (1/n_s on source rows,
// -1/n_t on target rows), so the matrix is kept as a sum of such terms and
// materialised only on request.
class MmdMatrix {
 public:
  static constexpr int kAggregate = -1;

  MmdMatrix() = default;
  MmdMatrix(std::size_t size, int class_index, std::vector<MmdTerm> terms, bool skipped = false);

  static MmdMatrix zero(std::size_t size, int class_index = kAggregate, bool skipped = false);

  std::size_t size() const { return size_; }
  // 0 for the marginal matrix, c >= 1 for class c - 1, kAggregate for sums.
  int class_index() const { return class_index_; }
  // Conditional matrix of a class missing from one domain; all zero.
  bool skipped() const { return skipped_; }
  const std::vector<MmdTerm>& terms() const { return terms_; }

  double operator()(std::size_t i, std::size_t j) const;
  Matrix dense() const;
  MmdMatrix scaled(double factor) const;

  // X^T M X.
  Matrix congruence(const Matrix& x) const;
  // x^T M x for a vector over instances.
  double quadratic_form(const Vector& x) const;

 private:
  std::size_t size_ = 0;
  int class_index_ = kAggregate;
  std::vector<MmdTerm> terms_;
  bool skipped_ = false;
};

MmdMatrix build_marginal_mmd(std::size_t n_source, std::size_t n_target);

// Class c in [0, class_count). A class present in only one domain yields a
// skipped zero matrix; absent from both is an error.
MmdMatrix build_conditional_mmd(std::span<const int> source_labels,
                                std::span<const int> target_labels, int c, int class_count);

MmdMatrix sum_mmd_matrices(std::span<const MmdMatrix> matrices);

// Squared distance between the row means of a and b.
double mmd_squared_linear(const Matrix& a, const Matrix& b);

// Debug dump of the dense coefficients.
void write_mmd_csv(std::ostream& out, const MmdMatrix& m);

}  // namespace ssrlda
