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

// L2-regularized hinge-loss linear SVM trained by dual coordinate descent,
// one-vs-rest for more than two classes.

#include <cstdint>
#include <iosfwd>

#include "ssrlda/types.hpp"

namespace ssrlda {

struct SvmOptions {
  double c = 1.0;  // hinge-loss weight; larger means weaker regularization
  int max_iter = 1000;  // epochs
  double tol = 1e-4;   // relative objective decrease over one epoch
  std::uint64_t seed = 0;
};

struct LinearModel {
  int class_count = 0;
  // One row per class, or a single row for binary problems whose score is
  // the class-1 margin.
  Matrix weights;
  Vector intercepts;
  double loss = 0.0;  // summed regularized hinge objective
  int iterations = 0;  // max epochs over the sub-problems
  bool converged = true;

  std::size_t feature_dim() const { return static_cast<std::size_t>(weights.cols()); }
  // n x class_count score matrix.
  Matrix scores(const Matrix& x) const;
};

// class_count 0 infers max(label) + 1.
LinearModel train_linear(const Matrix& x, std::span<const int> y, const SvmOptions& options = {},
                         int class_count = 0);

// Argmax of the class scores, lowest class on ties.
Labels predict(const LinearModel& model, const Matrix& x);

double accuracy(std::span<const int> predicted, std::span<const int> truth);

// One line per weight row: intercept then weights.
void write_model(std::ostream& out, const LinearModel& model);
LinearModel read_model(std::istream& in);

}  // namespace ssrlda
