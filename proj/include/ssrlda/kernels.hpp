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

// Data-parallel building blocks shared by the solvers. Every OpenMP kernel
// has a plain serial counterpart in `serial::` used by the tests and the
// benchmark; the two must agree to rounding.

#include <span>

#include "ssrlda/types.hpp"

namespace ssrlda::kernels {

// X^T X.
Matrix gram(const Matrix& x);

// X^T c for a per-row coefficient vector c.
Vector weighted_column_sum(const Matrix& x, std::span<const double> coeff);

// sum_k w_k (X^T c_k)(X^T c_k)^T, i.e. X^T M X for M = sum_k w_k c_k c_k^T.
Matrix factored_congruence(const Matrix& x, std::span<const Vector> coeffs,
                           std::span<const double> weights);

// tanh(X W), row-parallel.
Matrix tanh_product(const Matrix& x, const Matrix& w);

// X^T M X for an explicit dense n x n matrix M.
Matrix dense_congruence(const Matrix& x, const Matrix& m);

namespace serial {

Matrix gram(const Matrix& x);
Vector weighted_column_sum(const Matrix& x, std::span<const double> coeff);
Matrix dense_congruence(const Matrix& x, const Matrix& m);
Matrix tanh_product(const Matrix& x, const Matrix& w);

}  // namespace serial
}  // namespace ssrlda::kernels
