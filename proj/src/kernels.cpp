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

#include "ssrlda/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace ssrlda::kernels {

namespace {

using Eigen::Index;

constexpr Index kColumnBlock = 32;
constexpr Index kRowBlock = 256;

void require(bool ok, const char* what) {
  if (!ok) throw Error(what);
}

void mirror_upper(Matrix& u) {
  for (Index j = 0; j < u.cols(); ++j)
    for (Index i = j + 1; i < u.rows(); ++i) u(i, j) = u(j, i);
}

}  // namespace

Matrix gram(const Matrix& x) {
  const Index d = x.cols();
  Matrix u(d, d);
  const Index blocks = (d + kColumnBlock - 1) / kColumnBlock;
  // Upper triangle by column block; each block is an independent GEMM.
#pragma omp parallel for schedule(dynamic)
  for (Index b = 0; b < blocks; ++b) {
    const Index j0 = b * kColumnBlock;
    const Index width = std::min(kColumnBlock, d - j0);
    u.block(0, j0, j0 + width, width).noalias() =
        x.leftCols(j0 + width).transpose() * x.middleCols(j0, width);
  }
  mirror_upper(u);
  return u;
}

Vector weighted_column_sum(const Matrix& x, std::span<const double> coeff) {
  require(static_cast<Index>(coeff.size()) == x.rows(),
          "weighted_column_sum: coefficient length must equal row count");
  const Eigen::Map<const Vector> c(coeff.data(), x.rows());
  Vector out(x.cols());
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < x.cols(); ++j) out(j) = x.col(j).dot(c);
  return out;
}

Matrix factored_congruence(const Matrix& x, std::span<const Vector> coeffs,
                           std::span<const double> weights) {
  require(coeffs.size() == weights.size(),
          "factored_congruence: one weight per coefficient vector");
  const Index d = x.cols();
  const Index k = static_cast<Index>(coeffs.size());
  Matrix v(d, k);
  for (Index t = 0; t < k; ++t) {
    require(coeffs[t].size() == x.rows(),
            "factored_congruence: coefficient length must equal row count");
    v.col(t) = weighted_column_sum(
        x, std::span<const double>(coeffs[t].data(), coeffs[t].size()));
  }
  Matrix scaled = v;
  for (Index t = 0; t < k; ++t) scaled.col(t) *= weights[t];
  Matrix out(d, d);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < d; ++j) out.col(j).noalias() = scaled * v.row(j).transpose();
  return out;
}

Matrix tanh_product(const Matrix& x, const Matrix& w) {
  require(x.cols() == w.rows(), "tanh_product: inner dimensions differ");
  const Index n = x.rows();
  Matrix out(n, w.cols());
  const Index blocks = (n + kRowBlock - 1) / kRowBlock;
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < blocks; ++b) {
    const Index r0 = b * kRowBlock;
    const Index rows = std::min(kRowBlock, n - r0);
    out.middleRows(r0, rows).noalias() = x.middleRows(r0, rows) * w;
    out.middleRows(r0, rows) = out.middleRows(r0, rows).array().tanh().matrix();
  }
  return out;
}

Matrix dense_congruence(const Matrix& x, const Matrix& m) {
  require(m.rows() == x.rows() && m.cols() == x.rows(),
          "dense_congruence: M must be n x n for n rows of X");
  const Index d = x.cols();
  Matrix mx(x.rows(), d);
  const Index blocks = (d + kColumnBlock - 1) / kColumnBlock;
#pragma omp parallel for schedule(dynamic)
  for (Index b = 0; b < blocks; ++b) {
    const Index j0 = b * kColumnBlock;
    const Index width = std::min(kColumnBlock, d - j0);
    mx.middleCols(j0, width).noalias() = m * x.middleCols(j0, width);
  }
  Matrix out(d, d);
#pragma omp parallel for schedule(dynamic)
  for (Index b = 0; b < blocks; ++b) {
    const Index j0 = b * kColumnBlock;
    const Index width = std::min(kColumnBlock, d - j0);
    out.middleCols(j0, width).noalias() = x.transpose() * mx.middleCols(j0, width);
  }
  return out;
}

namespace serial {

Matrix gram(const Matrix& x) {
  const Index d = x.cols();
  Matrix u = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i; j < d; ++j) {
      double s = 0.0;
      for (Index r = 0; r < x.rows(); ++r) s += x(r, i) * x(r, j);
      u(i, j) = s;
      u(j, i) = s;
    }
  }
  return u;
}

Vector weighted_column_sum(const Matrix& x, std::span<const double> coeff) {
  require(static_cast<Index>(coeff.size()) == x.rows(),
          "weighted_column_sum: coefficient length must equal row count");
  Vector out = Vector::Zero(x.cols());
  for (Index j = 0; j < x.cols(); ++j)
    for (Index r = 0; r < x.rows(); ++r) out(j) += x(r, j) * coeff[r];
  return out;
}

Matrix dense_congruence(const Matrix& x, const Matrix& m) {
  require(m.rows() == x.rows() && m.cols() == x.rows(),
          "dense_congruence: M must be n x n for n rows of X");
  const Index n = x.rows();
  const Index d = x.cols();
  Matrix mx = Matrix::Zero(n, d);
  for (Index r = 0; r < n; ++r)
    for (Index s = 0; s < n; ++s) {
      const double coef = m(r, s);
      if (coef == 0.0) continue;
      for (Index j = 0; j < d; ++j) mx(r, j) += coef * x(s, j);
    }
  Matrix out = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      for (Index r = 0; r < n; ++r) out(i, j) += x(r, i) * mx(r, j);
  return out;
}

Matrix tanh_product(const Matrix& x, const Matrix& w) {
  require(x.cols() == w.rows(), "tanh_product: inner dimensions differ");
  Matrix out(x.rows(), w.cols());
  for (Index r = 0; r < x.rows(); ++r)
    for (Index j = 0; j < w.cols(); ++j) {
      double s = 0.0;
      for (Index k = 0; k < x.cols(); ++k) s += x(r, k) * w(k, j);
      out(r, j) = std::tanh(s);
    }
  return out;
}

}  // namespace serial
}  // namespace ssrlda::kernels
