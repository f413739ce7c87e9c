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

#include "ssrlda/mmd.hpp"

#include <ostream>
#include <string>

#include "ssrlda/dataio.hpp"
#include "ssrlda/kernels.hpp"

namespace ssrlda {

MmdMatrix::MmdMatrix(std::size_t size, int class_index, std::vector<MmdTerm> terms, bool skipped)
    : size_(size), class_index_(class_index), terms_(std::move(terms)), skipped_(skipped) {
  for (const auto& t : terms_)
    if (static_cast<std::size_t>(t.coeff.size()) != size_)
      throw Error("MmdMatrix: term length " + std::to_string(t.coeff.size()) + " != size " +
                  std::to_string(size_));
}

MmdMatrix MmdMatrix::zero(std::size_t size, int class_index, bool skipped) {
  return MmdMatrix(size, class_index, {}, skipped);
}

double MmdMatrix::operator()(std::size_t i, std::size_t j) const {
  double v = 0.0;
  for (const auto& t : terms_)
    v += t.weight * t.coeff(static_cast<Eigen::Index>(i)) * t.coeff(static_cast<Eigen::Index>(j));
  return v;
}

Matrix MmdMatrix::dense() const {
  const auto n = static_cast<Eigen::Index>(size_);
  Matrix m = Matrix::Zero(n, n);
  for (const auto& t : terms_) m.noalias() += t.weight * t.coeff * t.coeff.transpose();
  return m;
}

MmdMatrix MmdMatrix::scaled(double factor) const {
  auto terms = terms_;
  for (auto& t : terms) t.weight *= factor;
  return MmdMatrix(size_, class_index_, std::move(terms), skipped_);
}

Matrix MmdMatrix::congruence(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != size_)
    throw Error("MmdMatrix::congruence: X has " + std::to_string(x.rows()) + " rows, matrix is " +
                std::to_string(size_));
  std::vector<Vector> coeffs;
  std::vector<double> weights;
  for (const auto& t : terms_) {
    coeffs.push_back(t.coeff);
    weights.push_back(t.weight);
  }
  return kernels::factored_congruence(x, coeffs, weights);
}

double MmdMatrix::quadratic_form(const Vector& x) const {
  double v = 0.0;
  for (const auto& t : terms_) {
    const double s = t.coeff.dot(x);
    v += t.weight * s * s;
  }
  return v;
}

MmdMatrix build_marginal_mmd(std::size_t n_source, std::size_t n_target) {
  if (n_source == 0 || n_target == 0)
    throw Error("build_marginal_mmd: both domains need at least one instance");
  const std::size_t n = n_source + n_target;
  Vector c(static_cast<Eigen::Index>(n));
  c.head(static_cast<Eigen::Index>(n_source)).setConstant(1.0 / static_cast<double>(n_source));
  c.tail(static_cast<Eigen::Index>(n_target)).setConstant(-1.0 / static_cast<double>(n_target));
  return MmdMatrix(n, 0, {MmdTerm{1.0, std::move(c)}});
}

MmdMatrix build_conditional_mmd(std::span<const int> source_labels,
                                std::span<const int> target_labels, int c, int class_count) {
  if (c < 0 || c >= class_count)
    throw Error("build_conditional_mmd: class " + std::to_string(c) + " outside [0, " +
                std::to_string(class_count) + ")");
  std::size_t ns = 0;
  std::size_t nt = 0;
  for (int y : source_labels) {
    if (y < 0 || y >= class_count) throw Error("build_conditional_mmd: source label out of range");
    ns += (y == c);
  }
  for (int y : target_labels) {
    if (y < 0 || y >= class_count) throw Error("build_conditional_mmd: target label out of range");
    nt += (y == c);
  }
  const std::size_t n = source_labels.size() + target_labels.size();
  if (ns == 0 && nt == 0)
    throw Error("build_conditional_mmd: class " + std::to_string(c) + " is empty in both domains");
  if (ns == 0 || nt == 0) return MmdMatrix::zero(n, c + 1, true);

  Vector coeff = Vector::Zero(static_cast<Eigen::Index>(n));
  const double ws = 1.0 / static_cast<double>(ns);
  const double wt = -1.0 / static_cast<double>(nt);
  for (std::size_t i = 0; i < source_labels.size(); ++i)
    if (source_labels[i] == c) coeff(static_cast<Eigen::Index>(i)) = ws;
  for (std::size_t j = 0; j < target_labels.size(); ++j)
    if (target_labels[j] == c) coeff(static_cast<Eigen::Index>(source_labels.size() + j)) = wt;
  return MmdMatrix(n, c + 1, {MmdTerm{1.0, std::move(coeff)}});
}

MmdMatrix sum_mmd_matrices(std::span<const MmdMatrix> matrices) {
  if (matrices.empty()) throw Error("sum_mmd_matrices: nothing to sum");
  const std::size_t n = matrices.front().size();
  std::vector<MmdTerm> terms;
  for (const auto& m : matrices) {
    if (m.size() != n)
      throw Error("sum_mmd_matrices: size " + std::to_string(m.size()) + " != " + std::to_string(n));
    terms.insert(terms.end(), m.terms().begin(), m.terms().end());
  }
  return MmdMatrix(n, MmdMatrix::kAggregate, std::move(terms));
}

double mmd_squared_linear(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0 || b.rows() == 0) throw Error("mmd_squared_linear: empty input");
  if (a.cols() != b.cols()) throw Error("mmd_squared_linear: feature dimensions differ");
  const Vector diff = a.colwise().mean().transpose() - b.colwise().mean().transpose();
  return diff.squaredNorm();
}

void write_mmd_csv(std::ostream& out, const MmdMatrix& m) {
  const Matrix d = m.dense();
  std::vector<std::string> row;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < d.cols(); ++j) row.push_back(format_real(d(i, j)));
    write_csv_row(out, row);
  }
}

}  // namespace ssrlda
