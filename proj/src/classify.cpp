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

#include "ssrlda/classify.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ssrlda/dataio.hpp"

namespace ssrlda {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct BinaryFit {
  Vector w;  // feature weights followed by the bias weight
  double objective = 0.0;
  int epochs = 0;
  bool converged = false;
};

double primal_objective(const RowMatrix& xb, const std::vector<double>& sign, const Vector& w, double c) {
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < xb.rows(); ++i)
    hinge += std::max(0.0, 1.0 - sign[static_cast<std::size_t>(i)] * xb.row(i).dot(w));
  return 0.5 * w.squaredNorm() + c * hinge;
}

// Dual coordinate descent for
//   min_w 0.5 |w|^2 + C sum_i max(0, 1 - y_i w.x_i)
// with x augmented by a constant 1 so the bias is part of w.
BinaryFit fit_binary(const RowMatrix& xb, const std::vector<double>& sign, const SvmOptions& opt,
                     std::uint64_t seed) {
  const Eigen::Index n = xb.rows();
  BinaryFit fit;
  fit.w = Vector::Zero(xb.cols());
  std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
  std::vector<double> qii(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) qii[static_cast<std::size_t>(i)] = xb.row(i).squaredNorm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);

  double previous = primal_objective(xb, sign, fit.w, opt.c);
  for (int epoch = 1; epoch <= opt.max_iter; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index i : order) {
      const auto k = static_cast<std::size_t>(i);
      if (qii[k] <= 0.0) continue;
      const double g = sign[k] * xb.row(i).dot(fit.w) - 1.0;
      double pg = g;
      if (alpha[k] == 0.0)
        pg = std::min(g, 0.0);
      else if (alpha[k] == opt.c)
        pg = std::max(g, 0.0);
      if (pg == 0.0) continue;
      const double old = alpha[k];
      alpha[k] = std::clamp(old - g / qii[k], 0.0, opt.c);
      fit.w.noalias() += ((alpha[k] - old) * sign[k]) * xb.row(i).transpose();
    }
    const double current = primal_objective(xb, sign, fit.w, opt.c);
    fit.epochs = epoch;
    fit.objective = current;
    if (std::abs(previous - current) <= opt.tol * std::max(std::abs(previous), 1e-12)) {
      fit.converged = true;
      break;
    }
    previous = current;
  }
  return fit;
}

}  // namespace

Matrix LinearModel::scores(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != feature_dim())
    throw Error("model expects " + std::to_string(feature_dim()) + " features, got " +
                std::to_string(x.cols()));
  Matrix raw = x * weights.transpose();
  raw.rowwise() += intercepts.transpose();
  if (weights.rows() == 1 && class_count == 2) {
    Matrix two(x.rows(), 2);
    two.col(0) = -raw.col(0);
    two.col(1) = raw.col(0);
    return two;
  }
  return raw;
}

LinearModel train_linear(const Matrix& x, std::span<const int> y, const SvmOptions& options,
                         int class_count) {
  if (static_cast<std::size_t>(x.rows()) != y.size())
    throw Error("train_linear: " + std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) +
                " labels");
  if (!(options.c > 0.0)) throw Error("train_linear: C must be positive");
  if (options.max_iter < 1) throw Error("train_linear: max_iter must be positive");
  if (!x.allFinite()) throw Error("train_linear: non-finite feature value");
  const std::set<int> present(y.begin(), y.end());
  if (present.size() < 2) throw Error("train_linear: need at least two classes");
  if (*present.begin() < 0) throw Error("train_linear: negative label");
  const int k = class_count > 0 ? class_count : *present.rbegin() + 1;
  if (*present.rbegin() >= k) throw Error("train_linear: label exceeds class_count");

  RowMatrix xb(x.rows(), x.cols() + 1);
  xb.leftCols(x.cols()) = x;
  xb.col(x.cols()).setOnes();

  const int rows = k == 2 ? 1 : k;
  std::vector<BinaryFit> fits(static_cast<std::size_t>(rows));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < rows; ++r) {
    const int positive = k == 2 ? 1 : r;
    std::vector<double> sign(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) sign[i] = y[i] == positive ? 1.0 : -1.0;
    fits[static_cast<std::size_t>(r)] =
        fit_binary(xb, sign, options, options.seed + static_cast<std::uint64_t>(r) * 0x9e3779b97f4a7c15ULL);
  }

  LinearModel model;
  model.class_count = k;
  model.weights.resize(rows, x.cols());
  model.intercepts.resize(rows);
  model.iterations = 0;
  model.converged = true;
  for (int r = 0; r < rows; ++r) {
    const auto& f = fits[static_cast<std::size_t>(r)];
    model.weights.row(r) = f.w.head(x.cols()).transpose();
    model.intercepts(r) = f.w(x.cols());
    model.loss += f.objective;
    model.iterations = std::max(model.iterations, f.epochs);
    model.converged = model.converged && f.converged;
  }
  return model;
}

Labels predict(const LinearModel& model, const Matrix& x) {
  const Matrix s = model.scores(x);
  Labels out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < s.cols(); ++c)
      if (s(i, c) > s(i, best)) best = c;
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw Error("accuracy: length mismatch");
  if (predicted.empty()) throw Error("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += (predicted[i] == truth[i]);
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

void write_model(std::ostream& out, const LinearModel& model) {
  out << "# classes " << model.class_count << " features " << model.weights.cols() << '\n';
  for (Eigen::Index r = 0; r < model.weights.rows(); ++r) {
    out << format_real(model.intercepts(r));
    for (Eigen::Index j = 0; j < model.weights.cols(); ++j) out << ' ' << format_real(model.weights(r, j));
    out << '\n';
  }
}

LinearModel read_model(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError(1, "missing model header");
  std::istringstream hs(header);
  std::string hash, kw1, kw2;
  LinearModel model;
  long long features = 0;
  if (!(hs >> hash >> kw1 >> model.class_count >> kw2 >> features) || hash != "#" ||
      kw1 != "classes" || kw2 != "features" || model.class_count < 2 || features < 0)
    throw ParseError(1, "bad model header");
  const int rows = model.class_count == 2 ? 1 : model.class_count;
  model.weights.resize(rows, features);
  model.intercepts.resize(rows);
  std::string line;
  for (int r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw ParseError(static_cast<std::size_t>(r) + 2, "missing weight row");
    std::istringstream ls(line);
    if (!(ls >> model.intercepts(r))) throw ParseError(static_cast<std::size_t>(r) + 2, "bad intercept");
    for (long long j = 0; j < features; ++j)
      if (!(ls >> model.weights(r, j))) throw ParseError(static_cast<std::size_t>(r) + 2, "bad weight");
  }
  return model;
}

}  // namespace ssrlda
