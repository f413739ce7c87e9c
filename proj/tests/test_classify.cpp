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
#include <sstream>

#include "oracles.hpp"
#include "ssrlda/classify.hpp"

using namespace ssrlda;

namespace {

struct Blobs {
  Matrix x;
  Labels y;
};

Blobs blobs(int per_class, int classes, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, spread);
  Blobs b;
  b.x.resize(per_class * classes, 2);
  for (int c = 0; c < classes; ++c) {
    const double angle = 2.0 * 3.141592653589793 * c / classes;
    for (int i = 0; i < per_class; ++i) {
      const int r = c * per_class + i;
      b.x(r, 0) = 4.0 * std::cos(angle) + g(rng);
      b.x(r, 1) = 4.0 * std::sin(angle) + g(rng);
      b.y.push_back(c);
    }
  }
  return b;
}

// 0.5 (|w|^2 + b^2) + C sum hinge, with y in {-1, +1}.
double primal(const Matrix& x, const std::vector<double>& sign, const Vector& w, double b, double c) {
  double f = 0.5 * (w.squaredNorm() + b * b);
  for (int i = 0; i < x.rows(); ++i) f += c * std::max(0.0, 1.0 - sign[static_cast<std::size_t>(i)] * (x.row(i).dot(w) + b));
  return f;
}

}  // namespace

TEST_CASE("separable toy is fit exactly") {
  Matrix x(4, 2);
  x << 0, 0, 0, 1, 3, 0, 3, 1;
  const Labels y = {0, 0, 1, 1};
  const auto model = train_linear(x, y);
  CHECK(predict(model, x) == y);
  CHECK(accuracy(predict(model, x), y) == 1.0);
  CHECK(model.weights.rows() == 1);
  CHECK(model.converged);
}

TEST_CASE("conflicting duplicates do not crash") {
  Matrix x(4, 1);
  x << 1, 1, 2, 2;
  const Labels y = {0, 1, 0, 1};
  const auto model = train_linear(x, y);
  CHECK(accuracy(predict(model, x), y) <= 0.5);
}

TEST_CASE("three gaussian blobs") {
  const auto b = blobs(60, 3, 0.8, 3);
  const auto model = train_linear(b.x, b.y);
  CHECK(model.weights.rows() == 3);
  CHECK(accuracy(predict(model, b.x), b.y) >= 0.95);
}

TEST_CASE("binary solution is a minimum of the primal") {
  const auto b = blobs(40, 2, 2.5, 5);  // overlapping
  SvmOptions opt;
  opt.c = 0.7;
  opt.tol = 1e-10;
  opt.max_iter = 20000;
  const auto model = train_linear(b.x, b.y, opt);
  std::vector<double> sign;
  for (int v : b.y) sign.push_back(v == 1 ? 1.0 : -1.0);
  const Vector w = model.weights.row(0).transpose();
  const double b0 = model.intercepts(0);
  const double f = primal(b.x, sign, w, b0, opt.c);
  CHECK(model.loss == doctest::Approx(f).epsilon(1e-9));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int probe = 0; probe < 200; ++probe) {
    Vector dw(2);
    dw << g(rng), g(rng);
    const double db = g(rng);
    for (double h : {1e-2, 1e-3}) CHECK(f <= primal(b.x, sign, w + h * dw, b0 + h * db, opt.c) + 1e-7 * f);
  }
}

TEST_CASE("prediction rules") {
  LinearModel zero;
  zero.class_count = 3;
  zero.weights = Matrix::Zero(3, 2);
  zero.intercepts = Vector::Zero(3);
  CHECK(predict(zero, oracle::random_matrix(5, 2, 1)) == Labels(5, 0));
  CHECK_THROWS_AS(predict(zero, oracle::random_matrix(5, 3, 1)), Error);

  const auto b = blobs(30, 4, 1.5, 9);
  auto model = train_linear(b.x, b.y);
  const Labels base = predict(model, b.x);
  auto shifted = model;
  shifted.intercepts.array() += 3.7;
  CHECK(predict(shifted, b.x) == base);
  auto scaled = model;
  scaled.weights *= 2.5;
  scaled.intercepts *= 2.5;
  CHECK(predict(scaled, b.x) == base);
  CHECK(predict(model, b.x) == base);
}

TEST_CASE("training is deterministic") {
  const auto b = blobs(30, 3, 2.0, 2);
  SvmOptions opt;
  opt.seed = 42;
  const auto a = train_linear(b.x, b.y, opt), c = train_linear(b.x, b.y, opt);
  CHECK(a.weights == c.weights);
  CHECK(a.intercepts == c.intercepts);
}

TEST_CASE("invalid training input") {
  const Matrix x = oracle::random_matrix(4, 2, 1);
  CHECK_THROWS_AS(train_linear(x, Labels{1, 1, 1, 1}), Error);
  CHECK_THROWS_AS(train_linear(x, Labels{0, 1, 0}), Error);
  CHECK_THROWS_AS(train_linear(x, Labels{0, 1, -1, 0}), Error);
  Matrix bad = x;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(train_linear(bad, Labels{0, 1, 0, 1}), Error);
}

TEST_CASE("accuracy") {
  CHECK(accuracy(Labels{0, 1, 2}, Labels{0, 1, 2}) == 1.0);
  CHECK(accuracy(Labels{0, 0}, Labels{1, 1}) == 0.0);
  CHECK(accuracy(Labels{0, 1, 1, 0}, Labels{0, 1, 0, 0}) == 0.75);
  const Labels a = oracle::random_labels(50, 3, 1), t = oracle::random_labels(50, 3, 2);
  std::vector<std::size_t> perm(50);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(7));
  Labels ap, tp;
  for (std::size_t i : perm) {
    ap.push_back(a[i]);
    tp.push_back(t[i]);
  }
  CHECK(accuracy(ap, tp) == accuracy(a, t));
  CHECK_THROWS_AS(accuracy(Labels{}, Labels{}), Error);
  CHECK_THROWS_AS(accuracy(Labels{0}, Labels{0, 1}), Error);
}

TEST_CASE("model text format round trips") {
  const auto b = blobs(20, 3, 1.0, 4);
  const auto model = train_linear(b.x, b.y);
  std::stringstream s;
  write_model(s, model);
  const auto back = read_model(s);
  CHECK(back.class_count == 3);
  CHECK(back.weights == model.weights);
  CHECK(back.intercepts == model.intercepts);
  std::istringstream bad("# classes 2 features 3\n0 1 2\n");
  CHECK_THROWS_AS(read_model(bad), Error);
}
