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
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "ssrlda/dataio.hpp"

using namespace ssrlda;

namespace {

LabeledMatrix svm(const std::string& text, bool labels = true) {
  std::istringstream in(text);
  return parse_svmlight(in, labels);
}

LabeledMatrix labelled(Matrix values, Labels y) {
  LabeledMatrix m;
  m.values = std::move(values);
  m.labels = std::move(y);
  return m;
}

std::size_t error_line(const std::string& text) {
  try {
    svm(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("svmlight lines become rows with 1-based columns") {
  const auto m = svm("1 1:2 3:1\n0 2:4\n");
  Matrix expect(2, 3);
  expect << 2, 0, 1, 0, 4, 0;
  CHECK(m.values == expect);
  REQUIRE(m.labels);
  CHECK(*m.labels == Labels{1, 0});
}

TEST_CASE("empty svmlight input gives zero instances") {
  const auto m = svm("");
  CHECK(m.instance_count() == 0);
  CHECK(m.feature_dim() == 0);
}

TEST_CASE("malformed svmlight tokens report their line") {
  CHECK(error_line("1 3:x\n") == 1);
  CHECK(error_line("1 1:1\n0 2:2 2:3\n") == 2);
  CHECK(error_line("1 1:1\n\n1 -2:1\n") == 3);
  CHECK(error_line("1 0:1\n") == 1);
  CHECK(error_line("one 1:1\n") == 1);
  CHECK(error_line("1 4\n") == 1);
}

TEST_CASE("svmlight comments and minimum width") {
  std::istringstream in("# header\n1 2:1 # trailing\n0 1:3\n");
  const auto m = parse_svmlight(in, true, 5);
  CHECK(m.instance_count() == 2);
  CHECK(m.feature_dim() == 5);
  CHECK(m.values(0, 1) == 1.0);
  CHECK(m.values(1, 0) == 3.0);
}

TEST_CASE("unlabelled svmlight keeps blank lines as zero instances") {
  const auto m = svm("1:1\n\n2:2\n", false);
  CHECK_FALSE(m.has_labels());
  CHECK(m.instance_count() == 3);
  CHECK(m.values.row(1).isZero());
}

TEST_CASE("dense csv with and without a header") {
  std::istringstream a("f1,LABEL,f2\n1.5,1,2\n0,0,3\n");
  const auto m = parse_dense_csv(a);
  CHECK(m.feature_dim() == 2);
  CHECK(*m.labels == Labels{1, 0});
  CHECK(m.values(0, 0) == 1.5);
  CHECK(m.values(1, 1) == 3.0);

  std::istringstream b("1,2\n3,4\n");
  const auto n = parse_dense_csv(b, false);
  CHECK(n.instance_count() == 2);
  CHECK(n.values(1, 0) == 3.0);
}

TEST_CASE("round trip through both writers is exact") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> counts(0, 3);
  std::normal_distribution<double> reals;
  for (int trial = 0; trial < 10; ++trial) {
    Matrix x(7, 5);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 5; ++j) x(i, j) = trial % 2 ? counts(rng) : (counts(rng) ? reals(rng) : 0.0);
    x(6, 4) = trial % 2 ? 1.0 : 1e-300;  // pins the svmlight width
    const auto m = labelled(x, oracle::random_labels(7, 3, static_cast<std::uint64_t>(trial)));

    std::stringstream s;
    write_svmlight(s, m);
    const auto a = parse_svmlight(s);
    CHECK(a.values == m.values);
    CHECK(*a.labels == *m.labels);

    std::stringstream c;
    write_dense_csv(c, m);
    const auto b = parse_dense_csv(c);
    CHECK(b.values == m.values);
    CHECK(*b.labels == *m.labels);
  }
}

TEST_CASE("files load by extension") {
  const auto dir = std::filesystem::temp_directory_path() / "ssrlda_dataio_test";
  std::filesystem::create_directories(dir);
  const auto m = labelled(oracle::random_matrix(4, 3, 5), {0, 1, 1, 0});
  save(dir / "m.csv", m);
  save(dir / "m.svm", m);
  CHECK(load_sparse(dir / "m.csv", format_for_path(dir / "m.csv")).values == m.values);
  CHECK(load_sparse(dir / "m.svm", format_for_path(dir / "m.svm")).values == m.values);
  CHECK_THROWS_AS(load_sparse(dir / "absent.svm", format_for_path(dir / "absent.svm")), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("top frequent features against brute-force column sums") {
  Matrix x(2, 4);
  x << 1, 0, 3, 0, 1, 0, 0, 2;
  const auto sel = select_top_frequent_features({labelled(x, {0, 1})}, 2);
  // Column sums 2, 0, 3, 2: column 2 first, then 0 beats 3 on the tie.
  CHECK(sel.kept == std::vector<std::size_t>{0, 2});
  CHECK(sel.totals == std::vector<double>{2, 3});
  CHECK(sel.matrices[0].values.col(1) == x.col(2));

  // Brute force on random count matrices.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix a = (oracle::random_matrix(6, 9, seed, 0, 4)).array().floor().matrix();
    Matrix b = (oracle::random_matrix(5, 9, seed + 100, 0, 4)).array().floor().matrix();
    std::vector<double> sums(9, 0.0);
    for (int j = 0; j < 9; ++j) sums[j] = a.col(j).sum() + b.col(j).sum();
    std::vector<std::size_t> order(9);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < 9; ++i)
      for (std::size_t j = i + 1; j < 9; ++j)
        if (sums[order[j]] > sums[order[i]] || (sums[order[j]] == sums[order[i]] && order[j] < order[i]))
          std::swap(order[i], order[j]);
    std::vector<std::size_t> expect(order.begin(), order.begin() + 4);
    std::sort(expect.begin(), expect.end());
    const auto s = select_top_frequent_features({labelled(a, Labels(6, 0)), labelled(b, Labels(5, 1))}, 4);
    CHECK(s.kept == expect);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(s.matrices[0].values.col(static_cast<int>(k)) == a.col(static_cast<int>(expect[k])));
      CHECK(s.matrices[1].values.col(static_cast<int>(k)) == b.col(static_cast<int>(expect[k])));
    }
    CHECK(*s.matrices[1].labels == Labels(5, 1));
    // idempotent
    const auto again = select_top_frequent_features(s.matrices, 4);
    CHECK(again.matrices[0].values == s.matrices[0].values);
    CHECK(again.matrices[1].values == s.matrices[1].values);
  }
}

TEST_CASE("top frequent features edge cases") {
  Matrix a(1, 5), b(1, 5);
  a << 0, 2, 0, 0, 1;
  b << 0, 0, 0, 0, 1;
  const auto tie = select_top_frequent_features({labelled(a, {0}), labelled(b, {0})}, 1);
  CHECK(tie.kept == std::vector<std::size_t>{1});

  const auto all = select_top_frequent_features({labelled(a, {0})}, 5);
  CHECK(all.matrices[0].values == a);
  CHECK_THROWS_AS(select_top_frequent_features({labelled(a, {0})}, 6), Error);
  CHECK_THROWS_AS(select_top_frequent_features({labelled(a, {0})}, 0), Error);
}

TEST_CASE("domain pair validation") {
  const auto s = labelled(oracle::random_matrix(4, 5, 1), {0, 1, 0, 1});
  auto t = labelled(oracle::random_matrix(3, 5, 2), {1, 1, 0});
  const auto pair = make_domain_pair(s, t, 2);
  CHECK_FALSE(pair.target.has_labels());
  REQUIRE(pair.target_truth);
  CHECK(*pair.target_truth == Labels{1, 1, 0});
  CHECK(pair.stacked().rows() == 7);

  CHECK_THROWS_AS(make_domain_pair(s, labelled(oracle::random_matrix(3, 6, 2), {0, 0, 0}), 2), Error);
  CHECK_THROWS_AS(make_domain_pair(labelled(oracle::random_matrix(2, 5, 1), {0, 0}), t, 2), Error);
  CHECK_THROWS_AS(make_domain_pair(labelled(oracle::random_matrix(2, 5, 1), {0, 2}), t, 2), Error);
}

TEST_CASE("labels are mapped onto consecutive classes") {
  auto s = labelled(Matrix::Zero(3, 1), {-1, 5, -1});
  auto t = labelled(Matrix::Zero(2, 1), {5, -1});
  CHECK(canonicalize_labels(s, t) == std::vector<int>{-1, 5});
  CHECK(*s.labels == Labels{0, 1, 0});
  CHECK(*t.labels == Labels{1, 0});
  auto bad = labelled(Matrix::Zero(1, 1), {7});
  CHECK_THROWS_AS(canonicalize_labels(s, bad), Error);
}

TEST_CASE("csv quoting round trips") {
  std::stringstream s;
  write_csv_row(s, {"plain", "a,b", "say \"hi\"", "two\nlines", ""});
  write_csv_row(s, {"x"});
  const auto table = read_csv_table(s);
  REQUIRE(table.size() == 2);
  CHECK(table[0] == std::vector<std::string>{"plain", "a,b", "say \"hi\"", "two\nlines", ""});
  CHECK(table[1] == std::vector<std::string>{"x"});
  CHECK(std::stod(format_real(0.1 + 0.2)) == 0.1 + 0.2);
}
