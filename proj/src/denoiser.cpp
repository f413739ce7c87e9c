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

#include "ssrlda/denoiser.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "ssrlda/dataio.hpp"
#include "ssrlda/kernels.hpp"

namespace ssrlda {

namespace {

constexpr std::size_t kSampleChunks = 64;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void NoiseSpec::validate() const {
  if (!(p >= 0.0 && p < 1.0)) throw Error("noise probability must lie in [0, 1), got " + std::to_string(p));
}

Vector keep_probabilities(Eigen::Index feature_dim, double p, bool append_bias) {
  Vector keep = Vector::Constant(feature_dim + (append_bias ? 1 : 0), 1.0 - p);
  if (append_bias) keep(feature_dim) = 1.0;
  return keep;
}

Matrix marginalize(const Matrix& u, const Vector& keep) {
  if (u.rows() != u.cols() || u.rows() != keep.size())
    throw Error("marginalize: shape mismatch");
  Matrix q = keep.asDiagonal() * u * keep.asDiagonal();
  q.diagonal() = u.diagonal().cwiseProduct(keep);
  return q;
}

Matrix layer_input(const Matrix& x, bool append_bias) {
  if (!append_bias) return x;
  Matrix xa(x.rows(), x.cols() + 1);
  xa.leftCols(x.cols()) = x;
  xa.col(x.cols()).setOnes();
  return xa;
}

ExpectationStats expected_stats(const Matrix& x, const NoiseSpec& noise, const MmdMatrix* mmd_sum,
                                bool append_bias) {
  noise.validate();
  if (x.rows() == 0) throw Error("expected_stats: empty input");
  if (mmd_sum && mmd_sum->size() != static_cast<std::size_t>(x.rows()))
    throw Error("expected_stats: MMD matrix size " + std::to_string(mmd_sum->size()) +
                " != row count " + std::to_string(x.rows()));

  const Matrix xa = layer_input(x, append_bias);
  const Vector keep = keep_probabilities(x.cols(), noise.p, append_bias);
  const Matrix u = kernels::gram(xa);

  ExpectationStats s;
  s.q = marginalize(u, keep);
  s.p_cross = keep.asDiagonal() * u.leftCols(x.cols());
  if (mmd_sum) s.q2 = marginalize(mmd_sum->congruence(xa), keep);
  return s;
}

Matrix corrupt_sample(const Matrix& x, double p, std::mt19937_64& rng) {
  Matrix out = x;
  if (p == 0.0) return out;
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      if (uniform01(rng) < p) out(i, j) = 0.0;
  return out;
}

Matrix corrupt_sample(const Matrix& x, const NoiseSpec& noise) {
  noise.validate();
  std::mt19937_64 rng(noise.rng_seed);
  return corrupt_sample(x, noise.p, rng);
}

ExpectationStats monte_carlo_stats(const Matrix& x, const NoiseSpec& noise, std::size_t samples) {
  noise.validate();
  if (samples == 0) throw Error("monte_carlo_stats: need at least one sample");
  const Eigen::Index d = x.cols();
  std::vector<Matrix> q_parts(kSampleChunks, Matrix::Zero(d, d));
  std::vector<Matrix> p_parts(kSampleChunks, Matrix::Zero(d, d));

#pragma omp parallel for schedule(dynamic)
  for (std::size_t chunk = 0; chunk < kSampleChunks; ++chunk) {
    const std::size_t begin = samples * chunk / kSampleChunks;
    const std::size_t end = samples * (chunk + 1) / kSampleChunks;
    std::mt19937_64 rng(splitmix64(noise.rng_seed ^ splitmix64(chunk + 1)));
    Matrix& q = q_parts[chunk];
    Matrix& p = p_parts[chunk];
    for (std::size_t s = begin; s < end; ++s) {
      const Matrix xt = corrupt_sample(x, noise.p, rng);
      q.noalias() += xt.transpose() * xt;
      p.noalias() += xt.transpose() * x;
    }
  }

  ExpectationStats out;
  out.q = Matrix::Zero(d, d);
  out.p_cross = Matrix::Zero(d, d);
  for (std::size_t chunk = 0; chunk < kSampleChunks; ++chunk) {
    out.q += q_parts[chunk];
    out.p_cross += p_parts[chunk];
  }
  out.q /= static_cast<double>(samples);
  out.p_cross /= static_cast<double>(samples);
  return out;
}

LayerWeights solve_spd(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) throw Error("solve_spd: shape mismatch");
  const Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success || !(llt.rcond() > std::numeric_limits<double>::epsilon()))
    throw SingularSystemError(
        "linear system is singular or not positive definite; use a regularizer lambda > 0");
  LayerWeights out;
  out.w = llt.solve(b);
  if (!out.w.allFinite()) throw SingularSystemError("linear solve produced non-finite weights; use lambda > 0");
  const double bn = b.norm();
  const double rn = (a * out.w - b).norm();
  out.residual = bn > 0.0 ? rn / bn : rn;
  return out;
}

LayerWeights solve_mda(const Matrix& x, const NoiseSpec& noise, double lambda, bool append_bias) {
  if (!(lambda >= 0.0)) throw Error("lambda must be non-negative");
  const ExpectationStats s = expected_stats(x, noise, nullptr, append_bias);
  Matrix a = s.q;
  a.diagonal().array() += lambda;
  return solve_spd(a, s.p_cross);
}

Matrix encode(const Matrix& x, const LayerWeights& w, bool append_bias) {
  return kernels::tanh_product(layer_input(x, append_bias), w.w);
}

void write_weights_csv(std::ostream& out, const LayerWeights& w) {
  std::vector<std::string> row;
  for (Eigen::Index i = 0; i < w.w.rows(); ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < w.w.cols(); ++j) row.push_back(format_real(w.w(i, j)));
    write_csv_row(out, row);
  }
}

}  // namespace ssrlda
