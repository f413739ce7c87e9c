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

// Marginalized denoising autoencoder: feature-removal noise is integrated out
// analytically, so the mapping W is a ridge-type linear solve.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>

#include "ssrlda/mmd.hpp"
#include "ssrlda/types.hpp"

namespace ssrlda {

struct NoiseSpec {
  double p = 0.5;  // probability that a feature occurrence is removed
  std::uint64_t rng_seed = 0;  // only the sampling oracle consumes this

  void validate() const;
};

struct ExpectationStats {
  Matrix q;        // E[X~^T X~]
  Matrix p_cross;  // E[X~^T X]
  std::optional<Matrix> q2;  // E[X~^T (sum M_c) X~]
};

struct LayerWeights {
  Matrix w;  // d_in x d_out
  // ||A W - B||_F / ||B||_F of the system that produced w.
  double residual = 0.0;
};

// Per-input-column keep probability: 1 - p, and 1 for an appended bias column.
Vector keep_probabilities(Eigen::Index feature_dim, double p, bool append_bias);

// Applies the expectation pattern to a second-moment matrix u:
// off-diagonal u_ij k_i k_j, diagonal u_ii k_i.
Matrix marginalize(const Matrix& u, const Vector& keep);

// [x, 1] when append_bias, else x.
Matrix layer_input(const Matrix& x, bool append_bias);

ExpectationStats expected_stats(const Matrix& x, const NoiseSpec& noise,
                                const MmdMatrix* mmd_sum = nullptr, bool append_bias = false);

// Zeroes each entry independently with probability noise.p, seeded by
// noise.rng_seed.
Matrix corrupt_sample(const Matrix& x, const NoiseSpec& noise);
Matrix corrupt_sample(const Matrix& x, double p, std::mt19937_64& rng);

// Empirical Q and P over `samples` explicit corruptions (no bias, no MMD).
// Samples are split into fixed chunks with derived seeds and reduced in chunk
// order, so the result does not depend on the thread count.
ExpectationStats monte_carlo_stats(const Matrix& x, const NoiseSpec& noise, std::size_t samples);

// Solves a W = b for symmetric positive definite a via Cholesky.
// Throws SingularSystemError when a is not numerically positive definite.
LayerWeights solve_spd(const Matrix& a, const Matrix& b);

LayerWeights solve_mda(const Matrix& x, const NoiseSpec& noise, double lambda,
                       bool append_bias = false);

// tanh(x W) on clean features.
Matrix encode(const Matrix& x, const LayerWeights& w, bool append_bias = false);

void write_weights_csv(std::ostream& out, const LayerWeights& w);

}  // namespace ssrlda
