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

#include <cstdint>

#include "ssrlda/dataio.hpp"

namespace ssrlda {

// Two-class Gaussian domains with unit-variance features. Class means differ
// on the first `informative` features; the target domain additionally has
// its mean moved by `shift` standard deviations on the first
// `shifted` features.
struct ShiftedGaussianSpec {
  std::size_t per_domain = 200;
  std::size_t dim = 20;
  std::size_t informative = 10;
  double class_offset = 0.5;  // class means are -offset / +offset
  std::size_t shifted = 5;
  double shift = 1.5;
  // Fraction of each informative feature's variance carried by a latent
  // per-instance factor shared by all informative features.
  double shared_factor = 0.0;
  std::uint64_t seed = 1;
};

// Source and target with balanced classes; target truth is retained.
DomainPair make_shifted_gaussian_pair(const ShiftedGaussianSpec& spec);

// Draws n rows of i.i.d. N(0, 1) features.
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace ssrlda
