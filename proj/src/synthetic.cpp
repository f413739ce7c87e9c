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

#include "ssrlda/synthetic.hpp"

#include <cmath>
#include <random>

namespace ssrlda {

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = normal(rng);
  return x;
}

DomainPair make_shifted_gaussian_pair(const ShiftedGaussianSpec& spec) {
  if (spec.informative > spec.dim || spec.shifted > spec.dim)
    throw Error("make_shifted_gaussian_pair: feature counts exceed dim");
  if (!(spec.shared_factor >= 0.0 && spec.shared_factor < 1.0))
    throw Error("make_shifted_gaussian_pair: shared_factor must lie in [0, 1)");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double shared = std::sqrt(spec.shared_factor);
  const double own = std::sqrt(1.0 - spec.shared_factor);

  const auto draw = [&](bool target) {
    LabeledMatrix m;
    m.values.resize(static_cast<Eigen::Index>(spec.per_domain), static_cast<Eigen::Index>(spec.dim));
    m.labels = Labels(spec.per_domain);
    for (std::size_t i = 0; i < spec.per_domain; ++i) {
      const int y = static_cast<int>(i % 2);
      (*m.labels)[i] = y;
      const double sign = y == 1 ? 1.0 : -1.0;
      const double latent = normal(rng);
      for (std::size_t j = 0; j < spec.dim; ++j) {
        double v = normal(rng);
        if (j < spec.informative) v = own * v + shared * latent + sign * spec.class_offset;
        if (target && j < spec.shifted) v += spec.shift;
        m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      }
    }
    return m;
  };
  LabeledMatrix source = draw(false);
  LabeledMatrix target = draw(true);
  return make_domain_pair(std::move(source), std::move(target), 2);
}

}  // namespace ssrlda
