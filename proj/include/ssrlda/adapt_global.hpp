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

// Global autoencoder with distribution adaptation: the MDA reconstruction
// objective plus beta times the linear MMD between domains, marginally and
// per (pseudo-)class, all over the stacked [X_S; X_T].

#include <string>
#include <vector>

#include "ssrlda/denoiser.hpp"
#include "ssrlda/mmd.hpp"

namespace ssrlda {

struct GlobalAdaptProblem {
  Matrix x;  // [X_S; X_T]
  Labels source_labels;
  Labels target_pseudo_labels;
  NoiseSpec noise;
  double lambda = 1.0;
  double beta = 0.0;
  int class_count = 2;
  bool append_bias = false;

  std::size_t source_count() const { return source_labels.size(); }
  std::size_t target_count() const { return target_pseudo_labels.size(); }
  void validate() const;
};

// M_0 plus every non-skipped M_c for the given labelling.
struct AdaptationMmd {
  MmdMatrix total;
  std::vector<int> skipped_classes;
};

AdaptationMmd build_adaptation_mmd(std::span<const int> source_labels,
                                   std::span<const int> target_labels, int class_count);

struct GlobalSolution {
  LayerWeights weights;
  std::vector<int> skipped_classes;
  std::vector<std::string> warnings;
};

// Solves (E[Q] + lambda I + beta E[Q2]) W = E[P].
GlobalSolution solve_mda_ad(const GlobalAdaptProblem& problem);

Matrix encode_global(const Matrix& x, const LayerWeights& w, bool append_bias = false);

}  // namespace ssrlda
