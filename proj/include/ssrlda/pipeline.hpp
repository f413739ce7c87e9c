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

// Dual-representation domain adaptation: stacked global autoencoders (H1)
// and stacked per-class local autoencoders (H2), refreshed with target
// pseudo-labels after every outer iteration.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssrlda/classify.hpp"
#include "ssrlda/dataio.hpp"

namespace ssrlda {

enum class Normalization { none, row_l2 };
enum class Variant { full, omda_ad, ommda };

struct AdaptConfig {
  int layers = 1;
  double noise = 0.5;
  double lambda = 1.0;
  double beta = 0.1;
  int class_count = 0;  // 0 takes the domain pair's count
  bool include_raw_features = false;
  bool append_bias = false;
  // Runs the outer loop once at full depth instead of l times.
  bool fast_stacking = false;
  Normalization normalize = Normalization::none;
  SvmOptions svm;
  std::uint64_t seed = 0;

  void validate() const;
};

// key=value lines; '#' starts a comment.
AdaptConfig parse_config(std::istream& in, AdaptConfig base = {});
AdaptConfig load_config(const std::filesystem::path& path, AdaptConfig base = {});
void apply_config_value(AdaptConfig& config, const std::string& key, const std::string& value);
std::map<std::string, std::string> config_entries(const AdaptConfig& config);
void write_config(std::ostream& out, const AdaptConfig& config);

// Per-dataset settings: "reuters", "spam", "newsgroups", "office".
// Applied through the `preset` config key.
AdaptConfig apply_preset(AdaptConfig base, const std::string& name);

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);
std::string to_string(Normalization n);

struct DualRepresentation {
  Matrix h1;  // n x (l d): global layer outputs side by side
  Matrix h2;  // n x (l d): local layer outputs in original instance order
  std::vector<std::size_t> layer_boundaries;  // column offset of each layer
  Matrix raw;  // normalized inputs, populated when include_raw_features

  std::size_t rows() const { return static_cast<std::size_t>(std::max(h1.rows(), h2.rows())); }
  // Feature blocks the classifier sees for a variant: [raw?, H1?, H2?].
  Matrix classifier_input(Variant variant) const;
};

struct IterationTrace {
  int iteration = 0;
  std::optional<double> pseudo_label_accuracy;  // after the update
  double max_residual = 0.0;  // worst relative residual over the layer solves
  std::size_t skipped_classes = 0;
  bool local_fallback = false;
  std::size_t h1_columns = 0;
  std::size_t h2_columns = 0;
};

struct AdaptResult {
  LinearModel model;
  DualRepresentation representation;
  Labels target_predictions;
  Labels initial_pseudo_labels;
  std::optional<double> baseline_accuracy;  // raw-feature SVM
  std::optional<double> target_accuracy;
  std::vector<IterationTrace> trace;
  std::vector<std::string> warnings;
};

Matrix normalize_rows(const Matrix& x, Normalization mode);

AdaptResult run_ssrlda(const DomainPair& pair, const AdaptConfig& config);
AdaptResult run_variant(const DomainPair& pair, const AdaptConfig& config, Variant which);

// iteration,pseudo_label_accuracy,max_residual,skipped_classes,local_fallback
void write_trace_csv(std::ostream& out, const std::vector<IterationTrace>& trace);

}  // namespace ssrlda
