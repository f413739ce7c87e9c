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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssrlda/types.hpp"

namespace ssrlda {

// Instance-by-feature matrix with optional per-row class labels.
struct LabeledMatrix {
  Matrix values;
  std::optional<Labels> labels;

  std::size_t instance_count() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t feature_dim() const { return static_cast<std::size_t>(values.cols()); }
  bool has_labels() const { return labels.has_value(); }

  // Throws if a label lies outside [0, class_count) or the label vector
  // length disagrees with the row count.
  void validate(int class_count) const;
};

// Labelled source plus target whose labels, if any, are held out for scoring.
struct DomainPair {
  LabeledMatrix source;
  LabeledMatrix target;  // labels always empty
  std::optional<Labels> target_truth;
  int class_count = 0;

  std::size_t source_count() const { return source.instance_count(); }
  std::size_t target_count() const { return target.instance_count(); }
  std::size_t feature_dim() const { return source.feature_dim(); }
  // [X_S; X_T]
  Matrix stacked() const;
};

enum class FileFormat { svmlight, csv };

struct FormatSpec {
  FileFormat format = FileFormat::svmlight;
  // svmlight lines start with a label; csv takes labels from a `label`
  // header column. false reads every line/column as features.
  bool has_labels = true;
  // Lower bound on the feature dimension; the file may raise it.
  std::size_t min_feature_dim = 0;
};

// Chooses svmlight or csv from the file extension.
FormatSpec format_for_path(const std::filesystem::path& path, bool has_labels = true);

LabeledMatrix load_sparse(const std::filesystem::path& path, const FormatSpec& spec);
LabeledMatrix parse_svmlight(std::istream& in, bool has_labels = true,
                             std::size_t min_feature_dim = 0);
LabeledMatrix parse_dense_csv(std::istream& in, bool has_labels = true);

// Writes with enough digits for an exact round trip through the loaders.
void write_svmlight(std::ostream& out, const LabeledMatrix& m);
void write_dense_csv(std::ostream& out, const LabeledMatrix& m);
void save(const std::filesystem::path& path, const LabeledMatrix& m);

struct FeatureSelection {
  std::vector<LabeledMatrix> matrices;
  // Ascending original column indices.
  std::vector<std::size_t> kept;
  // Total count per kept column, aligned with `kept`.
  std::vector<double> totals;
};

// Keeps the k columns with the largest total over all matrices; ties go to the
// lower index. Kept columns stay in their original relative order.
FeatureSelection select_top_frequent_features(const std::vector<LabeledMatrix>& data,
                                              std::size_t k);

DomainPair make_domain_pair(LabeledMatrix source, LabeledMatrix target, int class_count);

// Maps the distinct source label values (sorted) onto 0..k-1 and applies the
// same map to the target. Returns the original values in class order.
std::vector<int> canonicalize_labels(LabeledMatrix& source, LabeledMatrix& target);

// RFC-4180 style CSV: fields with a comma, quote or line break are quoted and
// embedded quotes doubled.
std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> read_csv_table(std::istream& in);
std::string format_real(double v);

}  // namespace ssrlda
