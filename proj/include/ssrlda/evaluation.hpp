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

// Experiment driver: proxy-A-distance, one-axis parameter sweeps and
// manifest-driven benchmark runs with CSV/JSON/text reports.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssrlda/pipeline.hpp"

namespace ssrlda {

// 2(1 - 2 eps) clamped to [0, 2].
double proxy_a_distance_from_error(double error);

struct ProxyADistance {
  double error = 0.0;     // mean cross-validated domain-discrimination error
  double distance = 0.0;  // in [0, 2]
};

// Source rows labelled 0, target rows 1; stratified k-fold linear SVM.
ProxyADistance proxy_a_distance(const Matrix& source, const Matrix& target, int folds = 5,
                                const SvmOptions& svm = {});

enum class SweepAxis { layers, noise, beta, lambda };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepGrid {
  SweepAxis axis = SweepAxis::layers;
  std::vector<double> values;

  void validate() const;
};

struct SweepRow {
  double value = 0.0;
  std::optional<double> accuracy;
  std::optional<double> baseline_accuracy;
  std::size_t feature_width = 0;
  std::string error;  // empty on success
};

struct SweepResult {
  SweepAxis axis = SweepAxis::layers;
  std::vector<SweepRow> rows;  // ascending value
  bool partial() const;
};

AdaptConfig with_axis_value(AdaptConfig config, SweepAxis axis, double value);

// One pipeline run per value; failures are recorded per row.
SweepResult run_sweep(const DomainPair& pair, const AdaptConfig& base, const SweepGrid& grid,
                      int jobs = 1);

void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

// Loads a source/target file pair, widens both to a shared feature width,
// optionally keeps the top_k most frequent columns, and maps labels to 0..k-1.
DomainPair load_task_pair(const std::filesystem::path& source, const std::filesystem::path& target,
                          bool target_labels = true, std::size_t top_k = 0);

struct ManifestTask {
  std::string name;
  std::filesystem::path source;
  std::filesystem::path target;
  std::vector<std::pair<std::string, std::string>> overrides;
};

// One task per line: name, source_path, target_path, config_overrides.
// Overrides are key=value pairs separated by ';'. Relative paths resolve
// against base_dir.
std::vector<ManifestTask> parse_manifest(std::istream& in, const std::filesystem::path& base_dir = {});

enum class TaskStatus { ok, skipped, failed };
std::string to_string(TaskStatus s);

struct EvalReport {
  std::string task;
  TaskStatus status = TaskStatus::ok;
  std::string reason;
  std::map<std::string, double> accuracy;  // method -> target accuracy
  std::optional<double> pad_before;
  std::optional<double> pad_after;
  std::map<std::string, std::string> config;
  std::map<std::string, double> stage_seconds;
  std::vector<std::string> warnings;
};

struct BenchmarkOptions {
  AdaptConfig base;
  int jobs = 1;
  int pad_folds = 5;
  bool ablations = false;  // also run the global-only and local-only variants
};

EvalReport evaluate_task(const ManifestTask& task, const BenchmarkOptions& options);
// Reports sorted by task name.
std::vector<EvalReport> run_benchmark(const std::filesystem::path& manifest,
                                      const BenchmarkOptions& options);
std::vector<EvalReport> run_benchmark(const std::vector<ManifestTask>& tasks,
                                      const BenchmarkOptions& options);

void write_reports_csv(std::ostream& out, const std::vector<EvalReport>& reports);
void write_reports_json(std::ostream& out, const std::vector<EvalReport>& reports);
// Task-by-method accuracy table in percent with an average row.
std::string format_summary(const std::vector<EvalReport>& reports);

}  // namespace ssrlda
