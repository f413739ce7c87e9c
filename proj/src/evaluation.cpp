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

#include "ssrlda/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ssrlda {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Matrix select_rows(const Matrix& x, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    out.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

}  // namespace

double proxy_a_distance_from_error(double error) {
  return std::clamp(2.0 * (1.0 - 2.0 * error), 0.0, 2.0);
}

ProxyADistance proxy_a_distance(const Matrix& source, const Matrix& target, int folds,
                                const SvmOptions& svm) {
  if (source.rows() == 0 || target.rows() == 0) throw Error("proxy_a_distance: empty domain");
  if (source.cols() != target.cols()) throw Error("proxy_a_distance: feature dimensions differ");
  if (folds < 2) throw Error("proxy_a_distance: need at least 2 folds");
  const auto n = static_cast<std::size_t>(source.rows() + target.rows());
  if (n < static_cast<std::size_t>(folds))
    throw Error("proxy_a_distance: " + std::to_string(n) + " instances for " + std::to_string(folds) +
                " folds");

  Matrix x(static_cast<Eigen::Index>(n), source.cols());
  x.topRows(source.rows()) = source;
  x.bottomRows(target.rows()) = target;
  Labels y(n, 1);
  std::fill(y.begin(), y.begin() + source.rows(), 0);

  // Stratified: shuffle each domain, then deal rows round-robin onto folds.
  std::mt19937_64 rng(svm.seed ^ 0x5ad5ad5ad5ad5adULL);
  std::vector<int> fold_of(n);
  std::size_t dealt = 0;
  for (const auto& [begin, end] : {std::pair<std::size_t, std::size_t>{0, static_cast<std::size_t>(source.rows())},
                                   std::pair<std::size_t, std::size_t>{static_cast<std::size_t>(source.rows()), n}}) {
    std::vector<std::size_t> idx(end - begin);
    std::iota(idx.begin(), idx.end(), begin);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t i : idx) fold_of[i] = static_cast<int>(dealt++ % static_cast<std::size_t>(folds));
  }

  double error_sum = 0.0;
  for (int f = 0; f < folds; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < n; ++i) (fold_of[i] == f ? test : train).push_back(i);
    Labels ytrain, ytest;
    for (std::size_t i : train) ytrain.push_back(y[i]);
    for (std::size_t i : test) ytest.push_back(y[i]);
    const std::set<int> present(ytrain.begin(), ytrain.end());
    Labels predicted;
    if (present.size() < 2) {
      predicted.assign(test.size(), *present.begin());
    } else {
      const LinearModel model = train_linear(select_rows(x, train), ytrain, svm, 2);
      predicted = predict(model, select_rows(x, test));
    }
    error_sum += 1.0 - accuracy(predicted, ytest);
  }
  ProxyADistance out;
  out.error = error_sum / folds;
  out.distance = proxy_a_distance_from_error(out.error);
  return out;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::layers: return "layers";
    case SweepAxis::noise: return "noise";
    case SweepAxis::beta: return "beta";
    case SweepAxis::lambda: return "lambda";
  }
  return "layers";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  const std::string n = lower(trim(name));
  if (n == "l" || n == "layers") return SweepAxis::layers;
  if (n == "p" || n == "noise") return SweepAxis::noise;
  if (n == "beta") return SweepAxis::beta;
  if (n == "lambda") return SweepAxis::lambda;
  throw Error("unknown sweep axis '" + name + "' (l|p|beta|lambda)");
}

void SweepGrid::validate() const {
  if (values.empty()) throw Error("sweep grid has no values");
  for (double v : values) {
    switch (axis) {
      case SweepAxis::layers:
        if (!(v >= 1.0) || v != std::floor(v)) throw Error("sweep: layers must be integers >= 1");
        break;
      case SweepAxis::noise:
        if (!(v >= 0.0 && v < 1.0)) throw Error("sweep: noise must lie in [0, 1)");
        break;
      case SweepAxis::beta:
      case SweepAxis::lambda:
        if (!(v >= 0.0)) throw Error("sweep: " + to_string(axis) + " must be >= 0");
        break;
    }
  }
}

bool SweepResult::partial() const {
  return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
}

AdaptConfig with_axis_value(AdaptConfig config, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::layers: config.layers = static_cast<int>(value); break;
    case SweepAxis::noise: config.noise = value; break;
    case SweepAxis::beta: config.beta = value; break;
    case SweepAxis::lambda: config.lambda = value; break;
  }
  return config;
}

SweepResult run_sweep(const DomainPair& pair, const AdaptConfig& base, const SweepGrid& grid, int jobs) {
  grid.validate();
  base.validate();
  std::vector<double> values = grid.values;
  std::sort(values.begin(), values.end());
  SweepResult result;
  result.axis = grid.axis;
  result.rows.resize(values.size());
  const int n = static_cast<int>(values.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (int i = 0; i < n; ++i) {
    SweepRow& row = result.rows[static_cast<std::size_t>(i)];
    row.value = values[static_cast<std::size_t>(i)];
    try {
      const AdaptResult r = run_ssrlda(pair, with_axis_value(base, grid.axis, row.value));
      row.accuracy = r.target_accuracy;
      row.baseline_accuracy = r.baseline_accuracy;
      row.feature_width = static_cast<std::size_t>(r.representation.classifier_input(Variant::full).cols());
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  write_csv_row(out, {"axis", "value", "accuracy", "baseline_accuracy", "feature_width", "error"});
  for (const auto& r : sweep.rows)
    write_csv_row(out, {to_string(sweep.axis), format_real(r.value),
                        r.accuracy ? format_real(*r.accuracy) : "",
                        r.baseline_accuracy ? format_real(*r.baseline_accuracy) : "",
                        std::to_string(r.feature_width), r.error});
}

DomainPair load_task_pair(const std::filesystem::path& source_path, const std::filesystem::path& target_path,
                          bool target_labels, std::size_t top_k) {
  LabeledMatrix source = load_sparse(source_path, format_for_path(source_path, true));
  LabeledMatrix target = load_sparse(target_path, format_for_path(target_path, target_labels));
  // svmlight infers width from the largest index seen; align the two.
  const auto dim = std::max(source.feature_dim(), target.feature_dim());
  for (LabeledMatrix* m : {&source, &target}) {
    if (m->feature_dim() < dim) {
      Matrix widened = Matrix::Zero(m->values.rows(), static_cast<Eigen::Index>(dim));
      widened.leftCols(m->values.cols()) = m->values;
      m->values = std::move(widened);
    }
  }
  if (top_k) {
    FeatureSelection sel = select_top_frequent_features({source, target}, top_k);
    source = std::move(sel.matrices[0]);
    target = std::move(sel.matrices[1]);
  }
  const auto classes = canonicalize_labels(source, target);
  return make_domain_pair(std::move(source), std::move(target), static_cast<int>(classes.size()));
}

std::vector<ManifestTask> parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  std::vector<ManifestTask> tasks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream ls(t);
    auto table = read_csv_table(ls);
    if (table.empty()) continue;
    auto fields = table.front();
    for (auto& f : fields) f = trim(f);
    if (lower(fields.front()) == "name" && tasks.empty() && fields.size() >= 3 &&
        lower(fields[1]) == "source_path")
      continue;
    if (fields.size() < 3 || fields.size() > 4)
      throw ParseError(line_no, "expected name, source_path, target_path[, config_overrides]");
    ManifestTask task;
    task.name = fields[0];
    if (task.name.empty()) throw ParseError(line_no, "empty task name");
    const auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    task.source = resolve(fields[1]);
    task.target = resolve(fields[2]);
    if (fields.size() == 4) {
      std::istringstream os(fields[3]);
      std::string item;
      while (std::getline(os, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "override '" + item + "' is not key=value");
        task.overrides.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
      }
    }
    tasks.push_back(std::move(task));
  }
  return tasks;
}

std::string to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::ok: return "ok";
    case TaskStatus::skipped: return "skipped";
    case TaskStatus::failed: return "failed";
  }
  return "ok";
}

EvalReport evaluate_task(const ManifestTask& task, const BenchmarkOptions& options) {
  EvalReport report;
  report.task = task.name;
  for (const auto& path : {task.source, task.target}) {
    if (!std::filesystem::exists(path)) {
      report.status = TaskStatus::skipped;
      report.reason = "missing dataset file " + path.string();
      return report;
    }
  }
  try {
    AdaptConfig config = options.base;
    bool target_labels = true;
    std::size_t top_k = 0;
    for (const auto& [key, value] : task.overrides) {
      const std::string k = lower(key);
      if (k == "target_labels") {
        target_labels = value == "1" || lower(value) == "true" || lower(value) == "yes";
      } else if (k == "top_k") {
        top_k = static_cast<std::size_t>(std::stoull(value));
      } else {
        apply_config_value(config, key, value);
      }
    }
    config.class_count = 0;
    config.validate();
    report.config = config_entries(config);
    if (top_k) report.config["top_k"] = std::to_string(top_k);

    auto t0 = Clock::now();
    const DomainPair pair = load_task_pair(task.source, task.target, target_labels, top_k);
    report.stage_seconds["load"] = seconds_since(t0);

    t0 = Clock::now();
    const AdaptResult full = run_ssrlda(pair, config);
    report.stage_seconds["adapt"] = seconds_since(t0);
    report.warnings = full.warnings;
    if (full.baseline_accuracy) report.accuracy["svm"] = *full.baseline_accuracy;
    if (full.target_accuracy) report.accuracy["ssrlda"] = *full.target_accuracy;

    if (options.ablations) {
      t0 = Clock::now();
      for (Variant v : {Variant::omda_ad, Variant::ommda}) {
        const AdaptResult r = run_variant(pair, config, v);
        if (r.target_accuracy) report.accuracy[to_string(v)] = *r.target_accuracy;
      }
      report.stage_seconds["ablate"] = seconds_since(t0);
    }

    t0 = Clock::now();
    SvmOptions svm = config.svm;
    svm.seed = config.seed;
    report.pad_before = proxy_a_distance(normalize_rows(pair.source.values, config.normalize),
                                         normalize_rows(pair.target.values, config.normalize),
                                         options.pad_folds, svm)
                            .distance;
    const Matrix adapted = full.representation.classifier_input(Variant::full);
    report.pad_after = proxy_a_distance(adapted.topRows(static_cast<Eigen::Index>(pair.source_count())),
                                        adapted.bottomRows(static_cast<Eigen::Index>(pair.target_count())),
                                        options.pad_folds, svm)
                           .distance;
    report.stage_seconds["pad"] = seconds_since(t0);
  } catch (const std::exception& e) {
    report.status = TaskStatus::failed;
    report.reason = e.what();
  }
  return report;
}

std::vector<EvalReport> run_benchmark(const std::vector<ManifestTask>& tasks,
                                      const BenchmarkOptions& options) {
  std::vector<EvalReport> reports(tasks.size());
  const int n = static_cast<int>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, options.jobs))
  for (int i = 0; i < n; ++i)
    reports[static_cast<std::size_t>(i)] = evaluate_task(tasks[static_cast<std::size_t>(i)], options);
  std::stable_sort(reports.begin(), reports.end(),
                   [](const EvalReport& a, const EvalReport& b) { return a.task < b.task; });
  return reports;
}

std::vector<EvalReport> run_benchmark(const std::filesystem::path& manifest,
                                      const BenchmarkOptions& options) {
  std::ifstream in(manifest);
  if (!in) throw Error("cannot open manifest " + manifest.string());
  return run_benchmark(parse_manifest(in, manifest.parent_path()), options);
}

namespace {

std::vector<std::string> method_columns(const std::vector<EvalReport>& reports) {
  std::vector<std::string> order = {"svm", "ssrlda", "omda_ad", "ommda"};
  std::set<std::string> seen;
  for (const auto& r : reports)
    for (const auto& [m, a] : r.accuracy) seen.insert(m);
  std::vector<std::string> out;
  for (const auto& m : order)
    if (seen.count(m)) out.push_back(m);
  for (const auto& m : seen)
    if (std::find(order.begin(), order.end(), m) == order.end()) out.push_back(m);
  return out;
}

std::string opt(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

}  // namespace

void write_reports_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
  const auto methods = method_columns(reports);
  std::vector<std::string> header = {"task", "status", "reason"};
  for (const auto& m : methods) header.push_back("accuracy_" + m);
  for (const char* h : {"pad_before", "pad_after", "seconds_load", "seconds_adapt", "seconds_pad", "config"})
    header.emplace_back(h);
  write_csv_row(out, header);
  for (const auto& r : reports) {
    std::vector<std::string> row = {r.task, to_string(r.status), r.reason};
    for (const auto& m : methods) {
      const auto it = r.accuracy.find(m);
      row.push_back(it == r.accuracy.end() ? "" : format_real(it->second));
    }
    row.push_back(opt(r.pad_before));
    row.push_back(opt(r.pad_after));
    for (const char* stage : {"load", "adapt", "pad"}) {
      const auto it = r.stage_seconds.find(stage);
      row.push_back(it == r.stage_seconds.end() ? "" : format_real(it->second));
    }
    std::string cfg;
    for (const auto& [k, v] : r.config) cfg += (cfg.empty() ? "" : ";") + k + "=" + v;
    row.push_back(cfg);
    write_csv_row(out, row);
  }
}

void write_reports_json(std::ostream& out, const std::vector<EvalReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["task"] = r.task;
    j["status"] = to_string(r.status);
    j["reason"] = r.reason;
    j["accuracy"] = r.accuracy;
    j["pad_before"] = r.pad_before ? nlohmann::json(*r.pad_before) : nlohmann::json(nullptr);
    j["pad_after"] = r.pad_after ? nlohmann::json(*r.pad_after) : nlohmann::json(nullptr);
    j["config"] = r.config;
    j["stage_seconds"] = r.stage_seconds;
    j["warnings"] = r.warnings;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

std::string format_summary(const std::vector<EvalReport>& reports) {
  const auto methods = method_columns(reports);
  std::size_t width = 8;
  for (const auto& r : reports) width = std::max(width, r.task.size() + 2);
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width)) << "Task";
  for (const auto& m : methods) os << std::right << std::setw(10) << m;
  os << std::right << std::setw(12) << "PAD before" << std::setw(11) << "PAD after" << '\n';

  std::map<std::string, std::pair<double, int>> totals;
  for (const auto& r : reports) {
    os << std::left << std::setw(static_cast<int>(width)) << r.task << std::right << std::fixed
       << std::setprecision(2);
    if (r.status != TaskStatus::ok) {
      os << "  [" << to_string(r.status) << "] " << r.reason << '\n';
      continue;
    }
    for (const auto& m : methods) {
      const auto it = r.accuracy.find(m);
      if (it == r.accuracy.end()) {
        os << std::setw(10) << "-";
      } else {
        os << std::setw(10) << 100.0 * it->second;
        totals[m].first += 100.0 * it->second;
        totals[m].second += 1;
      }
    }
    os << std::setprecision(3) << std::setw(12) << (r.pad_before ? *r.pad_before : 0.0) << std::setw(11)
       << (r.pad_after ? *r.pad_after : 0.0) << '\n';
  }
  os << std::left << std::setw(static_cast<int>(width)) << "Average" << std::right << std::fixed
     << std::setprecision(2);
  for (const auto& m : methods) {
    const auto it = totals.find(m);
    if (it == totals.end() || it->second.second == 0)
      os << std::setw(10) << "-";
    else
      os << std::setw(10) << it->second.first / it->second.second;
  }
  os << '\n';
  return os.str();
}

}  // namespace ssrlda
