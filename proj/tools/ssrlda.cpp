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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssrlda/evaluation.hpp"
#include "ssrlda/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ssrlda;

namespace {

constexpr int kOk = 0;
constexpr int kFatal = 1;
constexpr int kPartial = 2;

struct Common {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out_dir;
  std::string format = "csv";
};

struct PairArgs {
  std::string source;
  std::string target;
  bool target_unlabeled = false;
  std::size_t top_k = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "key=value hyper-parameter file")->check(CLI::ExistingFile);
  cmd->add_option("--set", c.sets, "override one config key, e.g. --set beta=1000");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--jobs", c.jobs, "parallel tasks or sweep cells")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out_dir, "output directory (stdout when omitted)");
  cmd->add_option("--format", c.format, "table format")->check(CLI::IsMember({"csv", "json"}));
}

void add_pair(CLI::App* cmd, PairArgs& p) {
  cmd->add_option("--source", p.source, "labelled source data (svmlight or .csv)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--target", p.target, "target data")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--target-unlabeled", p.target_unlabeled, "target rows carry no label column");
  cmd->add_option("--top-k", p.top_k, "keep the k most frequent features");
}

AdaptConfig build_config(const Common& c) {
  AdaptConfig config;
  if (!c.config_path.empty()) config = load_config(c.config_path, config);
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("--set expects key=value, got '" + kv + "'");
    apply_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed) config.seed = *c.seed;
  config.validate();
  return config;
}

DomainPair load_pair(const PairArgs& p) {
  return load_task_pair(p.source, p.target, !p.target_unlabeled, p.top_k);
}

// Writes to <out>/<name>.<ext> or to stdout.
void emit(const Common& c, const std::string& name, const std::string& body) {
  if (c.out_dir.empty()) {
    std::cout << body;
    return;
  }
  fs::create_directories(c.out_dir);
  const fs::path path = fs::path(c.out_dir) / (name + "." + c.format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << body;
}

void write_side_file(const Common& c, const std::string& file, const std::string& body) {
  if (c.out_dir.empty()) return;
  fs::create_directories(c.out_dir);
  std::ofstream out(fs::path(c.out_dir) / file, std::ios::binary);
  if (!out) throw Error("cannot write " + (fs::path(c.out_dir) / file).string());
  out << body;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string accuracy_table(const Common& c, const std::vector<std::pair<std::string, std::optional<double>>>& rows) {
  std::ostringstream os;
  if (c.format == "json") {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : rows) j[k] = optional_json(v);
    os << j.dump(2) << '\n';
  } else {
    write_csv_row(os, {"method", "accuracy"});
    for (const auto& [k, v] : rows) write_csv_row(os, {k, v ? format_real(*v) : ""});
  }
  return os.str();
}

void report_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_solve(const Common& c, const PairArgs& p, const std::string& variant_name) {
  const AdaptConfig config = build_config(c);
  const DomainPair pair = load_pair(p);
  const Variant variant = parse_variant(variant_name);
  const AdaptResult r = run_variant(pair, config, variant);
  report_warnings(r.warnings);

  std::ostringstream preds;
  if (c.format == "json") {
    nlohmann::json j;
    j["variant"] = to_string(variant);
    j["config"] = config_entries(config);
    j["baseline_accuracy"] = optional_json(r.baseline_accuracy);
    j["accuracy"] = optional_json(r.target_accuracy);
    j["predictions"] = r.target_predictions;
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : r.trace)
      trace.push_back({{"iteration", t.iteration},
                       {"pseudo_label_accuracy", optional_json(t.pseudo_label_accuracy)},
                       {"max_residual", t.max_residual},
                       {"skipped_classes", t.skipped_classes},
                       {"local_fallback", t.local_fallback}});
    j["trace"] = trace;
    preds << j.dump(2) << '\n';
  } else {
    write_csv_row(preds, {"index", "prediction", "truth"});
    for (std::size_t i = 0; i < r.target_predictions.size(); ++i)
      write_csv_row(preds, {std::to_string(i), std::to_string(r.target_predictions[i]),
                            pair.target_truth ? std::to_string((*pair.target_truth)[i]) : ""});
  }
  emit(c, "predictions", preds.str());

  std::ostringstream trace, model, cfg;
  write_trace_csv(trace, r.trace);
  write_model(model, r.model);
  write_config(cfg, config);
  write_side_file(c, "trace.csv", trace.str());
  write_side_file(c, "model.txt", model.str());
  write_side_file(c, "config.txt", cfg.str());

  if (r.target_accuracy)
    std::cerr << "target accuracy " << format_real(*r.target_accuracy) << " (svm baseline "
              << format_real(r.baseline_accuracy.value_or(0.0)) << ")\n";
  return kOk;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw Error("--values: '" + item + "' is not a number");
    values.push_back(v);
  }
  return values;
}

int cmd_sweep(const Common& c, const PairArgs& p, const std::string& axis, const std::string& values) {
  const AdaptConfig config = build_config(c);
  const DomainPair pair = load_pair(p);
  SweepGrid grid;
  grid.axis = parse_sweep_axis(axis);
  grid.values = parse_values(values);
  const SweepResult sweep = run_sweep(pair, config, grid, c.jobs);

  std::ostringstream os;
  if (c.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : sweep.rows)
      rows.push_back({{"axis", to_string(sweep.axis)},
                      {"value", r.value},
                      {"accuracy", optional_json(r.accuracy)},
                      {"baseline_accuracy", optional_json(r.baseline_accuracy)},
                      {"feature_width", r.feature_width},
                      {"error", r.error}});
    os << rows.dump(2) << '\n';
  } else {
    write_sweep_csv(os, sweep);
  }
  emit(c, "sweep", os.str());
  for (const auto& r : sweep.rows)
    if (!r.error.empty()) std::cerr << "error: " << to_string(sweep.axis) << "=" << r.value << ": " << r.error << '\n';
  return sweep.partial() ? kPartial : kOk;
}

int cmd_bench(const Common& c, const std::string& manifest, bool ablate, int folds) {
  BenchmarkOptions opts;
  opts.base = build_config(c);
  opts.jobs = c.jobs;
  opts.ablations = ablate;
  opts.pad_folds = folds;
  const auto reports = run_benchmark(manifest, opts);

  std::ostringstream os;
  if (c.format == "json")
    write_reports_json(os, reports);
  else
    write_reports_csv(os, reports);
  if (c.out_dir.empty()) {
    std::cout << format_summary(reports);
  } else {
    emit(c, "reports", os.str());
    write_side_file(c, "summary.txt", format_summary(reports));
    std::cout << format_summary(reports);
  }

  bool failed = false;
  for (const auto& r : reports) {
    for (const auto& w : r.warnings) std::cerr << "warning: " << r.task << ": " << w << '\n';
    if (r.status == TaskStatus::skipped) std::cerr << "warning: " << r.task << " skipped: " << r.reason << '\n';
    if (r.status == TaskStatus::failed) {
      std::cerr << "error: " << r.task << " failed: " << r.reason << '\n';
      failed = true;
    }
  }
  return failed ? kPartial : kOk;
}

int cmd_pad(const Common& c, const PairArgs& p, int folds) {
  const AdaptConfig config = build_config(c);
  const DomainPair pair = load_pair(p);
  SvmOptions svm = config.svm;
  svm.seed = config.seed;
  const auto before = proxy_a_distance(normalize_rows(pair.source.values, config.normalize),
                                       normalize_rows(pair.target.values, config.normalize), folds, svm);
  const AdaptResult r = run_ssrlda(pair, config);
  report_warnings(r.warnings);
  const Matrix adapted = r.representation.classifier_input(Variant::full);
  const auto ns = static_cast<Eigen::Index>(pair.source_count());
  const auto after = proxy_a_distance(adapted.topRows(ns), adapted.bottomRows(adapted.rows() - ns), folds, svm);

  std::ostringstream os;
  if (c.format == "json") {
    nlohmann::json j = {{"raw", {{"error", before.error}, {"distance", before.distance}}},
                        {"ssrlda", {{"error", after.error}, {"distance", after.distance}}}};
    os << j.dump(2) << '\n';
  } else {
    write_csv_row(os, {"features", "error", "distance"});
    write_csv_row(os, {"raw", format_real(before.error), format_real(before.distance)});
    write_csv_row(os, {"ssrlda", format_real(after.error), format_real(after.distance)});
  }
  emit(c, "pad", os.str());
  return kOk;
}

int cmd_ablate(const Common& c, const PairArgs& p) {
  const AdaptConfig config = build_config(c);
  const DomainPair pair = load_pair(p);
  std::vector<std::pair<std::string, std::optional<double>>> rows;
  std::optional<double> baseline;
  for (Variant v : {Variant::full, Variant::omda_ad, Variant::ommda}) {
    const AdaptResult r = run_variant(pair, config, v);
    report_warnings(r.warnings);
    baseline = r.baseline_accuracy;
    rows.emplace_back(to_string(v), r.target_accuracy);
  }
  rows.insert(rows.begin(), {"svm", baseline});
  emit(c, "ablation", accuracy_table(c, rows));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-autoencoder domain adaptation"};
  app.require_subcommand(1);

  Common common;
  PairArgs pair;
  std::string variant = "full", axis, values, manifest;
  bool ablate = false;
  int folds = 5;

  auto* solve = app.add_subcommand("solve", "run the adaptation pipeline once");
  add_common(solve, common);
  add_pair(solve, pair);
  solve->add_option("--variant", variant, "full | omda_ad | ommda");

  auto* sweep = app.add_subcommand("sweep", "vary one hyper-parameter");
  add_common(sweep, common);
  add_pair(sweep, pair);
  sweep->add_option("--axis", axis, "l | p | beta | lambda")->required();
  sweep->add_option("--values", values, "comma-separated grid")->required();

  auto* bench = app.add_subcommand("bench", "evaluate every task of a manifest");
  add_common(bench, common);
  bench->add_option("--manifest", manifest, "name, source_path, target_path, overrides")
      ->required()
      ->check(CLI::ExistingFile);
  bench->add_flag("--ablate", ablate, "also run the global-only and local-only variants");
  bench->add_option("--folds", folds, "proxy-A-distance folds")->check(CLI::Range(2, 1000));

  auto* pad = app.add_subcommand("pad", "proxy-A-distance before and after adaptation");
  add_common(pad, common);
  add_pair(pad, pair);
  pad->add_option("--folds", folds, "cross-validation folds")->check(CLI::Range(2, 1000));

  auto* abl = app.add_subcommand("ablate", "compare full, global-only and local-only features");
  add_common(abl, common);
  add_pair(abl, pair);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kFatal;
  }

  try {
    if (*solve) return cmd_solve(common, pair, variant);
    if (*sweep) return cmd_sweep(common, pair, axis, values);
    if (*bench) return cmd_bench(common, manifest, ablate, folds);
    if (*pad) return cmd_pad(common, pair, folds);
    if (*abl) return cmd_ablate(common, pair);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFatal;
  }
  return kFatal;
}
