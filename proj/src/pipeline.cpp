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

#include "ssrlda/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "ssrlda/adapt_global.hpp"
#include "ssrlda/adapt_local.hpp"

namespace ssrlda {

namespace {

Matrix stack_rows(const Matrix& top, const Matrix& bottom) {
  Matrix x(top.rows() + bottom.rows(), top.cols());
  x.topRows(top.rows()) = top;
  x.bottomRows(bottom.rows()) = bottom;
  return x;
}

struct StageOutput {
  Matrix features;
  double max_residual = 0.0;
};

StageOutput run_global_stage(const Matrix& x0, const Labels& source_labels, const Labels& pseudo,
                             const AdaptConfig& cfg, int class_count, int depth,
                             std::vector<std::string>& warnings) {
  const Eigen::Index d = x0.cols();
  StageOutput out;
  out.features.resize(x0.rows(), depth * d);
  GlobalAdaptProblem problem;
  problem.source_labels = source_labels;
  problem.target_pseudo_labels = pseudo;
  problem.noise = NoiseSpec{cfg.noise, cfg.seed};
  problem.lambda = cfg.lambda;
  problem.beta = cfg.beta;
  problem.class_count = class_count;
  problem.append_bias = cfg.append_bias;
  problem.x = x0;
  for (int k = 0; k < depth; ++k) {
    GlobalSolution sol = solve_mda_ad(problem);
    if (k == 0)
      for (auto& w : sol.warnings) warnings.push_back(std::move(w));
    out.max_residual = std::max(out.max_residual, sol.weights.residual);
    problem.x = encode_global(problem.x, sol.weights, cfg.append_bias);
    out.features.middleCols(k * d, d) = problem.x;
  }
  return out;
}

StageOutput run_local_stage(const ClassPartition& first, const Labels& source_labels,
                            const Labels& pseudo, const AdaptConfig& cfg, int class_count,
                            int depth) {
  const auto n = static_cast<Eigen::Index>(first.total_rows);
  const auto d = static_cast<Eigen::Index>(first.feature_dim);
  StageOutput out;
  out.features.resize(n, depth * d);
  const NoiseSpec noise{cfg.noise, cfg.seed};
  ClassPartition part = first;
  for (int k = 0; k < depth; ++k) {
    const LocalWeights w = solve_mmda(part, noise, cfg.lambda, cfg.beta, cfg.append_bias);
    for (const auto& [c, lw] : w.per_class) out.max_residual = std::max(out.max_residual, lw.residual);
    const LocalEncoding enc = encode_local(part, w, first.total_rows, cfg.append_bias);
    out.features.middleCols(k * d, d) = enc.values;
    if (k + 1 < depth) part = partition_by_class(enc.values, source_labels, pseudo, class_count);
  }
  return out;
}

}  // namespace

Matrix normalize_rows(const Matrix& x, Normalization mode) {
  if (mode == Normalization::none) return x;
  Matrix out = x;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) /= norm;
  }
  return out;
}

Matrix DualRepresentation::classifier_input(Variant variant) const {
  std::vector<const Matrix*> blocks;
  if (raw.size() > 0) blocks.push_back(&raw);
  if (variant != Variant::ommda) blocks.push_back(&h1);
  if (variant != Variant::omda_ad) blocks.push_back(&h2);
  Eigen::Index cols = 0;
  for (const Matrix* b : blocks) cols += b->cols();
  Matrix out(static_cast<Eigen::Index>(rows()), cols);
  Eigen::Index at = 0;
  for (const Matrix* b : blocks) {
    out.middleCols(at, b->cols()) = *b;
    at += b->cols();
  }
  return out;
}

AdaptResult run_ssrlda(const DomainPair& pair, const AdaptConfig& config) {
  return run_variant(pair, config, Variant::full);
}

AdaptResult run_variant(const DomainPair& pair, const AdaptConfig& config, Variant which) {
  config.validate();
  if (!pair.source.labels) throw Error("source domain must be labelled");
  if (pair.source_count() == 0 || pair.target_count() == 0)
    throw Error("both domains need at least one instance");
  if (config.class_count != 0 && config.class_count != pair.class_count)
    throw Error("config class_count " + std::to_string(config.class_count) +
                " disagrees with the domain pair's " + std::to_string(pair.class_count));
  const int class_count = pair.class_count;
  const Labels& ys = *pair.source.labels;
  const auto ns = static_cast<Eigen::Index>(pair.source_count());
  const auto nt = static_cast<Eigen::Index>(pair.target_count());

  const Matrix xs = normalize_rows(pair.source.values, config.normalize);
  const Matrix xt = normalize_rows(pair.target.values, config.normalize);
  const Matrix x0 = stack_rows(xs, xt);
  const Eigen::Index d = x0.cols();

  SvmOptions svm = config.svm;
  svm.seed = config.seed;

  AdaptResult result;
  const LinearModel initial = train_linear(xs, ys, svm, class_count);
  Labels pseudo = predict(initial, xt);
  result.initial_pseudo_labels = pseudo;
  if (pair.target_truth) result.baseline_accuracy = accuracy(pseudo, *pair.target_truth);

  const bool use_global = which != Variant::ommda;
  const bool use_local = which != Variant::omda_ad;
  std::vector<int> depths;
  if (config.fast_stacking)
    depths.push_back(config.layers);
  else
    for (int z = 1; z <= config.layers; ++z) depths.push_back(z);

  for (std::size_t it = 0; it < depths.size(); ++it) {
    const int depth = depths[it];
    IterationTrace trace;
    trace.iteration = static_cast<int>(it) + 1;
    DualRepresentation rep;
    if (config.include_raw_features) rep.raw = x0;
    rep.h1.resize(x0.rows(), 0);
    rep.h2.resize(x0.rows(), 0);
    for (int k = 0; k < depth; ++k) rep.layer_boundaries.push_back(static_cast<std::size_t>(k * d));

    if (use_global) {
      StageOutput g = run_global_stage(x0, ys, pseudo, config, class_count, depth, result.warnings);
      rep.h1 = std::move(g.features);
      trace.max_residual = std::max(trace.max_residual, g.max_residual);
    }

    if (use_local) {
      rep.h2 = Matrix::Zero(x0.rows(), depth * d);
      const std::set<int> target_classes(pseudo.begin(), pseudo.end());
      bool fallback = class_count > 1 && target_classes.size() < 2;
      std::optional<ClassPartition> part;
      if (!fallback) {
        try {
          part = partition_by_class(x0, ys, pseudo, class_count);
        } catch (const Error&) {
          fallback = true;
        }
      }
      if (fallback) {
        trace.local_fallback = true;
        result.warnings.push_back("iteration " + std::to_string(trace.iteration) +
                                  ": target pseudo-labels degenerate; local features zeroed");
      } else {
        trace.skipped_classes = part->skipped_classes.size();
        for (int c : part->skipped_classes)
          result.warnings.push_back("iteration " + std::to_string(trace.iteration) + ": class " +
                                    std::to_string(c) + " missing from one domain; skipped");
        StageOutput l = run_local_stage(*part, ys, pseudo, config, class_count, depth);
        rep.h2 = std::move(l.features);
        trace.max_residual = std::max(trace.max_residual, l.max_residual);
      }
    }
    trace.h1_columns = static_cast<std::size_t>(rep.h1.cols());
    trace.h2_columns = static_cast<std::size_t>(rep.h2.cols());

    const Matrix features = rep.classifier_input(which);
    result.model = train_linear(features.topRows(ns), ys, svm, class_count);
    pseudo = predict(result.model, features.bottomRows(nt));
    if (pair.target_truth) trace.pseudo_label_accuracy = accuracy(pseudo, *pair.target_truth);
    result.trace.push_back(trace);
    result.representation = std::move(rep);
  }

  result.target_predictions = pseudo;
  if (pair.target_truth) result.target_accuracy = accuracy(pseudo, *pair.target_truth);
  return result;
}

void write_trace_csv(std::ostream& out, const std::vector<IterationTrace>& trace) {
  write_csv_row(out, {"iteration", "pseudo_label_accuracy", "max_residual", "skipped_classes",
                      "local_fallback", "h1_columns", "h2_columns"});
  for (const auto& t : trace)
    write_csv_row(out, {std::to_string(t.iteration),
                        t.pseudo_label_accuracy ? format_real(*t.pseudo_label_accuracy) : "",
                        format_real(t.max_residual), std::to_string(t.skipped_classes),
                        t.local_fallback ? "1" : "0", std::to_string(t.h1_columns),
                        std::to_string(t.h2_columns)});
}

}  // namespace ssrlda
