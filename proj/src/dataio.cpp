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

#include "ssrlda/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

namespace ssrlda {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty()) return false;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

bool parse_integer(std::string_view tok, long long& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty()) return false;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

// Accepts "1", "+1", "-1" and integral reals such as "1.0".
bool parse_label(std::string_view tok, int& out) {
  long long v = 0;
  if (parse_integer(tok, v)) {
    out = static_cast<int>(v);
    return v == out;
  }
  double d = 0.0;
  if (!parse_double(tok, d) || d != static_cast<double>(static_cast<long long>(d))) return false;
  out = static_cast<int>(d);
  return true;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

}  // namespace

void LabeledMatrix::validate(int class_count) const {
  if (!labels) return;
  if (labels->size() != instance_count())
    throw Error("label count " + std::to_string(labels->size()) + " != row count " +
                std::to_string(instance_count()));
  for (std::size_t i = 0; i < labels->size(); ++i) {
    const int y = (*labels)[i];
    if (y < 0 || y >= class_count)
      throw Error("label " + std::to_string(y) + " at row " + std::to_string(i) +
                  " outside [0, " + std::to_string(class_count) + ")");
  }
}

Matrix DomainPair::stacked() const {
  Matrix x(source.values.rows() + target.values.rows(), source.values.cols());
  x.topRows(source.values.rows()) = source.values;
  x.bottomRows(target.values.rows()) = target.values;
  return x;
}

FormatSpec format_for_path(const std::filesystem::path& path, bool has_labels) {
  FormatSpec spec;
  spec.format = lower(path.extension().string()) == ".csv" ? FileFormat::csv : FileFormat::svmlight;
  spec.has_labels = has_labels;
  return spec;
}

LabeledMatrix load_sparse(const std::filesystem::path& path, const FormatSpec& spec) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  LabeledMatrix m = spec.format == FileFormat::csv
                        ? parse_dense_csv(in, spec.has_labels)
                        : parse_svmlight(in, spec.has_labels, spec.min_feature_dim);
  if (spec.format == FileFormat::csv && m.values.cols() < static_cast<Eigen::Index>(spec.min_feature_dim)) {
    Matrix widened = Matrix::Zero(m.values.rows(), static_cast<Eigen::Index>(spec.min_feature_dim));
    widened.leftCols(m.values.cols()) = m.values;
    m.values = std::move(widened);
  }
  return m;
}

LabeledMatrix parse_svmlight(std::istream& in, bool has_labels, std::size_t min_feature_dim) {
  std::vector<Triplet> entries;
  Labels labels;
  std::size_t rows = 0;
  std::size_t dim = min_feature_dim;
  std::string raw;
  std::size_t line_no = 0;
  std::unordered_set<std::size_t> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    bool commented = false;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
      commented = true;
    }
    const auto tokens = split_ws(line);
    // In unlabelled files a blank line is an all-zero instance.
    if (tokens.empty() && (has_labels || commented)) continue;

    std::size_t first = 0;
    if (has_labels) {
      int y = 0;
      if (!parse_label(tokens[0], y)) throw ParseError(line_no, "bad label '" + std::string(tokens[0]) + "'");
      labels.push_back(y);
      first = 1;
    }
    seen.clear();
    for (std::size_t t = first; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw ParseError(line_no, "expected <index>:<value>, got '" + std::string(tok) + "'");
      long long idx = 0;
      if (!parse_integer(tok.substr(0, colon), idx))
        throw ParseError(line_no, "bad feature index in '" + std::string(tok) + "'");
      if (idx < 0) throw ParseError(line_no, "negative feature index " + std::to_string(idx));
      if (idx == 0) throw ParseError(line_no, "feature index 0 (indices are 1-based)");
      double v = 0.0;
      if (!parse_double(tok.substr(colon + 1), v))
        throw ParseError(line_no, "bad feature value in '" + std::string(tok) + "'");
      const auto col = static_cast<std::size_t>(idx - 1);
      if (!seen.insert(col).second)
        throw ParseError(line_no, "duplicate feature index " + std::to_string(idx));
      dim = std::max(dim, col + 1);
      entries.push_back({rows, col, v});
    }
    ++rows;
  }

  LabeledMatrix m;
  m.values = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (const auto& e : entries)
    m.values(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
  if (has_labels) m.labels = std::move(labels);
  return m;
}

LabeledMatrix parse_dense_csv(std::istream& in, bool has_labels) {
  auto table = read_csv_table(in);
  std::erase_if(table, [](const auto& rec) {
    return rec.size() == 1 && trim(rec.front()).empty();
  });

  LabeledMatrix m;
  if (table.empty()) {
    m.values = Matrix(0, 0);
    if (has_labels) m.labels = Labels{};
    return m;
  }

  std::size_t first_data = 0;
  std::optional<std::size_t> label_col;
  const auto& head = table.front();
  const bool is_header = std::any_of(head.begin(), head.end(), [](const std::string& f) {
    double v;
    return !parse_double(trim(f), v);
  });
  if (is_header) {
    first_data = 1;
    for (std::size_t j = 0; j < head.size(); ++j)
      if (lower(trim(head[j])) == "label") label_col = j;
  }
  const std::size_t width = head.size();
  const std::size_t dim = width - (label_col ? 1 : 0);
  const std::size_t rows = table.size() - first_data;
  m.values = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  Labels labels;
  labels.reserve(rows);

  for (std::size_t r = 0; r < rows; ++r) {
    const auto& rec = table[first_data + r];
    const std::size_t line_no = first_data + r + 1;
    if (rec.size() != width)
      throw ParseError(line_no, "expected " + std::to_string(width) + " fields, got " +
                                    std::to_string(rec.size()));
    std::size_t out_col = 0;
    for (std::size_t j = 0; j < width; ++j) {
      const std::string_view field = trim(rec[j]);
      if (label_col && j == *label_col) {
        int y = 0;
        if (!parse_label(field, y)) throw ParseError(line_no, "bad label '" + std::string(field) + "'");
        labels.push_back(y);
        continue;
      }
      double v = 0.0;
      if (field.empty()) {
        v = 0.0;
      } else if (!parse_double(field, v)) {
        throw ParseError(line_no, "bad value '" + std::string(field) + "'");
      }
      m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(out_col++)) = v;
    }
  }
  if (has_labels && label_col) m.labels = std::move(labels);
  return m;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_svmlight(std::ostream& out, const LabeledMatrix& m) {
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    bool first = true;
    if (m.labels) {
      out << (*m.labels)[static_cast<std::size_t>(r)];
      first = false;
    }
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
      const double v = m.values(r, c);
      if (v == 0.0) continue;
      if (!first) out << ' ';
      out << (c + 1) << ':' << format_real(v);
      first = false;
    }
    out << '\n';
  }
}

void write_dense_csv(std::ostream& out, const LabeledMatrix& m) {
  std::vector<std::string> fields;
  if (m.labels) fields.emplace_back("label");
  for (Eigen::Index c = 0; c < m.values.cols(); ++c) fields.push_back("f" + std::to_string(c + 1));
  write_csv_row(out, fields);
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    fields.clear();
    if (m.labels) fields.push_back(std::to_string((*m.labels)[static_cast<std::size_t>(r)]));
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) fields.push_back(format_real(m.values(r, c)));
    write_csv_row(out, fields);
  }
}

void save(const std::filesystem::path& path, const LabeledMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  if (format_for_path(path).format == FileFormat::csv)
    write_dense_csv(out, m);
  else
    write_svmlight(out, m);
}

FeatureSelection select_top_frequent_features(const std::vector<LabeledMatrix>& data,
                                              std::size_t k) {
  if (data.empty()) throw Error("select_top_frequent_features: no matrices");
  const std::size_t dim = data.front().feature_dim();
  for (const auto& m : data)
    if (m.feature_dim() != dim) throw Error("select_top_frequent_features: feature_dim differs");
  if (k == 0) throw Error("select_top_frequent_features: k must be positive");
  if (k > dim)
    throw Error("select_top_frequent_features: k=" + std::to_string(k) + " exceeds feature_dim " +
                std::to_string(dim));

  Vector totals = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& m : data) totals += m.values.colwise().sum().transpose();

  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return totals(static_cast<Eigen::Index>(a)) > totals(static_cast<Eigen::Index>(b));
  });
  order.resize(k);
  std::sort(order.begin(), order.end());

  FeatureSelection sel;
  sel.kept = order;
  for (std::size_t c : order) sel.totals.push_back(totals(static_cast<Eigen::Index>(c)));
  for (const auto& m : data) {
    LabeledMatrix p;
    p.values.resize(m.values.rows(), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j)
      p.values.col(static_cast<Eigen::Index>(j)) = m.values.col(static_cast<Eigen::Index>(order[j]));
    p.labels = m.labels;
    sel.matrices.push_back(std::move(p));
  }
  return sel;
}

DomainPair make_domain_pair(LabeledMatrix source, LabeledMatrix target, int class_count) {
  if (class_count < 1) throw Error("class_count must be at least 1");
  if (!source.labels) throw Error("source domain must be labelled");
  if (source.feature_dim() != target.feature_dim())
    throw Error("feature dimension mismatch: source " + std::to_string(source.feature_dim()) +
                ", target " + std::to_string(target.feature_dim()));
  source.validate(class_count);
  std::vector<bool> present(static_cast<std::size_t>(class_count), false);
  for (int y : *source.labels) present[static_cast<std::size_t>(y)] = true;
  for (int c = 0; c < class_count; ++c)
    if (!present[static_cast<std::size_t>(c)])
      throw Error("source domain has no instance of class " + std::to_string(c));

  DomainPair pair;
  if (target.labels) {
    target.validate(class_count);
    pair.target_truth = std::move(target.labels);
    target.labels.reset();
  }
  pair.source = std::move(source);
  pair.target = std::move(target);
  pair.class_count = class_count;
  return pair;
}

std::vector<int> canonicalize_labels(LabeledMatrix& source, LabeledMatrix& target) {
  if (!source.labels) throw Error("source domain must be labelled");
  const std::set<int> distinct(source.labels->begin(), source.labels->end());
  std::map<int, int> to_class;
  std::vector<int> original;
  for (int v : distinct) {
    to_class.emplace(v, static_cast<int>(original.size()));
    original.push_back(v);
  }
  for (int& y : *source.labels) y = to_class.at(y);
  if (target.labels) {
    for (int& y : *target.labels) {
      const auto it = to_class.find(y);
      if (it == to_class.end())
        throw Error("target label " + std::to_string(y) + " never occurs in the source domain");
      y = it->second;
    }
  }
  return original;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << "\r\n";
}

std::vector<std::vector<std::string>> read_csv_table(std::istream& in) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    table.push_back(std::move(record));
    record.clear();
    any = false;
  };
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      end_record();
    } else if (c == '\n') {
      end_record();
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError(table.size() + 1, "unterminated quoted field");
  if (any) end_record();
  return table;
}

}  // namespace ssrlda
