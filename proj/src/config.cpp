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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "ssrlda/pipeline.hpp"

namespace ssrlda {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* b = v.data();
  if (!v.empty() && v.front() == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || b == v.data() + v.size())
    throw Error("config: " + key + " expects a number, got '" + v + "'");
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw Error("config: " + key + " expects an integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw Error("config: " + key + " expects an unsigned integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string s = lower(v);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw Error("config: " + key + " expects a boolean, got '" + v + "'");
}

}  // namespace

void AdaptConfig::validate() const {
  if (layers < 1) throw Error("config: layers must be >= 1");
  if (!(noise >= 0.0 && noise < 1.0)) throw Error("config: noise must lie in [0, 1)");
  if (!(lambda >= 0.0)) throw Error("config: lambda must be >= 0");
  if (!(beta >= 0.0)) throw Error("config: beta must be >= 0");
  if (class_count < 0) throw Error("config: class_count must be >= 0");
  if (!(svm.c > 0.0)) throw Error("config: svm_c must be > 0");
  if (svm.max_iter < 1) throw Error("config: svm_max_iter must be >= 1");
  if (!(svm.tol > 0.0)) throw Error("config: svm_tol must be > 0");
}

AdaptConfig apply_preset(AdaptConfig base, const std::string& name) {
  const std::string n = lower(name);
  if (n == "reuters" || n == "spam") {
    base.lambda = 10.0;
    base.beta = 0.1;
    base.layers = 4;
    base.noise = 0.9;
  } else if (n == "newsgroups" || n == "20newsgroups") {
    base.lambda = 1e-5;
    base.beta = 1000.0;
    base.layers = 4;
    base.noise = 0.9;
  } else if (n == "office" || n == "office-caltech10") {
    base.lambda = 1e-5;
    base.beta = 1.0;
    base.layers = 3;
    base.noise = 0.6;
  } else {
    throw Error("config: unknown preset '" + name + "'");
  }
  return base;
}

void apply_config_value(AdaptConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = lower(trim(raw_key));
  const std::string value = trim(raw_value);
  if (key == "preset") {
    c = apply_preset(c, value);
  } else if (key == "layers" || key == "l") {
    c.layers = static_cast<int>(to_integer(key, value));
  } else if (key == "noise" || key == "p") {
    c.noise = to_double(key, value);
  } else if (key == "lambda") {
    c.lambda = to_double(key, value);
  } else if (key == "beta") {
    c.beta = to_double(key, value);
  } else if (key == "class_count") {
    c.class_count = static_cast<int>(to_integer(key, value));
  } else if (key == "include_raw_features") {
    c.include_raw_features = to_bool(key, value);
  } else if (key == "append_bias") {
    c.append_bias = to_bool(key, value);
  } else if (key == "fast_stacking") {
    c.fast_stacking = to_bool(key, value);
  } else if (key == "normalize") {
    const std::string v = lower(value);
    if (v == "none")
      c.normalize = Normalization::none;
    else if (v == "row_l2")
      c.normalize = Normalization::row_l2;
    else
      throw Error("config: normalize expects none|row_l2, got '" + value + "'");
  } else if (key == "svm_c") {
    c.svm.c = to_double(key, value);
  } else if (key == "svm_max_iter") {
    c.svm.max_iter = static_cast<int>(to_integer(key, value));
  } else if (key == "svm_tol") {
    c.svm.tol = to_double(key, value);
  } else if (key == "seed") {
    c.seed = to_u64(key, value);
  } else {
    throw Error("config: unknown key '" + raw_key + "'");
  }
}

AdaptConfig parse_config(std::istream& in, AdaptConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    try {
      apply_config_value(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  base.validate();
  return base;
}

AdaptConfig load_config(const std::filesystem::path& path, AdaptConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse_config(in, std::move(base));
}

std::string to_string(Normalization n) { return n == Normalization::row_l2 ? "row_l2" : "none"; }

std::map<std::string, std::string> config_entries(const AdaptConfig& c) {
  const auto real = [](double v) { return format_real(v); };
  const auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  return {
      {"layers", std::to_string(c.layers)},
      {"noise", real(c.noise)},
      {"lambda", real(c.lambda)},
      {"beta", real(c.beta)},
      {"class_count", std::to_string(c.class_count)},
      {"include_raw_features", flag(c.include_raw_features)},
      {"append_bias", flag(c.append_bias)},
      {"fast_stacking", flag(c.fast_stacking)},
      {"normalize", to_string(c.normalize)},
      {"svm_c", real(c.svm.c)},
      {"svm_max_iter", std::to_string(c.svm.max_iter)},
      {"svm_tol", real(c.svm.tol)},
      {"seed", std::to_string(c.seed)},
  };
}

void write_config(std::ostream& out, const AdaptConfig& config) {
  for (const auto& [k, v] : config_entries(config)) out << k << '=' << v << '\n';
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::omda_ad: return "omda_ad";
    case Variant::ommda: return "ommda";
  }
  return "full";
}

Variant parse_variant(const std::string& name) {
  const std::string n = lower(name);
  if (n == "full" || n == "ssrlda") return Variant::full;
  if (n == "omda_ad" || n == "omda-ad") return Variant::omda_ad;
  if (n == "ommda") return Variant::ommda;
  throw Error("unknown variant '" + name + "' (full|omda_ad|ommda)");
}

}  // namespace ssrlda
