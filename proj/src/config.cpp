// Copyright 2026 The ARIANNA Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "arianna/config.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "arianna/error.hpp"

namespace arianna {
namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

std::string strip_comment(const std::string& line) {
  bool in_sq = false, in_dq = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '\'' && !in_dq) in_sq = !in_sq;
    if (c == '"' && !in_sq) in_dq = !in_dq;
    if (c == '#' && !in_sq && !in_dq) return line.substr(0, i);
  }
  return line;
}

// key -> list of values (scalars are 1-element lists)
std::map<std::string, std::vector<std::string>> parse_yaml_subset(
    const std::string& text) {
  std::map<std::string, std::vector<std::string>> out;
  std::istringstream is(text);
  std::string line;
  std::string open_key;  // collecting "- item" entries
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(strip_comment(line));
    if (t.empty()) continue;
    if (t.rfind("- ", 0) == 0 || t == "-") {
      if (open_key.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": list item without a key");
      std::string item = trim(t.substr(1));
      if (item.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": empty list item");
      out[open_key].push_back(unquote(item));
      continue;
    }
    size_t colon = t.find(':');
    if (colon == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key: value");
    std::string key = trim(t.substr(0, colon));
    std::string value = trim(t.substr(colon + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (out.count(key))
      throw ConfigError("duplicate key: " + key);
    if (value.empty()) {
      open_key = key;
      out[key];  // may stay empty; the block items follow
      continue;
    }
    open_key.clear();
    if (value.front() == '[') {
      if (value.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated list");
      std::string body = value.substr(1, value.size() - 2);
      std::vector<std::string> items;
      std::string cur;
      for (char c : body) {
        if (c == ',') {
          items.push_back(unquote(trim(cur)));
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!trim(cur).empty()) items.push_back(unquote(trim(cur)));
      out[key] = std::move(items);
    } else {
      out[key] = {unquote(value)};
    }
  }
  return out;
}

long to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long r = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (...) {
    throw ConfigError(key + ": expected an integer, got \"" + v + "\"");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (...) {
    throw ConfigError(key + ": expected a number, got \"" + v + "\"");
  }
}

}  // namespace

void FlowConfig::check() const {
  if (input.empty()) throw ConfigError("input: at least one netlist required");
  if (selected_outputs.empty())
    throw ConfigError("selected_outputs: at least one output required");
  if (max_io < 1) throw ConfigError("max_io must be >= 1");
  if (max_efpgas < 1) throw ConfigError("max_efpgas must be >= 1");
  if (score_threshold < 0) throw ConfigError("score_threshold must be >= 0");
  if (top_k && *top_k < 1) throw ConfigError("top_k must be >= 1");
  if (n_range.size() != 2 || k_range.size() != 2)
    throw ConfigError("n_range/k_range must be [min, max] pairs");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if (secure_min_side < 0) throw ConfigError("secure_min_side must be >= 0");
  parsed_strategy();
  dse_config().check();  // revalidates range and fabric invariants
}

DseStrategy FlowConfig::parsed_strategy() const {
  if (strategy == "nk") return DseStrategy::NK;
  if (strategy == "kn") return DseStrategy::KN;
  if (strategy == "exhaustive") return DseStrategy::Exhaustive;
  throw ConfigError("strategy must be nk, kn, or exhaustive");
}

DseConfig FlowConfig::dse_config() const {
  DseConfig dc;
  dc.n_min = n_range[0];
  dc.n_max = n_range[1];
  dc.k_min = k_range[0];
  dc.k_max = k_range[1];
  dc.max_grid_side = max_grid_side;
  dc.strategy = parsed_strategy();
  dc.base.io_per_boundary_tile = io_per_boundary_tile;
  dc.base.a_lut = a_lut;
  dc.base.a_ff = a_ff;
  dc.base.a_xbar = a_xbar;
  dc.base.a_fixed = a_fixed;
  dc.base.cut_limit = cut_limit;
  dc.base.n = dc.n_max;
  dc.base.k = dc.k_max;
  return dc;
}

FilterParams FlowConfig::filter_params() const {
  FilterParams fp;
  fp.max_io = max_io;
  fp.selected_outputs = selected_outputs;
  fp.score_threshold = score_threshold;
  fp.top_k = top_k;
  return fp;
}

FlowConfig load_flow_config(const std::string& yaml_text) {
  auto kv = parse_yaml_subset(yaml_text);
  FlowConfig cfg;

  auto take = [&](const char* key) -> std::optional<std::vector<std::string>> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  auto scalar = [&](const char* key) -> std::optional<std::string> {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (v->size() != 1) throw ConfigError(std::string(key) + ": expected a scalar");
    return (*v)[0];
  };
  auto int_field = [&](const char* key, auto& slot) {
    if (auto v = scalar(key)) slot = static_cast<std::decay_t<decltype(slot)>>(to_int(key, *v));
  };
  auto dbl_field = [&](const char* key, double& slot) {
    if (auto v = scalar(key)) slot = to_double(key, *v);
  };

  if (auto v = take("input")) cfg.input = *v;
  if (auto v = scalar("top")) cfg.top = *v;
  if (auto v = take("selected_outputs")) cfg.selected_outputs = *v;
  int_field("max_io", cfg.max_io);
  int_field("max_efpgas", cfg.max_efpgas);
  int_field("score_threshold", cfg.score_threshold);
  if (auto v = scalar("top_k")) cfg.top_k = static_cast<int>(to_int("top_k", *v));
  if (auto v = take("n_range")) {
    cfg.n_range.clear();
    for (const auto& x : *v) cfg.n_range.push_back(static_cast<int>(to_int("n_range", x)));
  }
  if (auto v = take("k_range")) {
    cfg.k_range.clear();
    for (const auto& x : *v) cfg.k_range.push_back(static_cast<int>(to_int("k_range", x)));
  }
  int_field("max_grid_side", cfg.max_grid_side);
  int_field("secure_min_side", cfg.secure_min_side);
  int_field("io_per_boundary_tile", cfg.io_per_boundary_tile);
  dbl_field("a_lut", cfg.a_lut);
  dbl_field("a_ff", cfg.a_ff);
  dbl_field("a_xbar", cfg.a_xbar);
  dbl_field("a_fixed", cfg.a_fixed);
  int_field("cut_limit", cfg.cut_limit);
  if (auto v = scalar("strategy")) cfg.strategy = *v;
  int_field("cluster_cap", cfg.cluster_cap);
  if (auto v = scalar("out_dir")) cfg.out_dir = *v;
  int_field("seed", cfg.seed);
  int_field("workers", cfg.workers);

  if (!kv.empty()) throw ConfigError("unknown config key: " + kv.begin()->first);
  cfg.check();
  return cfg;
}

FlowConfig load_flow_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  FlowConfig cfg = load_flow_config(ss.str());
  // relative inputs resolve against the config file location
  std::filesystem::path dir = std::filesystem::path(path).parent_path();
  for (auto& in : cfg.input) {
    std::filesystem::path p(in);
    if (p.is_relative()) in = (dir / p).string();
  }
  return cfg;
}

}  // namespace arianna
