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

#ifndef ARIANNA_CONFIG_HPP
#define ARIANNA_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arianna/dataflow.hpp"
#include "arianna/dse.hpp"

namespace arianna {

/// Flow configuration, loaded from a flat YAML file (scalars, inline
/// [a, b] lists, and "- item" blocks; see docs/file_formats.md). Keys match
/// the field names below; unknown keys are rejected.
struct FlowConfig {
  std::vector<std::string> input;  // one or more Verilog/JSON netlists
  std::string top;                 // empty: inferred from the sources
  std::vector<std::string> selected_outputs;

  int max_io = 64;
  int max_efpgas = 2;
  int score_threshold = 1;
  std::optional<int> top_k;

  std::vector<int> n_range{2, 8};
  std::vector<int> k_range{2, 7};
  int max_grid_side = 40;
  int secure_min_side = 0;  // warn when a chosen fabric is smaller

  int io_per_boundary_tile = 4;
  double a_lut = 1.0;
  double a_ff = 6.0;
  double a_xbar = 0.25;
  double a_fixed = 40.0;
  int cut_limit = 8;

  std::string strategy = "nk";  // nk | kn | exhaustive
  uint64_t cluster_cap = 100000;
  std::string out_dir = "out";
  uint64_t seed = 1;
  int workers = 0;  // 0 = available parallelism

  void check() const;
  DseStrategy parsed_strategy() const;
  DseConfig dse_config() const;
  FilterParams filter_params() const;
};

FlowConfig load_flow_config(const std::string& yaml_text);

/// Loads from a file; relative input paths resolve against the config
/// file's directory.
FlowConfig load_flow_config_file(const std::string& path);

}  // namespace arianna

#endif  // ARIANNA_CONFIG_HPP
