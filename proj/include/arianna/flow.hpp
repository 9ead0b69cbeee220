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

#ifndef ARIANNA_FLOW_HPP
#define ARIANNA_FLOW_HPP

#include <string>
#include <vector>

#include "arianna/config.hpp"
#include "arianna/netlist.hpp"
#include "arianna/rewriter.hpp"
#include "arianna/selection.hpp"

namespace arianna {

/// Loads and merges the configured netlist inputs (.v or .json by
/// extension) and validates the result.
Design load_design(const FlowConfig& cfg);

struct FlowResult {
  size_t candidates = 0;
  size_t clusters = 0;
  size_t fabrics = 0;   // DSE survivors
  size_t solutions = 0;
  Solution best;
  std::vector<std::string> files;     // artifacts written under out_dir
  std::vector<std::string> warnings;  // e.g. below secure_min_side
};

/// filter -> cluster -> DSE -> select -> rewrite -> emit. Writes
/// candidates.csv, clusters.csv, dse_heatmap.csv, solutions.csv and the
/// redaction artifacts under cfg.out_dir. Errors surface as
/// FlowError("<phase>", ...). Deterministic for a fixed config and seed,
/// independent of the worker count.
FlowResult run_flow(const FlowConfig& cfg);

struct CompareResult {
  size_t clusters = 0;
  long nk_calls = 0, kn_calls = 0, exhaustive_calls = 0;
  std::vector<std::string> files;
};

/// Runs NK, KN, the exhaustive sweep, and the fixed 4x4 (N=4, K=4)
/// baseline on every cluster; writes compare.csv (per-cluster relative
/// costs), compare_summary.csv, and dse_heatmap.csv (per-(n,k) best-count
/// and relative-cost stats over the exhaustive data).
CompareResult run_compare(const FlowConfig& cfg);

}  // namespace arianna

#endif  // ARIANNA_FLOW_HPP
