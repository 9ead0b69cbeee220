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

#ifndef ARIANNA_DSE_HPP
#define ARIANNA_DSE_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "arianna/fabric.hpp"

namespace arianna {

enum class DseStrategy { NK, KN, Exhaustive };

const char* dse_strategy_name(DseStrategy s);

struct DseConfig {
  int n_min = 2, n_max = 8;
  int k_min = 2, k_max = 7;
  int max_grid_side = 40;  // S: fabrics needing a larger grid are discarded
  DseStrategy strategy = DseStrategy::NK;
  FabricParams base;  // pad/area/cut-limit settings shared by all points

  void check() const;
  FabricParams at(int n, int k) const {
    FabricParams p = base;
    p.n = n;
    p.k = k;
    return p;
  }
};

struct DseEvaluation {
  int n = 0, k = 0;
  FabricResult result;
};

struct DseOutcome {
  std::optional<std::pair<FabricParams, FabricResult>> chosen;
  std::vector<DseEvaluation> evaluations;  // every oracle call, in order
  int oracle_calls = 0;
};

/// Characterization callback; production code wraps characterize(), tests
/// substitute synthetic landscapes.
using FabricOracle = std::function<FabricResult(int n, int k)>;

/// NK heuristic: probe (n_max, k_max) for the grid-side lower bound s;
/// give up when s exceeds max_grid_side; otherwise walk N down while the
/// grid side stays s (keeping the last value before an increase), then walk
/// K down the same way at the chosen N.
DseOutcome run_nk(const FabricOracle& oracle, const DseConfig& cfg);

/// KN heuristic: the same search with the K sweep first, then N at the
/// chosen K.
DseOutcome run_kn(const FabricOracle& oracle, const DseConfig& cfg);

/// Full (n, k) grid; chooses the feasible point minimizing area_estimate,
/// ties broken by smaller grid side, then smaller n, then smaller k.
DseOutcome run_exhaustive(const FabricOracle& oracle, const DseConfig& cfg);

/// Dispatch by cfg.strategy against the real fabric oracle.
DseOutcome run_dse(const Design& design, const WrapperModule& wrapper,
                   const DseConfig& cfg);

/// Per-cluster DSE over many wrappers: the serial reference and the
/// OpenMP-parallel driver. Both produce identical results; the parallel
/// driver distributes clusters across `workers` threads (0 = all cores).
std::vector<DseOutcome> dse_batch_serial(const Design& design,
                                         const std::vector<WrapperModule>& wrappers,
                                         const DseConfig& cfg);
std::vector<DseOutcome> dse_batch_parallel(const Design& design,
                                           const std::vector<WrapperModule>& wrappers,
                                           const DseConfig& cfg, int workers = 0);

/// Per-(n, k) aggregate over a set of DSE outcomes: how often the point is
/// the in-range optimum and its cost relative to each outcome's best.
struct HeatmapRow {
  int n = 0, k = 0;
  int best_count = 0;
  double mean_relative_cost = 0.0;
  double std_relative_cost = 0.0;  // population deviation
};

std::vector<HeatmapRow> dse_heatmap(const std::vector<DseOutcome>& outcomes);

/// CSV: n,k,best_count,mean_relative_cost,std_relative_cost
std::string heatmap_csv(const std::vector<HeatmapRow>& rows);

}  // namespace arianna

#endif  // ARIANNA_DSE_HPP
