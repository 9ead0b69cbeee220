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

#include "arianna/dse.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "arianna/csv.hpp"
#include "arianna/error.hpp"

namespace arianna {

const char* dse_strategy_name(DseStrategy s) {
  switch (s) {
    case DseStrategy::NK: return "nk";
    case DseStrategy::KN: return "kn";
    case DseStrategy::Exhaustive: return "exhaustive";
  }
  return "?";
}

void DseConfig::check() const {
  if (n_min < 1 || n_min > n_max) throw ConfigError("need 1 <= n_min <= n_max");
  if (k_min < 2 || k_min > k_max) throw ConfigError("need 2 <= k_min <= k_max");
  if (max_grid_side < 1) throw ConfigError("max_grid_side must be >= 1");
  at(n_max, k_max).check();
}

namespace {

struct Tracker {
  const FabricOracle& oracle;
  DseOutcome& out;

  const FabricResult& eval(int n, int k) {
    out.evaluations.push_back({n, k, oracle(n, k)});
    out.oracle_calls += 1;
    return out.evaluations.back().result;
  }
};

DseOutcome run_pinned(const FabricOracle& oracle, const DseConfig& cfg,
                      bool n_first) {
  cfg.check();
  DseOutcome out;
  Tracker t{oracle, out};

  // Lower-bound probe: the largest CLB gives the fewest tiles.
  FabricResult cur = t.eval(cfg.n_max, cfg.k_max);
  const int s = cur.grid_side;
  if (s > cfg.max_grid_side) return out;  // cluster unfeasible at this size

  int chosen_n = cfg.n_max;
  int chosen_k = cfg.k_max;
  auto sweep = [&](bool sweep_n) {
    const int lo = sweep_n ? cfg.n_min : cfg.k_min;
    const int hi = sweep_n ? cfg.n_max : cfg.k_max;
    for (int i = 1; i <= hi - lo; ++i) {
      const int v = hi - i;
      const FabricResult& r = sweep_n ? t.eval(v, chosen_k) : t.eval(chosen_n, v);
      if (r.grid_side > s) break;  // keep the previous iteration's value
      (sweep_n ? chosen_n : chosen_k) = v;
      cur = r;
    }
  };
  sweep(n_first);
  sweep(!n_first);

  out.chosen = {cfg.at(chosen_n, chosen_k), cur};
  return out;
}

bool better_exhaustive(const DseEvaluation& a, const DseEvaluation& b) {
  if (a.result.area_estimate != b.result.area_estimate)
    return a.result.area_estimate < b.result.area_estimate;
  if (a.result.grid_side != b.result.grid_side)
    return a.result.grid_side < b.result.grid_side;
  if (a.n != b.n) return a.n < b.n;
  return a.k < b.k;
}

}  // namespace

DseOutcome run_nk(const FabricOracle& oracle, const DseConfig& cfg) {
  if (cfg.strategy != DseStrategy::NK)
    throw ConfigError("run_nk called with a different strategy configured");
  return run_pinned(oracle, cfg, /*n_first=*/true);
}

DseOutcome run_kn(const FabricOracle& oracle, const DseConfig& cfg) {
  if (cfg.strategy != DseStrategy::KN)
    throw ConfigError("run_kn called with a different strategy configured");
  return run_pinned(oracle, cfg, /*n_first=*/false);
}

DseOutcome run_exhaustive(const FabricOracle& oracle, const DseConfig& cfg) {
  if (cfg.strategy != DseStrategy::Exhaustive)
    throw ConfigError("run_exhaustive called with a different strategy configured");
  cfg.check();
  DseOutcome out;

  // (n, k) row-major; parallelism lives at the per-cluster batch level.
  for (int n = cfg.n_min; n <= cfg.n_max; ++n)
    for (int k = cfg.k_min; k <= cfg.k_max; ++k)
      out.evaluations.push_back({n, k, oracle(n, k)});
  out.oracle_calls = static_cast<int>(out.evaluations.size());

  const DseEvaluation* best = nullptr;
  for (const auto& e : out.evaluations) {
    if (e.result.grid_side > cfg.max_grid_side) continue;
    if (!best || better_exhaustive(e, *best)) best = &e;
  }
  if (best) out.chosen = {cfg.at(best->n, best->k), best->result};
  return out;
}

DseOutcome run_dse(const Design& design, const WrapperModule& wrapper,
                   const DseConfig& cfg) {
  FabricOracle oracle = [&](int n, int k) {
    return characterize(design, wrapper, cfg.at(n, k));
  };
  switch (cfg.strategy) {
    case DseStrategy::NK: return run_nk(oracle, cfg);
    case DseStrategy::KN: return run_kn(oracle, cfg);
    case DseStrategy::Exhaustive: return run_exhaustive(oracle, cfg);
  }
  throw ConfigError("unknown DSE strategy");
}

std::vector<DseOutcome> dse_batch_serial(const Design& design,
                                         const std::vector<WrapperModule>& wrappers,
                                         const DseConfig& cfg) {
  std::vector<DseOutcome> out(wrappers.size());
  for (size_t i = 0; i < wrappers.size(); ++i)
    out[i] = run_dse(design, wrappers[i], cfg);
  return out;
}

std::vector<DseOutcome> dse_batch_parallel(const Design& design,
                                           const std::vector<WrapperModule>& wrappers,
                                           const DseConfig& cfg, int workers) {
  std::vector<DseOutcome> out(wrappers.size());
#ifdef _OPENMP
  const int nthreads = workers > 0 ? workers : omp_get_max_threads();
  const long count = static_cast<long>(wrappers.size());
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (long i = 0; i < count; ++i)
    out[static_cast<size_t>(i)] = run_dse(design, wrappers[static_cast<size_t>(i)], cfg);
#else
  (void)workers;
  for (size_t i = 0; i < wrappers.size(); ++i)
    out[i] = run_dse(design, wrappers[i], cfg);
#endif
  return out;
}

std::vector<HeatmapRow> dse_heatmap(const std::vector<DseOutcome>& outcomes) {
  struct Acc {
    int best_count = 0;
    std::vector<double> rels;
  };
  std::map<std::pair<int, int>, Acc> acc;

  for (const auto& oc : outcomes) {
    if (oc.evaluations.empty()) continue;
    const DseEvaluation* best = nullptr;
    for (const auto& e : oc.evaluations)
      if (!best || better_exhaustive(e, *best)) best = &e;
    acc[{best->n, best->k}].best_count += 1;
    for (const auto& e : oc.evaluations)
      acc[{e.n, e.k}].rels.push_back(e.result.area_estimate /
                                     best->result.area_estimate);
  }

  std::vector<HeatmapRow> rows;
  for (const auto& [nk, a] : acc) {
    HeatmapRow row;
    row.n = nk.first;
    row.k = nk.second;
    row.best_count = a.best_count;
    double mean = 0;
    for (double r : a.rels) mean += r;
    mean /= static_cast<double>(a.rels.size());
    double var = 0;
    for (double r : a.rels) var += (r - mean) * (r - mean);
    var /= static_cast<double>(a.rels.size());
    row.mean_relative_cost = mean;
    row.std_relative_cost = std::sqrt(var);
    rows.push_back(row);
  }
  return rows;
}

std::string heatmap_csv(const std::vector<HeatmapRow>& rows) {
  std::string out = "n,k,best_count,mean_relative_cost,std_relative_cost\n";
  for (const auto& r : rows)
    out += std::to_string(r.n) + "," + std::to_string(r.k) + "," +
           std::to_string(r.best_count) + "," + csv_double(r.mean_relative_cost) +
           "," + csv_double(r.std_relative_cost) + "\n";
  return out;
}

}  // namespace arianna
