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

#include "arianna/selection.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "arianna/csv.hpp"
#include "arianna/error.hpp"

namespace arianna {

FabricScoreContext make_score_context(const std::vector<CandidateFabric>& fabrics) {
  FabricScoreContext ctx;
  for (const auto& f : fabrics) {
    ctx.max_io_util = std::max(ctx.max_io_util, f.result.io_util);
    ctx.max_clb_util = std::max(ctx.max_clb_util, f.result.clb_util);
  }
  return ctx;
}

double score_fabric(const FabricResult& result, const FabricScoreContext& ctx) {
  if (ctx.max_io_util <= 0.0 || ctx.max_clb_util <= 0.0)
    throw NetlistError("degenerate score context (zero utilization maxima)");
  return (ctx.max_io_util - result.io_util) / ctx.max_io_util +
         (ctx.max_clb_util - result.clb_util) / ctx.max_clb_util;
}

namespace {

// Redacting an instance implicitly redacts its whole subtree, so two
// clusters overlap when any cross pair of members is equal or
// ancestor-related (dot-boundary path prefix).
bool paths_overlap(const std::string& a, const std::string& b) {
  if (a == b) return true;
  const std::string& shorter = a.size() < b.size() ? a : b;
  const std::string& longer = a.size() < b.size() ? b : a;
  return longer.size() > shorter.size() &&
         longer.compare(0, shorter.size(), shorter) == 0 &&
         longer[shorter.size()] == '.';
}

bool clusters_conflict(const Cluster& a, const Cluster& b) {
  for (const auto& x : a.members)
    for (const auto& y : b.members)
      if (paths_overlap(x, y)) return true;
  return false;
}

}  // namespace

std::vector<Solution> enumerate_solutions(const std::vector<CandidateFabric>& fabrics,
                                          int max_efpgas) {
  if (max_efpgas < 1) throw ConfigError("max_efpgas must be >= 1");

  std::vector<std::vector<bool>> conflict(fabrics.size(),
                                          std::vector<bool>(fabrics.size(), false));
  for (size_t i = 0; i < fabrics.size(); ++i)
    for (size_t j = i + 1; j < fabrics.size(); ++j)
      conflict[i][j] = conflict[j][i] =
          clusters_conflict(fabrics[i].cluster, fabrics[j].cluster);

  std::set<std::string> universe;
  for (const auto& f : fabrics)
    universe.insert(f.cluster.members.begin(), f.cluster.members.end());
  const size_t total_instances = universe.size();
  // Guard against runaway subset growth on pathological inputs.
  constexpr size_t kSolutionCap = 2000000;

  std::vector<Solution> result;
  std::vector<size_t> stack;

  auto emit = [&]() {
    Solution s;
    s.fabrics = stack;
    std::set<std::string> inst;
    for (size_t fi : stack)
      inst.insert(fabrics[fi].cluster.members.begin(),
                  fabrics[fi].cluster.members.end());
    s.redacted_instances.assign(inst.begin(), inst.end());
    result.push_back(std::move(s));
    if (result.size() > kSolutionCap)
      throw FlowError("select", "solution count exceeds " +
                                    std::to_string(kSolutionCap) +
                                    "; lower max_efpgas or tighten filtering");
  };

  size_t used_count = 0;
  auto grow = [&](auto&& self, size_t first) -> void {
    if (static_cast<int>(stack.size()) == max_efpgas ||
        used_count == total_instances) {
      return;  // terminal: at the eFPGA limit or everything redacted
    }
    for (size_t fi = first; fi < fabrics.size(); ++fi) {
      bool ok = true;
      for (size_t sel : stack)
        if (conflict[sel][fi]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      stack.push_back(fi);
      size_t saved_count = used_count;
      used_count += fabrics[fi].cluster.members.size();
      emit();
      self(self, fi + 1);
      used_count = saved_count;
      stack.pop_back();
    }
  };
  grow(grow, 0);

  std::sort(result.begin(), result.end(), [](const Solution& a, const Solution& b) {
    if (a.fabrics.size() != b.fabrics.size())
      return a.fabrics.size() < b.fabrics.size();
    return a.fabrics < b.fabrics;
  });
  return result;
}

Solution rank_and_select(std::vector<Solution>& solutions,
                         const std::vector<CandidateFabric>& fabrics,
                         const FabricScoreContext& ctx) {
  if (solutions.empty()) throw NetlistError("rank_and_select: empty solution set");

  std::vector<double> fabric_score(fabrics.size());
  for (size_t i = 0; i < fabrics.size(); ++i)
    fabric_score[i] = score_fabric(fabrics[i].result, ctx);

  auto id_key = [&](const Solution& s) {
    std::string key;
    for (size_t fi : s.fabrics) {
      if (!key.empty()) key += '|';
      key += fabrics[fi].cluster.id;
    }
    return key;
  };

  for (auto& s : solutions) {
    s.total_score = 0;
    s.total_area = 0;
    for (size_t fi : s.fabrics) {
      s.total_score += fabric_score[fi];
      s.total_area += fabrics[fi].result.area_estimate;
    }
    s.mean_score = s.total_score / static_cast<double>(s.fabrics.size());
  }

  auto better = [&](const Solution& a, const Solution& b) {
    if (a.mean_score != b.mean_score) return a.mean_score < b.mean_score;
    if (a.redacted_instances.size() != b.redacted_instances.size())
      return a.redacted_instances.size() > b.redacted_instances.size();
    if (a.total_area != b.total_area) return a.total_area < b.total_area;
    return id_key(a) < id_key(b);
  };
  std::sort(solutions.begin(), solutions.end(), better);
  return solutions.front();
}

std::string solutions_csv(const std::vector<Solution>& ranked,
                          const std::vector<CandidateFabric>& fabrics) {
  std::string out =
      "rank,clusters,n,k,grid_side,clb_util,io_util,mean_T,area,bitstream_bits\n";
  int rank = 1;
  for (const auto& s : ranked) {
    std::string clusters, ns, ks, ws, clbs, ios, bits;
    for (size_t i = 0; i < s.fabrics.size(); ++i) {
      const auto& f = fabrics[s.fabrics[i]];
      const char* sep = i ? ";" : "";
      clusters += sep + f.cluster.id;
      ns += sep + std::to_string(f.params.n);
      ks += sep + std::to_string(f.params.k);
      ws += sep + std::to_string(f.result.grid_side);
      clbs += sep + csv_double(f.result.clb_util, 4);
      ios += sep + csv_double(f.result.io_util, 4);
      bits += sep + std::to_string(f.result.bitstream_bits);
    }
    out += std::to_string(rank++) + "," + csv_escape(clusters) + "," + ns + "," +
           ks + "," + ws + "," + clbs + "," + ios + "," + csv_double(s.mean_score) +
           "," + csv_double(s.total_area) + "," + bits + "\n";
  }
  return out;
}

}  // namespace arianna
