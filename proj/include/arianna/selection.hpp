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

#ifndef ARIANNA_SELECTION_HPP
#define ARIANNA_SELECTION_HPP

#include <string>
#include <vector>

#include "arianna/clustering.hpp"
#include "arianna/dse.hpp"
#include "arianna/fabric.hpp"

namespace arianna {

/// One DSE survivor: a cluster with its wrapper and tailored fabric.
struct CandidateFabric {
  Cluster cluster;
  WrapperModule wrapper;
  FabricParams params;
  FabricResult result;
};

/// Normalization maxima taken over the candidate set being ranked.
struct FabricScoreContext {
  double max_io_util = 0.0;
  double max_clb_util = 0.0;
};

FabricScoreContext make_score_context(const std::vector<CandidateFabric>& fabrics);

/// T_f = (MaxIOUtil - IOUtil)/MaxIOUtil + (MaxCLBUtil - CLBUtil)/MaxCLBUtil.
/// Zero for a fully utilized fabric; lower is better. Throws NetlistError
/// on zero maxima (degenerate candidate set).
double score_fabric(const FabricResult& result, const FabricScoreContext& ctx);

struct Solution {
  std::vector<size_t> fabrics;  // indices into the candidate list, ascending
  std::vector<std::string> redacted_instances;  // union of members, sorted
  // filled by rank_and_select
  double total_score = 0.0;
  double mean_score = 0.0;
  double total_area = 0.0;
};

/// Every non-empty, instance-disjoint subset of the candidates with at most
/// max_efpgas members, grown branch-and-bound style from the empty working
/// solution. Result is sorted by (size, indices) for reproducibility.
std::vector<Solution> enumerate_solutions(const std::vector<CandidateFabric>& fabrics,
                                          int max_efpgas);

/// Ranking key: (1) minimal mean per-fabric T, (2) maximal count of
/// redacted instances, (3) minimal summed area estimate, (4) smallest
/// joined cluster-id string. Fills the score fields of every solution and
/// returns the winner. Throws NetlistError on an empty set.
Solution rank_and_select(std::vector<Solution>& solutions,
                         const std::vector<CandidateFabric>& fabrics,
                         const FabricScoreContext& ctx);

/// CSV: rank,clusters,n,k,grid_side,clb_util,io_util,mean_T,area,
/// bitstream_bits — multi-fabric fields ';'-joined, best solution first.
std::string solutions_csv(const std::vector<Solution>& ranked,
                          const std::vector<CandidateFabric>& fabrics);

}  // namespace arianna

#endif  // ARIANNA_SELECTION_HPP
