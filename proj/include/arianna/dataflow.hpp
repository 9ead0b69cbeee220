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

#ifndef ARIANNA_DATAFLOW_HPP
#define ARIANNA_DATAFLOW_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arianna/netlist.hpp"

namespace arianna {

struct FilterParams {
  int max_io = 64;
  std::vector<std::string> selected_outputs;
  int score_threshold = 1;
  std::optional<int> top_k;  // keep only the k best-ranked candidates
};

struct ModuleScore {
  std::string instance_path;
  std::string module;
  int score = 0;    // distinct selected outputs affected
  int io_pins = 0;  // input+output bit count of the module interface
};

/// Top-level output ports transitively driven (combinationally or through
/// DFFs) by any output of the instance at `instance_path`, computed by
/// forward reachability on the flattened connectivity graph.
std::set<std::string> affected_outputs(const Design& design,
                                       const std::string& instance_path);

/// Candidate redaction instances: score >= threshold and io_pins <= max_io,
/// top instance excluded, sorted by descending score, ascending io_pins,
/// then path. Scores come from one backward cone per selected output.
/// Throws NetlistError when a selected output does not name a top-level
/// output port.
std::vector<ModuleScore> filter_modules(const Design& design,
                                        const FilterParams& params);

struct CandidateRow {
  ModuleScore score;
  bool kept = false;
  std::string reason;  // empty when kept
};

/// Per-instance report rows in ranked order (kept first, then dropped).
std::vector<CandidateRow> candidate_report(const Design& design,
                                           const FilterParams& params);

/// CSV: instance_path,module,score,io_pins,kept,reason
std::string candidates_csv(const std::vector<CandidateRow>& rows);

}  // namespace arianna

#endif  // ARIANNA_DATAFLOW_HPP
