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

#ifndef ARIANNA_CLUSTERING_HPP
#define ARIANNA_CLUSTERING_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "arianna/dataflow.hpp"
#include "arianna/netlist.hpp"

namespace arianna {

/// A hierarchy-independent set of candidate instances redacted into one
/// eFPGA. `id` is the canonical identifier: sorted member paths joined
/// with '+'.
struct Cluster {
  std::vector<std::string> members;  // sorted instance paths
  int aggregate_io = 0;              // sum of member io_pins
  std::string id;
};

Cluster make_cluster(const Design& design, const InstanceTree& tree,
                     std::vector<std::string> members);

/// True iff no ancestor-descendant pair exists among members and the
/// aggregate I/O is within max_io.
bool is_valid_cluster(const Design& design, const InstanceTree& tree,
                      const std::vector<std::string>& members, int max_io);

/// Fixed-point recombination: starts from singleton clusters and unions
/// pairs until no new valid cluster appears; the result is exactly the set
/// of valid non-empty subsets of `candidates`, deduplicated by id and
/// sorted by id. Throws FlowError("cluster", ...) when the count exceeds
/// `cap`.
std::vector<Cluster> identify_clusters(const Design& design,
                                       const InstanceTree& tree,
                                       const std::vector<ModuleScore>& candidates,
                                       int max_io, size_t cap = 100000);

struct WrapperPortMapEntry {
  std::string member_path;
  std::string member_port;
  std::string wrapper_port;  // same width and direction
};

/// Shell module instantiating every cluster member and exposing the union
/// of their I/Os; no logic beyond instances and wires. Member ports map to
/// wrapper ports named <flattened-instance-path>_<port>; a collision after
/// prefixing throws NetlistError.
struct WrapperModule {
  ModuleDef def;
  std::vector<WrapperPortMapEntry> port_map;
};

WrapperModule build_wrapper(const Design& design, const Cluster& cluster);

/// CSV: cluster_id,member_count,aggregate_io
std::string clusters_csv(const std::vector<Cluster>& clusters);

}  // namespace arianna

#endif  // ARIANNA_CLUSTERING_HPP
