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

#ifndef ARIANNA_REWRITER_HPP
#define ARIANNA_REWRITER_HPP

#include <string>
#include <vector>

#include "arianna/selection.hpp"

namespace arianna {

struct RerouteEntry {
  std::string member_path;
  std::string member_port;
  std::string shell_port;  // wrapper-derived port on the eFPGA shell
  int width = 0;
};

/// A data port punched through one intermediate module so a member signal
/// can reach the insertion point.
struct PunchSpec {
  std::string via_instance_path;  // instance whose module gets the port
  PortDir dir = PortDir::Input;   // direction on that module
  std::string base_name;          // before collision disambiguation
  int width = 0;
  std::string member_path;
  std::string member_port;
};

struct EfpgaPlan {
  size_t fabric_index = 0;
  std::string shell_module;    // efpga_<i>
  std::string insertion_path;  // LCA of the cluster members
  std::vector<RerouteEntry> reroutes;
  std::vector<PunchSpec> punched;
};

struct RedactionPlan {
  std::vector<EfpgaPlan> efpgas;
};

/// Chooses the insertion point for every selected eFPGA as the lowest
/// common ancestor of its members (a tree makes every ancestor a
/// dominator) and derives the reroute and port-punch structure. Pure; the
/// design is not modified.
RedactionPlan plan_redaction(const Design& design, const Solution& solution,
                             const std::vector<CandidateFabric>& fabrics);

struct RedactedDesign {
  Design design;  // members removed, black-box shells inserted
  std::vector<std::string> shell_modules;       // one per eFPGA, plan order
  std::vector<std::string> redacted_instances;  // sorted union
};

/// Applies the plan on a copy of the design: removes member instances,
/// punches ports along each chain, instantiates the shells at their
/// insertion points, and exposes every shell's configuration ports
/// (prog_clk, scan_in, scan_out, op_clk) as new top-level ports. Shared
/// module definitions are cloned before editing so untouched instances
/// keep their original modules. The result passes validate().
RedactedDesign apply_redaction(const Design& design, const RedactionPlan& plan,
                               const std::vector<CandidateFabric>& fabrics);

/// The simulation model: every shell's body replaced by its cluster's
/// mapped LUT network (scan_out tied low, configuration inputs ignored).
Design bind_configured_shells(const RedactedDesign& redacted,
                              const RedactionPlan& plan,
                              const std::vector<CandidateFabric>& fabrics);

/// Writes <out>/top_redacted.v (reachable modules only), one
/// <out>/efpga_<i>.fabric.json per eFPGA, and <out>/manifest.json.
/// Returns the paths written.
std::vector<std::string> emit_redaction(const RedactedDesign& redacted,
                                        const RedactionPlan& plan,
                                        const std::vector<CandidateFabric>& fabrics,
                                        const std::string& out_dir);

}  // namespace arianna

#endif  // ARIANNA_REWRITER_HPP
