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

#ifndef ARIANNA_VERILOG_HPP
#define ARIANNA_VERILOG_HPP

#include <string>

#include "arianna/netlist.hpp"

namespace arianna {

/// Parses the supported structural/RTL Verilog subset and elaborates every
/// assign and always block into primitive gates (bit-blasted). The subset:
/// module declarations (ANSI and non-ANSI port lists), wire/reg declarations,
/// continuous assigns with bitwise/logical/reduction/ternary/comparison/
/// concat/slice/replication operators, module instantiation (named or
/// positional), and single-clock `always @(posedge clk)` non-blocking FF
/// inference with if/else. See docs/verilog_subset.md for the full grammar
/// and the unsupported-construct list. `top` selects the top module; empty
/// picks the unique uninstantiated module.
Design parse_verilog(const std::string& source, const std::string& top = "");

/// Parses module definitions only, leaving positional connections
/// unresolved and the design unvalidated — the multi-file path. Merge the
/// pieces and finish with link_design().
Design parse_verilog_modules(const std::string& source);

/// Resolves positional connections, sets (or infers) the top module, and
/// validates the result.
void link_design(Design& design, const std::string& top);

/// Emits a design in the supported subset: every gate as a continuous
/// assign, DFFs as single-clock always blocks, black boxes as empty module
/// shells. Output parses back to a structurally equal design.
std::string write_verilog(const Design& design);

}  // namespace arianna

#endif  // ARIANNA_VERILOG_HPP
