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

#ifndef ARIANNA_JSON_NETLIST_HPP
#define ARIANNA_JSON_NETLIST_HPP

#include <string>

#include "arianna/netlist.hpp"

namespace arianna {

/// Parses the canonical JSON netlist form. Top-level object:
///   {"top": "...", "modules": {name: {"ports": [...], "gates": [...],
///                                     "instances": [...]}}}
/// Gate pins are single-bit references ("w", "bus[3]"); a DFF lists its
/// clock as a second input. Instance connections map child port names to a
/// net reference, a part select, or an MSB-first array of references.
/// Unknown fields are rejected; the result satisfies all Design invariants.
/// With `standalone` false, validation is deferred so the modules can be
/// merged with other sources before link_design(). See docs/file_formats.md.
Design parse_json_ir(const std::string& source, bool standalone = true);

/// Inverse of parse_json_ir (stable field order, 2-space indent).
std::string write_json_ir(const Design& design);

}  // namespace arianna

#endif  // ARIANNA_JSON_NETLIST_HPP
