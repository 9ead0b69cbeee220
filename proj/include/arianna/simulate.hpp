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

#ifndef ARIANNA_SIMULATE_HPP
#define ARIANNA_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "arianna/netlist.hpp"

namespace arianna {

/// One cycle of stimulus or response: value_of[port][bit], LSB first.
using BitVector = std::vector<uint8_t>;
struct CycleValues {
  std::vector<BitVector> ports;
};

/// Word-parallel gate-level simulator over a flattened (gates-only) module.
/// Each net carries a 64-bit word: bit L is lane L, so 64 independent
/// stimuli evaluate per pass. DFFs power up at 0. One step() is one clock
/// cycle: outputs reflect inputs and pre-step state, then all DFFs latch.
/// Values driven onto clock nets are ignored; the cycle count is the clock.
class Simulator {
 public:
  explicit Simulator(const ModuleDef& flat_module);

  void reset();
  void set_input_word(const std::string& port, int bit, uint64_t word);
  uint64_t get_word(const std::string& port, int bit) const;
  uint64_t net_word(NetId net) const { return values_[net]; }

  /// Combinational evaluation only (no state update).
  void eval();
  /// eval() followed by the simultaneous DFF update.
  void step();

  int dff_count() const { return static_cast<int>(dffs_.size()); }
  bool is_sequential() const { return !dffs_.empty(); }

 private:
  const ModuleDef& m_;
  std::vector<uint32_t> order_;       // combinational gates, topo order
  std::vector<uint32_t> dffs_;        // gate indices
  std::vector<uint64_t> values_;      // per net
};

/// Cycle-accurate reference entry point: feeds one stimulus vector per
/// cycle and returns the sampled outputs for each cycle. Stimulus vectors
/// must match the input ports of `flat_module` in declaration order.
/// Throws NetlistError on width mismatch.
std::vector<CycleValues> simulate(const ModuleDef& flat_module,
                                  const std::vector<CycleValues>& stimulus);

/// Nets that feed only DFF clock pins. Stimulus on these carries no data.
std::vector<NetId> clock_nets(const ModuleDef& flat_module);

/// Verifies every DFF clock pin traces back (through BUFs) to an undriven
/// source — an input port bit. Throws on logic-driven (gated) clocks.
/// Returns the distinct source nets.
std::vector<NetId> clock_sources(const ModuleDef& flat_module);

/// clock_sources plus the whole-design restriction: throws
/// NetlistError("multi-clock design is unsupported") when more than one
/// distinct source exists. Wrappers are exempt from this check; each member
/// contributes its own clock pin that the enclosing design ties together.
void check_single_clock(const ModuleDef& flat_module);

}  // namespace arianna

#endif  // ARIANNA_SIMULATE_HPP
