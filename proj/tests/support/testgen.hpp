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

#ifndef ARIANNA_TESTS_SUPPORT_TESTGEN_HPP
#define ARIANNA_TESTS_SUPPORT_TESTGEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "arianna/dataflow.hpp"
#include "arianna/dse.hpp"
#include "arianna/netlist.hpp"
#include "arianna/rewriter.hpp"
#include "arianna/selection.hpp"

namespace arianna::testgen {

// SplitMix64: tiny, deterministic across platforms.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t bound) { return next() % bound; }
  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
  }
};

struct RandomModuleSpec {
  uint64_t seed = 1;
  int inputs = 8;    // input bits (excluding clk)
  int outputs = 4;   // output bits
  int gates = 40;    // combinational gates
  int dffs = 0;      // registers; > 0 adds a clk port
  std::string name = "m";
};

/// A random acyclic gate module (feedback only through DFFs). The same
/// spec always yields the same module.
ModuleDef random_module(const RandomModuleSpec& spec);

/// Wraps `random_module` in a design: top "t" instantiates it once as u1
/// with pass-through ports, so "t.u1" is a redaction candidate.
Design random_design(const RandomModuleSpec& spec);

/// Eight distinct 8-in/4-out combinational substitution boxes (12 I/O pins
/// each) under one top, every sbox feeding a slice of the 32-bit dout.
/// Mirrors the shape of a triple-DES datapath: 9 tree nodes, 8 leaves.
Design des3_like_design();

/// Verilog text of des3_like_design() (kept in sync via the writer).
std::string des3_like_verilog();

struct EquivalenceOptions {
  int random_vectors = 1000;   // lanes when not exhaustive
  int exhaustive_limit = 12;   // combinational input-bit bound
  int sequential_cycles = 20;
  uint64_t seed = 0x5eed;
};

/// Simulation equivalence between two flattened modules. Inputs of `a`
/// must exist in `b` (extra inputs of `b` are tied low); every output of
/// `a` is compared. Combinational pairs with few inputs are checked
/// exhaustively, everything else on random vectors; sequential pairs run
/// multi-cycle random streams. Clock ports are driven by the cycle count,
/// not data. Returns false and fills `why` on the first mismatch.
bool simulation_equivalent(const ModuleDef& a, const ModuleDef& b,
                           const EquivalenceOptions& opts = {},
                           std::string* why = nullptr);

/// filter -> cluster -> DSE -> select -> plan -> apply composed in memory,
/// keeping every intermediate the end-to-end checks need.
struct RedactionBundle {
  std::vector<CandidateFabric> fabrics;
  Solution best;
  RedactionPlan plan;
  RedactedDesign redacted;
};

RedactionBundle redact_design(const Design& design, const FilterParams& fp,
                              const DseConfig& dc, int max_efpgas);

/// Original vs configured-redacted equivalence on the original interface.
bool redaction_preserves_function(const Design& original,
                                  const RedactionBundle& bundle,
                                  const EquivalenceOptions& opts = {},
                                  std::string* why = nullptr);

}  // namespace arianna::testgen

#endif  // ARIANNA_TESTS_SUPPORT_TESTGEN_HPP
