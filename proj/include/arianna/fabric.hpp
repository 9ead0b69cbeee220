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

#ifndef ARIANNA_FABRIC_HPP
#define ARIANNA_FABRIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "arianna/clustering.hpp"
#include "arianna/netlist.hpp"

namespace arianna {

/// CLB architecture parameters. The CLB input count follows
/// I = ceil(K*(N+1)/2), the sizing rule that gives fully-connected local
/// routing good utilization; I/O capacity is one boundary ring of
/// 4*W*io_per_boundary_tile pads, so a 4x4 grid carries 64 pins with the
/// defaults.
struct FabricParams {
  int n = 4;  // BLEs per CLB
  int k = 4;  // LUT input size

  int io_per_boundary_tile = 4;

  // area model constants (dimensionless model units)
  double a_lut = 1.0;
  double a_ff = 6.0;
  double a_xbar = 0.25;
  double a_fixed = 40.0;

  int cut_limit = 8;  // priority cuts kept per node

  int clb_inputs() const { return (k * (n + 1) + 1) / 2; }
  int io_capacity(int grid_side) const {
    return 4 * grid_side * io_per_boundary_tile;
  }
  /// a_lut*n*2^k + a_ff*n + a_xbar*(i+n)*n*k + a_fixed; strictly
  /// increasing in both n and k.
  double tile_area() const;
  void check() const;  // n >= 1, k in [2, 12], positive constants
};

struct LutNode {
  std::vector<NetId> inputs;    // <= k nets, sorted
  std::vector<uint64_t> truth;  // 2^k bits; unused positions replicate
  NetId output = kNoNet;
  bool is_sequential = false;   // its BLE registers the output
  NetId ble_output = kNoNet;    // Q net when is_sequential

  bool truth_bit(uint64_t idx) const {
    return (truth[idx >> 6] >> (idx & 63)) & 1;
  }
  void set_truth_bit(uint64_t idx, bool v) {
    if (v) truth[idx >> 6] |= 1ull << (idx & 63);
  }
};

struct MappedFf {
  NetId d = kNoNet;
  NetId q = kNoNet;
  NetId clock = kNoNet;
  bool merged = false;  // shares a BLE with the LUT driving d
};

struct MappedNetwork {
  int k = 0;
  std::vector<LutNode> luts;
  std::vector<MappedFf> ffs;
  struct Alias { NetId from, to; };
  std::vector<Alias> aliases;  // feed-throughs (to := from)
  struct Constant { NetId net; bool value; };
  std::vector<Constant> constants;
  // Names for every net the LUTs reference. Mapping at k=2 first lowers
  // MUX2 gates to 2-input logic, which appends nets beyond the input
  // module's; this vector always covers them.
  std::vector<std::string> net_names;
};

/// MUX2 gates rewritten as AND/OR/NOT so every node has at most 2 inputs.
/// Existing net ids are preserved; decomposition nets are appended.
ModuleDef lower_wide_gates(const ModuleDef& flat);

/// K-feasible cover of the combinational logic of a flattened module by
/// priority-cut enumeration with area-flow selection. DFFs are preserved;
/// BUF chains collapse into aliases; simulating the result equals
/// simulating the input gates.
MappedNetwork map_to_luts(const ModuleDef& flat, int k, int cut_limit = 8);

struct PackResult {
  // Each group is one CLB holding BLE unit ids. Units are numbered LUTs
  // first (index into luts), then unmerged FFs (luts.size() + ff position).
  std::vector<std::vector<int>> groups;
  int clb_count() const { return static_cast<int>(groups.size()); }
};

/// Greedy seed-and-grow packing into CLBs of at most n BLEs whose distinct
/// external data inputs stay within clb_inputs(). Clock nets ride the
/// global spine and do not consume CLB input pins.
PackResult pack_clbs(const MappedNetwork& net, const FabricParams& params);

/// Minimal grid side W with W^2 >= max(clb_count, 1) and
/// io_capacity(W) >= io_used. Requires io_used >= 1.
int size_grid(int clb_count, int io_used, const FabricParams& params);

struct FabricResult {
  FabricParams params;
  int lut_count = 0;
  int ff_count = 0;
  int clb_count = 0;
  int grid_side = 0;
  int io_used = 0;
  double clb_util = 0.0;
  double io_util = 0.0;
  double area_estimate = 0.0;
  uint64_t bitstream_bits = 0;
  MappedNetwork network;
  PackResult packing;
};

/// The deterministic stand-in for an external fabric characterization run:
/// map -> pack -> size the square grid, then fill utilizations, the area
/// estimate, and the bitstream size (LUT content plus per-CLB crossbar
/// select bits).
FabricResult characterize(const Design& design, const WrapperModule& wrapper,
                          const FabricParams& params);

/// The mapped network rendered back as a plain gate module with the same
/// interface as `flat_iface` (ports and port bit names). This is the
/// simulation model of a configured fabric.
ModuleDef build_lut_module(const MappedNetwork& net, const ModuleDef& flat_iface,
                           const std::string& name);

/// Fabric spec JSON: params, counts, utilizations, per-LUT truth tables in
/// hex, packing groups.
std::string fabric_json(const FabricResult& result);

}  // namespace arianna

#endif  // ARIANNA_FABRIC_HPP
