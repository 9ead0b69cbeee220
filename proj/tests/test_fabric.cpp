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

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "arianna/error.hpp"
#include "arianna/fabric.hpp"
#include "arianna/json_netlist.hpp"
#include "arianna/verilog.hpp"
#include "testgen.hpp"

using namespace arianna;

namespace {

// Exhaustive minimum-LUT cover for tiny networks: try every subset of
// combinational gates as LUT roots, smallest first; a subset works when
// every output/DFF root resolves to a chosen gate (or a PI) and every
// chosen gate has a k-feasible cut whose leaves are PIs, DFF outputs, or
// outputs of other chosen gates.
int min_lut_cover_oracle(const ModuleDef& flat, int k) {
  std::vector<int> driver(flat.net_names.size(), -1);
  for (size_t i = 0; i < flat.gates.size(); ++i)
    driver[flat.gates[i].output] = static_cast<int>(i);

  std::function<NetId(NetId)> rep = [&](NetId n) -> NetId {
    int d = driver[n];
    if (d >= 0 && flat.gates[static_cast<size_t>(d)].kind == GateKind::Buf)
      return rep(flat.gates[static_cast<size_t>(d)].inputs[0]);
    return n;
  };
  auto is_const = [&](NetId n) {
    int d = driver[n];
    return d >= 0 && (flat.gates[static_cast<size_t>(d)].kind == GateKind::Const0 ||
                      flat.gates[static_cast<size_t>(d)].kind == GateKind::Const1);
  };

  std::vector<uint32_t> comb;
  for (uint32_t i = 0; i < flat.gates.size(); ++i) {
    GateKind kind = flat.gates[i].kind;
    if (kind != GateKind::Dff && kind != GateKind::Buf && kind != GateKind::Const0 &&
        kind != GateKind::Const1)
      comb.push_back(i);
  }
  REQUIRE(comb.size() <= 16);

  std::vector<NetId> roots;
  for (const auto& p : flat.ports)
    if (p.dir == PortDir::Output)
      for (NetId n : flat.port_bits.at(p.name)) roots.push_back(rep(n));
  for (const auto& g : flat.gates)
    if (g.kind == GateKind::Dff) roots.push_back(rep(g.inputs[0]));

  // all k-feasible cuts per comb gate (unbounded enumeration)
  std::map<uint32_t, std::vector<std::set<NetId>>> cuts;
  std::function<std::vector<std::set<NetId>>(NetId)> net_cuts =
      [&](NetId raw) -> std::vector<std::set<NetId>> {
    NetId n = rep(raw);
    if (is_const(n)) return {{}};
    int d = driver[n];
    std::vector<std::set<NetId>> out;
    if (d >= 0 && flat.gates[static_cast<size_t>(d)].kind != GateKind::Dff) {
      for (const auto& c : cuts.at(static_cast<uint32_t>(d))) out.push_back(c);
    }
    out.push_back({n});
    return out;
  };
  for (uint32_t gi : topo_order(flat)) {
    const Gate& g = flat.gates[gi];
    if (std::find(comb.begin(), comb.end(), gi) == comb.end()) continue;
    std::vector<std::set<NetId>> result{{}};
    for (NetId in : g.inputs) {
      std::vector<std::set<NetId>> next;
      for (const auto& a : result)
        for (const auto& b : net_cuts(in)) {
          std::set<NetId> u = a;
          u.insert(b.begin(), b.end());
          if (static_cast<int>(u.size()) <= k) next.push_back(std::move(u));
        }
      result = std::move(next);
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    cuts[gi] = std::move(result);
  }

  const size_t ncomb = comb.size();
  for (size_t size = 0; size <= ncomb; ++size) {
    for (uint64_t mask = 0; mask < (1ull << ncomb); ++mask) {
      if (static_cast<size_t>(__builtin_popcountll(mask)) != size) continue;
      std::set<NetId> lut_outs;
      std::set<uint32_t> chosen;
      for (size_t i = 0; i < ncomb; ++i)
        if (mask & (1ull << i)) {
          chosen.insert(comb[i]);
          lut_outs.insert(flat.gates[comb[i]].output);
        }
      auto ok_leaf = [&](NetId n) {
        if (lut_outs.count(n)) return true;
        int d = driver[n];
        return d < 0 || flat.gates[static_cast<size_t>(d)].kind == GateKind::Dff;
      };
      bool ok = true;
      for (NetId r : roots) {
        int d = driver[r];
        bool root_ok = lut_outs.count(r) || d < 0 || is_const(r) ||
                       flat.gates[static_cast<size_t>(d)].kind == GateKind::Dff;
        if (!root_ok) ok = false;
      }
      for (uint32_t gi : chosen) {
        if (!ok) break;
        bool has_cut = false;
        for (const auto& c : cuts.at(gi)) {
          bool all = true;
          for (NetId l : c)
            if (!ok_leaf(l)) all = false;
          if (all) {
            has_cut = true;
            break;
          }
        }
        if (!has_cut) ok = false;
      }
      if (ok) return static_cast<int>(size);
    }
  }
  return static_cast<int>(ncomb);
}

WrapperModule wrap_whole(const Design& d, const std::string& inst_path) {
  InstanceTree tree = d.instance_tree();
  return build_wrapper(d, make_cluster(d, tree, {inst_path}));
}

// Exact minimum CLB count by enumerating set partitions (<= 8 units).
int min_pack_oracle(const MappedNetwork& net, const FabricParams& params) {
  struct Unit {
    std::vector<NetId> in;
    NetId out;
  };
  std::vector<Unit> units;
  for (const auto& lut : net.luts)
    units.push_back({lut.inputs, lut.is_sequential ? lut.ble_output : lut.output});
  for (const auto& ff : net.ffs)
    if (!ff.merged) units.push_back({{ff.d}, ff.q});
  const size_t n = units.size();
  REQUIRE(n <= 8);
  if (n == 0) return 0;

  auto feasible = [&](const std::vector<int>& group) {
    if (static_cast<int>(group.size()) > params.n) return false;
    std::set<NetId> produced, needed;
    for (int u : group) {
      produced.insert(units[static_cast<size_t>(u)].out);
      needed.insert(units[static_cast<size_t>(u)].in.begin(),
                    units[static_cast<size_t>(u)].in.end());
    }
    int ext = 0;
    for (NetId x : needed)
      if (!produced.count(x)) ++ext;
    return ext <= params.clb_inputs();
  };

  int best = static_cast<int>(n);
  std::vector<std::vector<int>> groups;
  std::function<void(size_t)> rec = [&](size_t u) {
    if (static_cast<int>(groups.size()) >= best) return;
    if (u == n) {
      best = std::min<int>(best, static_cast<int>(groups.size()));
      return;
    }
    for (auto& g : groups) {
      g.push_back(static_cast<int>(u));
      if (feasible(g)) rec(u + 1);
      g.pop_back();
    }
    groups.push_back({static_cast<int>(u)});
    rec(u + 1);
    groups.pop_back();
  };
  rec(0);
  return best;
}

MappedNetwork synthetic_luts(const std::vector<std::vector<NetId>>& input_sets) {
  MappedNetwork net;
  net.k = 4;
  NetId out = 1000;
  for (const auto& ins : input_sets) {
    LutNode lut;
    lut.inputs = ins;
    lut.truth.assign(1, 0x6996ull);
    lut.output = out++;
    net.luts.push_back(std::move(lut));
  }
  return net;
}

}  // namespace

TEST_CASE("fabric parameter arithmetic: I rule, capacity, tile area") {
  FabricParams p;
  p.n = 4;
  p.k = 4;
  CHECK(p.clb_inputs() == 10);  // 4*5/2
  CHECK(p.io_capacity(4) == 64);
  p.k = 3;
  CHECK(p.clb_inputs() == 8);  // ceil(15/2)
  // strictly increasing in n and k
  for (int n = 1; n <= 8; ++n)
    for (int k = 2; k <= 7; ++k) {
      FabricParams a;
      a.n = n;
      a.k = k;
      FabricParams bn = a, bk = a;
      bn.n = n + 1;
      bk.k = k + 1;
      CHECK(bn.tile_area() > a.tile_area());
      CHECK(bk.tile_area() > a.tile_area());
    }
}

TEST_CASE("single XOR maps to one LUT with don't-care padding") {
  Design d = parse_verilog(
      "module x2(input a, input b, output y); assign y = a ^ b; endmodule");
  auto flat = flatten(d, "x2");
  MappedNetwork net = map_to_luts(flat.flat, 4);
  REQUIRE(net.luts.size() == 1);
  CHECK(net.luts[0].inputs.size() == 2);
  // 2^4 bits total; positions beyond the two used inputs replicate
  REQUIRE(net.luts[0].truth.size() == 1);
  const uint64_t tt = net.luts[0].truth[0] & 0xffff;
  CHECK((tt & 0xf) == 0x6);  // XOR on the low block
  CHECK(tt == 0x6666);       // replicated across the unused inputs
}

TEST_CASE("pure feed-through maps to zero LUTs") {
  Design d = parse_verilog(
      "module ft(input [2:0] a, output [2:0] y); assign y = a; endmodule");
  auto flat = flatten(d, "ft");
  MappedNetwork net = map_to_luts(flat.flat, 4);
  CHECK(net.luts.empty());
  CHECK(net.aliases.size() == 3);
}

TEST_CASE("full adder at k=3 maps to the exact minimum of 2 LUTs") {
  Design d = parse_verilog(
      "module fa(input a, input b, input cin, output s, output cout);\n"
      "  assign s = a ^ b ^ cin;\n"
      "  assign cout = (a & b) | (cin & (a ^ b));\nendmodule");
  auto flat = flatten(d, "fa");
  CHECK(min_lut_cover_oracle(flat.flat, 3) == 2);
  MappedNetwork net = map_to_luts(flat.flat, 3);
  CHECK(net.luts.size() == 2);
}

TEST_CASE("mapper matches the exhaustive cover minimum on small networks") {
  for (uint64_t seed : {7u, 8u, 9u}) {
    testgen::RandomModuleSpec spec;
    spec.seed = seed;
    spec.inputs = 5;
    spec.outputs = 2;
    spec.gates = 9;
    Design d = testgen::random_design(spec);
    auto flat = flatten(d, "m");
    for (int k : {3, 4}) {
      CAPTURE(seed);
      CAPTURE(k);
      int exact = min_lut_cover_oracle(flat.flat, k);
      MappedNetwork net = map_to_luts(flat.flat, k);
      CHECK(static_cast<int>(net.luts.size()) >= exact);
      CHECK(static_cast<int>(net.luts.size()) <= exact + 2);  // area-flow greedy
    }
  }
}

TEST_CASE("mapped networks are simulation-equivalent to their gates") {
  std::vector<Design> corpus;
  for (uint64_t seed : {21u, 22u, 23u}) {
    testgen::RandomModuleSpec spec;
    spec.seed = seed;
    spec.inputs = 10;
    spec.outputs = 5;
    spec.gates = 60;
    spec.dffs = seed == 23u ? 5 : 0;
    corpus.push_back(testgen::random_design(spec));
  }
  for (const auto& d : corpus) {
    auto flat = flatten(d, "m");
    for (int k : {2, 4, 6}) {
      MappedNetwork net = map_to_luts(flat.flat, k);
      ModuleDef lut_mod = build_lut_module(net, flat.flat, "lutnet");
      std::string why;
      CHECK_MESSAGE(testgen::simulation_equivalent(flat.flat, lut_mod, {}, &why), why);
    }
  }
}

TEST_CASE("NAND/NOR gates from the JSON IR map correctly") {
  const char* js = R"({
    "top": "m",
    "modules": {
      "m": {
        "ports": [{"name": "a", "dir": "input", "width": 2},
                   {"name": "y", "dir": "output", "width": 2}],
        "gates": [{"kind": "NAND", "inputs": ["a[0]", "a[1]"], "output": "y[0]"},
                   {"kind": "NOR", "inputs": ["a[0]", "a[1]"], "output": "y[1]"}],
        "instances": []
      }
    }
  })";
  Design d = parse_json_ir(js);
  auto flat = flatten(d, "m");
  MappedNetwork net = map_to_luts(flat.flat, 2);
  ModuleDef lut_mod = build_lut_module(net, flat.flat, "lutnet");
  std::string why;
  CHECK_MESSAGE(testgen::simulation_equivalent(flat.flat, lut_mod, {}, &why), why);
}

TEST_CASE("LUT count is monotone non-increasing in k on the corpus") {
  for (uint64_t seed = 40; seed < 48; ++seed) {
    testgen::RandomModuleSpec spec;
    spec.seed = seed;
    spec.inputs = 9;
    spec.outputs = 4;
    spec.gates = 50;
    Design d = testgen::random_design(spec);
    auto flat = flatten(d, "m");
    size_t prev = SIZE_MAX;
    for (int k = 2; k <= 7; ++k) {
      size_t count = map_to_luts(flat.flat, k).luts.size();
      CAPTURE(seed);
      CAPTURE(k);
      CHECK(count <= prev);
      prev = count;
    }
  }
}

TEST_CASE("packing: disjoint LUTs are input-bound, shared LUTs share a CLB") {
  FabricParams p;
  p.n = 4;
  p.k = 4;  // i = 10

  // 7 LUTs with fully disjoint 4-bit inputs -> 2 per CLB -> 4 CLBs
  std::vector<std::vector<NetId>> disjoint;
  NetId next = 0;
  for (int u = 0; u < 7; ++u) {
    std::vector<NetId> ins;
    for (int i = 0; i < 4; ++i) ins.push_back(next++);
    disjoint.push_back(ins);
  }
  MappedNetwork net = synthetic_luts(disjoint);
  PackResult pr = pack_clbs(net, p);
  CHECK(pr.clb_count() == 4);
  CHECK(min_pack_oracle(net, p) == 4);

  // 4 LUTs sharing the same 4 inputs -> a single CLB
  std::vector<std::vector<NetId>> shared(4, {0, 1, 2, 3});
  MappedNetwork net2 = synthetic_luts(shared);
  CHECK(pack_clbs(net2, p).clb_count() == 1);

  // empty network -> no CLBs
  MappedNetwork empty;
  empty.k = 4;
  CHECK(pack_clbs(empty, p).clb_count() == 0);
}

TEST_CASE("greedy packing stays close to the exact optimum") {
  for (uint64_t seed = 60; seed < 66; ++seed) {
    testgen::RandomModuleSpec spec;
    spec.seed = seed;
    spec.inputs = 6;
    spec.outputs = 3;
    spec.gates = 14;
    Design d = testgen::random_design(spec);
    auto flat = flatten(d, "m");
    MappedNetwork net = map_to_luts(flat.flat, 3);
    if (net.luts.size() + net.ffs.size() > 8) continue;
    FabricParams p;
    p.n = 2;
    p.k = 3;
    int exact = min_pack_oracle(net, p);
    int greedy = pack_clbs(net, p).clb_count();
    CAPTURE(seed);
    CHECK(greedy >= exact);
    CHECK(greedy <= exact + 1);
  }
}

TEST_CASE("grid sizing and the 64-pin bound at W4") {
  FabricParams p;  // defaults: io_per_boundary_tile = 4
  CHECK(size_grid(10, 30, p) == 4);   // 3^2 = 9 < 10
  CHECK(size_grid(1, 65, p) == 5);    // capacity(4) = 64 < 65
  CHECK(size_grid(0, 1, p) == 1);     // empty logic still occupies a tile
  CHECK(p.io_capacity(4) == 64);
  CHECK_THROWS_AS(size_grid(1, 0, p), NetlistError);

  testgen::Rng rng(0x517e);
  for (int t = 0; t < 1000; ++t) {
    int clb = static_cast<int>(rng.below(500));
    int io = 1 + static_cast<int>(rng.below(800));
    int w = size_grid(clb, io, p);
    CHECK(w * w >= std::max(clb, 1));
    CHECK(p.io_capacity(w) >= io);
    if (w > 1) {
      bool tight = (w - 1) * (w - 1) < std::max(clb, 1) ||
                   p.io_capacity(w - 1) < io;
      CHECK(tight);
    }
  }
}

TEST_CASE("characterize: smallest nonempty fabric and determinism") {
  Design d = parse_verilog(
      "module invt(input a, output y); assign y = ~a; endmodule\n"
      "module t(input a, output y);\n  invt u1(.a(a), .y(y));\nendmodule",
      "t");
  WrapperModule w = wrap_whole(d, "t.u1");
  FabricParams p;
  p.n = 4;
  p.k = 4;
  FabricResult r = characterize(d, w, p);
  CHECK(r.lut_count == 1);
  CHECK(r.clb_count == 1);
  CHECK(r.grid_side == 1);
  CHECK(r.clb_util == doctest::Approx(1.0));
  CHECK(r.io_used == 2);

  FabricResult r2 = characterize(d, w, p);
  CHECK(fabric_json(r) == fabric_json(r2));  // bit-identical output
}

TEST_CASE("bigger LUTs dominate on the 8-sbox wrapper") {
  Design d = testgen::des3_like_design();
  InstanceTree tree = d.instance_tree();
  std::vector<std::string> members;
  for (int i = 1; i <= 8; ++i) members.push_back("des3_like.u_sbox" + std::to_string(i));
  WrapperModule w = build_wrapper(d, make_cluster(d, tree, members));
  FabricParams k4;
  k4.n = 4;
  k4.k = 4;
  FabricParams k6 = k4;
  k6.k = 6;
  FabricResult r4 = characterize(d, w, k4);
  FabricResult r6 = characterize(d, w, k6);
  CHECK(r6.lut_count <= r4.lut_count);
  CHECK(r6.grid_side <= r4.grid_side);
}

TEST_CASE("characterized fabrics satisfy the structural invariants") {
  Design d = testgen::des3_like_design();
  InstanceTree tree = d.instance_tree();
  for (int i = 1; i <= 4; ++i) {
    WrapperModule w = wrap_whole(d, "des3_like.u_sbox" + std::to_string(i));
    for (int n : {2, 4}) {
      for (int k : {3, 5}) {
        FabricParams p;
        p.n = n;
        p.k = k;
        FabricResult r = characterize(d, w, p);
        CHECK(r.clb_count <= r.grid_side * r.grid_side);
        CHECK(r.io_used <= p.io_capacity(r.grid_side));
        CHECK(r.clb_util > 0);
        CHECK(r.clb_util <= 1);
        CHECK(r.io_util > 0);
        CHECK(r.io_util <= 1);
        CHECK((r.io_util == 1.0) == (r.io_used == p.io_capacity(r.grid_side)));
        if (r.grid_side > 1) {
          int w1 = r.grid_side - 1;
          CHECK((w1 * w1 < std::max(r.clb_count, 1) ||
                 p.io_capacity(w1) < r.io_used));
        }
        // equivalence of the mapped network, exhaustive (8 inputs)
        FlatModule fm = flatten_module(d, w.def);
        ModuleDef lut_mod = build_lut_module(r.network, fm.flat, "lutnet");
        std::string why;
        CHECK_MESSAGE(testgen::simulation_equivalent(fm.flat, lut_mod, {}, &why), why);
      }
    }
  }
}

TEST_CASE("sequential wrappers merge a single-fanout LUT into its BLE") {
  Design d = parse_verilog(
      "module seqm(input clk, input [3:0] a, output reg q);\n"
      "  always @(posedge clk) q <= (a[0] ^ a[1]) & (a[2] | a[3]);\nendmodule\n"
      "module t(input clk, input [3:0] a, output q);\n"
      "  seqm u1(.clk(clk), .a(a), .q(q));\nendmodule",
      "t");
  WrapperModule w = wrap_whole(d, "t.u1");
  FabricParams p;
  p.n = 4;
  p.k = 4;
  FabricResult r = characterize(d, w, p);
  CHECK(r.ff_count == 1);
  REQUIRE(r.lut_count >= 1);
  bool merged = false;
  for (const auto& lut : r.network.luts) merged |= lut.is_sequential;
  CHECK(merged);  // LUT drives only the DFF: one BLE
  // packing counts the merged pair once
  CHECK(r.clb_count == 1);
}
