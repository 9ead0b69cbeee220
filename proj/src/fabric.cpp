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

#include "arianna/fabric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "arianna/error.hpp"
#include "arianna/simulate.hpp"

namespace arianna {

double FabricParams::tile_area() const {
  const double i = clb_inputs();
  return a_lut * n * std::ldexp(1.0, k) + a_ff * n +
         a_xbar * (i + n) * n * k + a_fixed;
}

void FabricParams::check() const {
  if (n < 1) throw ConfigError("fabric N must be >= 1");
  if (k < 2 || k > 12) throw ConfigError("fabric K must be in [2, 12]");
  if (io_per_boundary_tile < 1)
    throw ConfigError("io_per_boundary_tile must be >= 1");
  if (a_lut <= 0 || a_ff <= 0 || a_xbar <= 0 || a_fixed < 0)
    throw ConfigError("area model constants must be positive");
  if (cut_limit < 1) throw ConfigError("cut_limit must be >= 1");
}

namespace {

struct Cut {
  std::vector<NetId> leaves;  // sorted
  double area_flow = 0.0;
};

bool merge_cuts(const Cut& a, const Cut& b, int k, Cut& out) {
  out.leaves.clear();
  std::set_union(a.leaves.begin(), a.leaves.end(), b.leaves.begin(),
                 b.leaves.end(), std::back_inserter(out.leaves));
  return static_cast<int>(out.leaves.size()) <= k;
}

class Mapper {
 public:
  Mapper(const ModuleDef& m, int k, int cut_limit)
      : m_(m), k_(k), cut_limit_(cut_limit) {
    build_structure();
  }

  MappedNetwork run() {
    enumerate_cuts();
    cover();
    merge_ffs();
    out_.k = k_;
    return std::move(out_);
  }

 private:
  const ModuleDef& m_;
  int k_, cut_limit_;
  MappedNetwork out_;

  std::vector<int> driver_;          // net -> gate index, -1 for PIs
  std::vector<NetId> rep_;           // BUF-collapsed representative per net
  std::vector<int> fanout_;          // per net (rep space), data consumers
  std::vector<uint32_t> comb_topo_;  // combinational non-BUF gates in order
  std::vector<std::vector<Cut>> cuts_;  // per gate
  std::vector<double> best_af_;         // per gate
  std::vector<int> lut_of_gate_;        // covering memo, -1 = none

  bool is_const(int gate) const {
    return gate >= 0 && (m_.gates[static_cast<size_t>(gate)].kind == GateKind::Const0 ||
                         m_.gates[static_cast<size_t>(gate)].kind == GateKind::Const1);
  }

  void build_structure() {
    driver_.assign(m_.net_names.size(), -1);
    for (size_t i = 0; i < m_.gates.size(); ++i)
      driver_[m_.gates[i].output] = static_cast<int>(i);

    // Collapse BUF chains; topo_order guarantees the recursion terminates.
    rep_.resize(m_.net_names.size());
    for (NetId n = 0; n < m_.net_names.size(); ++n) rep_[n] = kNoNet;
    for (NetId n = 0; n < m_.net_names.size(); ++n) resolve_rep(n);

    fanout_.assign(m_.net_names.size(), 0);
    for (const auto& g : m_.gates) {
      if (g.kind == GateKind::Buf) continue;
      for (NetId in : g.inputs) fanout_[rep_[in]] += 1;
    }
    for (const auto& p : m_.ports)
      if (p.dir == PortDir::Output)
        for (NetId n : m_.port_bits.at(p.name)) fanout_[rep_[n]] += 1;

    for (uint32_t gi : topo_order(m_)) {
      GateKind kind = m_.gates[gi].kind;
      if (kind == GateKind::Dff || kind == GateKind::Buf) continue;
      comb_topo_.push_back(gi);
    }
    cuts_.resize(m_.gates.size());
    best_af_.assign(m_.gates.size(), 0.0);
    lut_of_gate_.assign(m_.gates.size(), -1);
  }

  NetId resolve_rep(NetId n) {
    if (rep_[n] != kNoNet) return rep_[n];
    int d = driver_[n];
    if (d >= 0 && m_.gates[static_cast<size_t>(d)].kind == GateKind::Buf) {
      rep_[n] = resolve_rep(m_.gates[static_cast<size_t>(d)].inputs[0]);
    } else {
      rep_[n] = n;
    }
    return rep_[n];
  }

  double net_af(NetId r) const {
    int d = driver_[r];
    if (d < 0 || m_.gates[static_cast<size_t>(d)].kind == GateKind::Dff) return 0.0;
    if (is_const(d)) return 0.0;
    int f = std::max(fanout_[r], 1);
    return best_af_[static_cast<size_t>(d)] / f;
  }

  // Cut set of a fanin net: {{r}} for PIs and DFF outputs, {{}} for
  // constants, the driver's cuts plus {{r}} for logic.
  std::vector<Cut> fanin_cutset(NetId net) const {
    NetId r = rep_[net];
    int d = driver_[r];
    if (d >= 0 && is_const(d)) return {Cut{{}, 0.0}};
    std::vector<Cut> set;
    if (d >= 0 && m_.gates[static_cast<size_t>(d)].kind != GateKind::Dff) {
      set = cuts_[static_cast<size_t>(d)];
    }
    set.push_back(Cut{{r}, net_af(r)});
    return set;
  }

  void enumerate_cuts() {
    for (uint32_t gi : comb_topo_) {
      const Gate& g = m_.gates[gi];
      std::vector<Cut> result;
      if (g.inputs.empty()) {
        result.push_back(Cut{{}, 0.0});  // constant node
      } else {
        result = fanin_cutset(g.inputs[0]);
        for (size_t in = 1; in < g.inputs.size(); ++in) {
          auto rhs = fanin_cutset(g.inputs[in]);
          std::vector<Cut> merged;
          Cut tmp;
          for (const auto& a : result)
            for (const auto& b : rhs)
              if (merge_cuts(a, b, k_, tmp)) merged.push_back(tmp);
          result = std::move(merged);
        }
        for (auto& c : result) {
          c.area_flow = 1.0;
          for (NetId l : c.leaves) c.area_flow += net_af(l);
        }
      }
      std::sort(result.begin(), result.end(), [](const Cut& a, const Cut& b) {
        if (a.area_flow != b.area_flow) return a.area_flow < b.area_flow;
        if (a.leaves.size() != b.leaves.size()) return a.leaves.size() < b.leaves.size();
        return a.leaves < b.leaves;
      });
      result.erase(std::unique(result.begin(), result.end(),
                               [](const Cut& a, const Cut& b) {
                                 return a.leaves == b.leaves;
                               }),
                   result.end());
      if (static_cast<int>(result.size()) > cut_limit_) result.resize(cut_limit_);
      if (result.empty())
        throw NetlistError("no feasible cut for gate driving " +
                           m_.net_names[g.output] + " (k too small)");
      best_af_[gi] = result.front().area_flow;
      cuts_[gi] = std::move(result);
    }
  }

  // Demand-driven covering from the roots (output ports and DFF inputs).
  void cover() {
    std::vector<NetId> roots;
    for (const auto& p : m_.ports)
      if (p.dir == PortDir::Output)
        for (NetId n : m_.port_bits.at(p.name)) roots.push_back(n);
    for (const auto& g : m_.gates)
      if (g.kind == GateKind::Dff) roots.push_back(g.inputs[0]);

    for (NetId root : roots) require_net(root);

    // Feed-through and constant bindings for output ports.
    for (const auto& p : m_.ports) {
      if (p.dir != PortDir::Output) continue;
      for (NetId n : m_.port_bits.at(p.name)) {
        NetId r = rep_[n];
        int d = driver_[r];
        if (d >= 0 && is_const(d)) {
          out_.constants.push_back(
              {n, m_.gates[static_cast<size_t>(d)].kind == GateKind::Const1});
        } else if (r != n) {
          out_.aliases.push_back({r, n});
        }
      }
    }

    for (const auto& g : m_.gates) {
      if (g.kind != GateKind::Dff) continue;
      MappedFf ff;
      NetId r = rep_[g.inputs[0]];
      int d = driver_[r];
      if (d >= 0 && is_const(d)) {
        out_.constants.push_back(
            {r, m_.gates[static_cast<size_t>(d)].kind == GateKind::Const1});
      }
      ff.d = r;
      ff.q = g.output;
      ff.clock = rep_[g.clock];  // clock may ride a BUF chain
      out_.ffs.push_back(ff);
    }
  }

  void require_net(NetId n) {
    std::vector<NetId> stack{n};
    while (!stack.empty()) {
      NetId r = rep_[stack.back()];
      stack.pop_back();
      int d = driver_[r];
      if (d < 0 || is_const(d)) continue;
      const Gate& g = m_.gates[static_cast<size_t>(d)];
      if (g.kind == GateKind::Dff) continue;
      if (lut_of_gate_[static_cast<size_t>(d)] >= 0) continue;
      const Cut& cut = cuts_[static_cast<size_t>(d)].front();
      LutNode lut;
      lut.inputs = cut.leaves;
      lut.output = r;
      lut.truth = cone_truth(static_cast<uint32_t>(d), cut.leaves);
      lut_of_gate_[static_cast<size_t>(d)] = static_cast<int>(out_.luts.size());
      out_.luts.push_back(std::move(lut));
      for (NetId leaf : cut.leaves) stack.push_back(leaf);
    }
  }

  // Exact truth table of the cone rooted at `gate` cut at `leaves`,
  // evaluated word-parallel over all 2^|leaves| patterns and replicated up
  // to 2^k bits so unused input positions never affect the output.
  std::vector<uint64_t> cone_truth(uint32_t gate, const std::vector<NetId>& leaves) {
    const int nl = static_cast<int>(leaves.size());
    const uint64_t patterns = 1ull << nl;
    const size_t words = std::max<size_t>(1, patterns / 64);

    // collect cone gates by DFS, stop at leaves
    std::set<NetId> leaf_set(leaves.begin(), leaves.end());
    std::vector<uint32_t> cone;
    std::set<uint32_t> seen;
    std::vector<uint32_t> dfs{gate};
    while (!dfs.empty()) {
      uint32_t gi = dfs.back();
      dfs.pop_back();
      if (!seen.insert(gi).second) continue;
      cone.push_back(gi);
      for (NetId in : m_.gates[gi].inputs) {
        NetId r = rep_[in];
        if (leaf_set.count(r)) continue;
        int d = driver_[r];
        if (d < 0) continue;
        const Gate& dg = m_.gates[static_cast<size_t>(d)];
        if (dg.kind == GateKind::Dff) continue;
        dfs.push_back(static_cast<uint32_t>(d));
      }
    }
    // topo order within the cone
    std::sort(cone.begin(), cone.end());
    std::vector<uint32_t> ordered;
    for (uint32_t gi : topo_order(m_))
      if (std::binary_search(cone.begin(), cone.end(), gi)) ordered.push_back(gi);

    std::map<NetId, uint64_t> val;
    std::vector<uint64_t> table(std::max<size_t>(words, 1), 0);
    static const uint64_t kVarMask[6] = {
        0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
        0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull};

    for (size_t w = 0; w < words; ++w) {
      for (int j = 0; j < nl; ++j)
        val[leaves[static_cast<size_t>(j)]] =
            j < 6 ? kVarMask[j] : ((w >> (j - 6)) & 1 ? ~0ull : 0ull);
      for (uint32_t gi : ordered) {
        const Gate& g = m_.gates[gi];
        auto in = [&](size_t idx) { return val.at(rep_[g.inputs[idx]]); };
        uint64_t v = 0;
        switch (g.kind) {
          case GateKind::And:  v = in(0) & in(1); break;
          case GateKind::Or:   v = in(0) | in(1); break;
          case GateKind::Xor:  v = in(0) ^ in(1); break;
          case GateKind::Nand: v = ~(in(0) & in(1)); break;
          case GateKind::Nor:  v = ~(in(0) | in(1)); break;
          case GateKind::Xnor: v = ~(in(0) ^ in(1)); break;
          case GateKind::Not:  v = ~in(0); break;
          case GateKind::Mux2: v = (in(0) & in(1)) | (~in(0) & in(2)); break;
          case GateKind::Const0: v = 0; break;
          case GateKind::Const1: v = ~0ull; break;
          default:
            throw NetlistError("unexpected gate kind in cone");
        }
        val[g.output] = v;
      }
      table[w] = val.at(m_.gates[gate].output);
      val.clear();
    }
    if (patterns < 64) {
      // replicate the low pattern block across the word
      uint64_t block = table[0] & ((patterns == 64) ? ~0ull : ((1ull << patterns) - 1));
      uint64_t v = block;
      for (uint64_t span = patterns; span < 64; span *= 2) v |= v << span;
      table[0] = v;
    }
    // replicate words up to 2^k bits
    const size_t total_words = std::max<size_t>(1, (1ull << k_) / 64);
    std::vector<uint64_t> full(total_words);
    for (size_t w = 0; w < total_words; ++w) full[w] = table[w % table.size()];
    return full;
  }

  // Merge a LUT with the single DFF it feeds when the LUT output has no
  // other reader (the BLE output multiplexer exposes one signal).
  void merge_ffs() {
    std::map<NetId, int> lut_by_out;
    for (size_t i = 0; i < out_.luts.size(); ++i)
      lut_by_out[out_.luts[i].output] = static_cast<int>(i);

    std::map<NetId, int> readers;  // rep net -> consumer count
    for (const auto& lut : out_.luts)
      for (NetId in : lut.inputs) readers[in] += 1;
    for (const auto& ff : out_.ffs) readers[ff.d] += 1;
    for (const auto& al : out_.aliases) readers[al.from] += 1;
    // A LUT output that is itself an output port bit is read by the port.
    for (const auto& p : m_.ports)
      if (p.dir == PortDir::Output)
        for (NetId n : m_.port_bits.at(p.name))
          if (rep_[n] == n && lut_by_out.count(n)) readers[n] += 1;

    for (auto& ff : out_.ffs) {
      auto it = lut_by_out.find(ff.d);
      if (it == lut_by_out.end()) continue;
      if (readers[ff.d] != 1) continue;
      ff.merged = true;
      out_.luts[static_cast<size_t>(it->second)].is_sequential = true;
      out_.luts[static_cast<size_t>(it->second)].ble_output = ff.q;
    }
  }
};

}  // namespace

ModuleDef lower_wide_gates(const ModuleDef& flat) {
  ModuleDef out = flat;
  std::vector<Gate> gates;
  gates.reserve(out.gates.size());
  int tmp = 0;
  auto fresh = [&]() {
    std::string name;
    do {
      name = "_mx" + std::to_string(tmp++);
    } while (out.find_net(name) != kNoNet);
    return out.add_net(name);
  };
  for (const Gate& g : out.gates) {
    if (g.kind != GateKind::Mux2) {
      gates.push_back(g);
      continue;
    }
    // out = (s & a) | (~s & b)
    NetId ns = fresh(), sa = fresh(), nsb = fresh();
    gates.push_back({GateKind::Not, {g.inputs[0]}, ns, kNoNet});
    gates.push_back({GateKind::And, {g.inputs[0], g.inputs[1]}, sa, kNoNet});
    gates.push_back({GateKind::And, {ns, g.inputs[2]}, nsb, kNoNet});
    gates.push_back({GateKind::Or, {sa, nsb}, g.output, kNoNet});
  }
  out.gates = std::move(gates);
  return out;
}

MappedNetwork map_to_luts(const ModuleDef& flat, int k, int cut_limit) {
  if (k < 2 || k > 12) throw ConfigError("fabric K must be in [2, 12]");
  if (!flat.instances.empty())
    throw NetlistError("map_to_luts requires a flattened module");
  if (k == 2) {
    // a 3-input node can never fit a 2-LUT
    bool has_mux = false;
    for (const auto& g : flat.gates) has_mux |= g.kind == GateKind::Mux2;
    if (has_mux) {
      ModuleDef lowered = lower_wide_gates(flat);
      Mapper mapper(lowered, k, cut_limit);
      MappedNetwork net = mapper.run();
      net.net_names = lowered.net_names;
      return net;
    }
  }
  Mapper mapper(flat, k, cut_limit);
  MappedNetwork net = mapper.run();
  net.net_names = flat.net_names;
  return net;
}

PackResult pack_clbs(const MappedNetwork& net, const FabricParams& params) {
  struct Unit {
    std::vector<NetId> inputs;
    NetId output;
  };
  std::vector<Unit> units;
  for (const auto& lut : net.luts)
    units.push_back({lut.inputs, lut.is_sequential ? lut.ble_output : lut.output});
  for (const auto& ff : net.ffs)
    if (!ff.merged) units.push_back({{ff.d}, ff.q});

  const int n_cap = params.n;
  const int i_cap = params.clb_inputs();

  // A single BLE can never exceed the CLB input bound when k <= i.
  for (const auto& u : units)
    if (static_cast<int>(u.inputs.size()) > i_cap)
      throw NetlistError("BLE exceeds CLB input bound");

  auto external_inputs = [&](const std::vector<int>& group,
                             int extra = -1) -> std::set<NetId> {
    std::set<NetId> produced, needed;
    auto add = [&](int ui) {
      produced.insert(units[static_cast<size_t>(ui)].output);
      for (NetId in : units[static_cast<size_t>(ui)].inputs) needed.insert(in);
    };
    for (int ui : group) add(ui);
    if (extra >= 0) add(extra);
    std::set<NetId> ext;
    for (NetId in : needed)
      if (!produced.count(in)) ext.insert(in);
    return ext;
  };

  std::vector<bool> packed(units.size(), false);
  PackResult result;
  size_t remaining = units.size();
  while (remaining > 0) {
    // seed: most inputs, lowest index on ties
    int seed = -1;
    for (size_t u = 0; u < units.size(); ++u) {
      if (packed[u]) continue;
      if (seed < 0 ||
          units[u].inputs.size() > units[static_cast<size_t>(seed)].inputs.size())
        seed = static_cast<int>(u);
    }
    std::vector<int> group{seed};
    packed[static_cast<size_t>(seed)] = true;
    --remaining;

    while (static_cast<int>(group.size()) < n_cap && remaining > 0) {
      auto ext = external_inputs(group);
      int best = -1;
      size_t best_gain = 0;
      for (size_t u = 0; u < units.size(); ++u) {
        if (packed[u]) continue;
        if (static_cast<int>(external_inputs(group, static_cast<int>(u)).size()) >
            i_cap)
          continue;
        size_t gain = 0;
        for (NetId in : units[u].inputs)
          if (ext.count(in)) ++gain;
        if (best < 0 || gain > best_gain) {
          best = static_cast<int>(u);
          best_gain = gain;
        }
      }
      if (best < 0) break;
      group.push_back(best);
      packed[static_cast<size_t>(best)] = true;
      --remaining;
    }
    result.groups.push_back(std::move(group));
  }
  return result;
}

int size_grid(int clb_count, int io_used, const FabricParams& params) {
  if (io_used < 1) throw NetlistError("size_grid requires io_used >= 1");
  const int c = std::max(clb_count, 1);
  int w = 1;
  while (w * w < c || params.io_capacity(w) < io_used) ++w;
  return w;
}

FabricResult characterize(const Design& design, const WrapperModule& wrapper,
                          const FabricParams& params) {
  params.check();
  FlatModule fm = flatten_module(design, wrapper.def);
  clock_sources(fm.flat);  // rejects gated clocks; multiple pins are fine here

  FabricResult r;
  r.params = params;
  r.network = map_to_luts(fm.flat, params.k, params.cut_limit);
  r.packing = pack_clbs(r.network, params);
  r.lut_count = static_cast<int>(r.network.luts.size());
  r.ff_count = static_cast<int>(r.network.ffs.size());
  r.clb_count = r.packing.clb_count();
  r.io_used = wrapper.def.io_pin_count();
  r.grid_side = size_grid(r.clb_count, r.io_used, params);
  const double w2 = static_cast<double>(r.grid_side) * r.grid_side;
  r.clb_util = r.clb_count / w2;
  r.io_util = static_cast<double>(r.io_used) / params.io_capacity(r.grid_side);
  r.area_estimate = w2 * params.tile_area();

  const int i = params.clb_inputs();
  int sel_bits = 0;
  while ((1 << sel_bits) < i + params.n) ++sel_bits;  // ceil(log2(i+n))
  r.bitstream_bits =
      static_cast<uint64_t>(r.lut_count) * (1ull << params.k) +
      static_cast<uint64_t>(r.clb_count) * (i + params.n) * params.n * sel_bits;
  return r;
}

ModuleDef build_lut_module(const MappedNetwork& net, const ModuleDef& flat_iface,
                           const std::string& name) {
  ModuleDef m;
  m.name = name;
  m.ports = flat_iface.ports;

  // Net ids come from the module the mapper ran over; its name table
  // covers decomposition nets the interface has never seen.
  const auto& names =
      net.net_names.empty() ? flat_iface.net_names : net.net_names;
  std::map<NetId, NetId> net_map;
  auto xfer = [&](NetId n) {
    auto it = net_map.find(n);
    if (it != net_map.end()) return it->second;
    NetId id = m.add_net(names[n]);
    net_map.emplace(n, id);
    return id;
  };
  for (const auto& p : flat_iface.ports) {
    std::vector<NetId> bits;
    for (NetId n : flat_iface.port_bits.at(p.name)) bits.push_back(xfer(n));
    m.port_bits[p.name] = bits;
  }

  NetId c0 = kNoNet, c1 = kNoNet;
  auto const_net = [&](bool one) {
    NetId& slot = one ? c1 : c0;
    if (slot == kNoNet) {
      slot = m.add_net(one ? "_lconst1" : "_lconst0");
      m.add_gate(one ? GateKind::Const1 : GateKind::Const0, {}, slot);
    }
    return slot;
  };

  int tmp = 0;
  auto fresh = [&]() { return m.add_net("_l" + std::to_string(tmp++)); };

  for (const auto& lut : net.luts) {
    const int nl = static_cast<int>(lut.inputs.size());
    // Shannon decomposition of the table segment [offset, offset+2^level)
    // into a MUX2 tree; constant segments fold.
    std::vector<NetId> ins;
    for (NetId in : lut.inputs) ins.push_back(xfer(in));
    auto build = [&](auto&& self, int level, uint64_t offset) -> NetId {
      bool all0 = true, all1 = true;
      for (uint64_t idx = 0; idx < (1ull << level); ++idx) {
        if (lut.truth_bit(offset + idx)) all0 = false;
        else all1 = false;
      }
      if (all0) return const_net(false);
      if (all1) return const_net(true);
      NetId lo = self(self, level - 1, offset);
      NetId hi = self(self, level - 1, offset + (1ull << (level - 1)));
      if (lo == hi) return lo;
      NetId out = fresh();
      m.add_gate(GateKind::Mux2, {ins[static_cast<size_t>(level - 1)], hi, lo}, out);
      return out;
    };
    NetId value =
        nl == 0 ? const_net(lut.truth_bit(0)) : build(build, nl, 0);
    NetId out = xfer(lut.output);
    m.add_gate(GateKind::Buf, {value}, out);
  }

  for (const auto& ff : net.ffs)
    m.add_gate(GateKind::Dff, {xfer(ff.d)}, xfer(ff.q), xfer(ff.clock));
  for (const auto& al : net.aliases)
    m.add_gate(GateKind::Buf, {xfer(al.from)}, xfer(al.to));
  for (const auto& c : net.constants)
    m.add_gate(c.value ? GateKind::Const1 : GateKind::Const0, {}, xfer(c.net));
  return m;
}

std::string fabric_json(const FabricResult& r) {
  nlohmann::json j;
  j["params"] = {{"n", r.params.n},
                 {"k", r.params.k},
                 {"clb_inputs", r.params.clb_inputs()},
                 {"io_per_boundary_tile", r.params.io_per_boundary_tile}};
  j["counts"] = {{"luts", r.lut_count},
                 {"ffs", r.ff_count},
                 {"clbs", r.clb_count},
                 {"grid_side", r.grid_side},
                 {"io_used", r.io_used},
                 {"bitstream_bits", r.bitstream_bits}};
  j["utilization"] = {{"clb", r.clb_util}, {"io", r.io_util}};
  j["area_estimate"] = r.area_estimate;

  auto hex_truth = [&](const LutNode& lut) {
    std::string s;
    const uint64_t bits = 1ull << r.params.k;
    for (uint64_t nib = bits / 4; nib-- > 0;) {
      int v = 0;
      for (int b = 3; b >= 0; --b)
        v = (v << 1) | (lut.truth_bit(nib * 4 + static_cast<uint64_t>(b)) ? 1 : 0);
      s += "0123456789abcdef"[v];
    }
    return s;
  };

  nlohmann::json luts = nlohmann::json::array();
  for (const auto& lut : r.network.luts) {
    nlohmann::json jl;
    nlohmann::json ins = nlohmann::json::array();
    for (NetId in : lut.inputs) ins.push_back(r.network.net_names[in]);
    jl["inputs"] = std::move(ins);
    jl["truth_hex"] = hex_truth(lut);
    jl["registered"] = lut.is_sequential;
    jl["output"] = r.network.net_names[lut.output];
    luts.push_back(std::move(jl));
  }
  j["luts"] = std::move(luts);
  j["packing"] = r.packing.groups;
  return j.dump(2) + "\n";
}

}  // namespace arianna
