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

#include "arianna/simulate.hpp"

#include <set>

#include "arianna/error.hpp"

namespace arianna {

Simulator::Simulator(const ModuleDef& flat_module) : m_(flat_module) {
  if (!m_.instances.empty())
    throw NetlistError("Simulator requires a flattened module");
  auto order = topo_order(m_);
  for (uint32_t gi : order) {
    if (m_.gates[gi].kind == GateKind::Dff)
      dffs_.push_back(gi);
    else
      order_.push_back(gi);
  }
  values_.assign(m_.net_names.size(), 0);
}

void Simulator::reset() { std::fill(values_.begin(), values_.end(), 0); }

void Simulator::set_input_word(const std::string& port, int bit, uint64_t word) {
  const PortDecl* p = m_.find_port(port);
  if (!p || p->dir != PortDir::Input)
    throw NetlistError("not an input port: " + port);
  if (bit < 0 || bit >= p->width)
    throw NetlistError("input bit out of range: " + port + "[" + std::to_string(bit) + "]");
  values_[m_.port_bits.at(port)[static_cast<size_t>(bit)]] = word;
}

uint64_t Simulator::get_word(const std::string& port, int bit) const {
  const PortDecl* p = m_.find_port(port);
  if (!p) throw NetlistError("unknown port: " + port);
  if (bit < 0 || bit >= p->width)
    throw NetlistError("bit out of range: " + port + "[" + std::to_string(bit) + "]");
  return values_[m_.port_bits.at(port)[static_cast<size_t>(bit)]];
}

void Simulator::eval() {
  for (uint32_t gi : order_) {
    const Gate& g = m_.gates[gi];
    uint64_t v = 0;
    switch (g.kind) {
      case GateKind::And:  v = values_[g.inputs[0]] & values_[g.inputs[1]]; break;
      case GateKind::Or:   v = values_[g.inputs[0]] | values_[g.inputs[1]]; break;
      case GateKind::Xor:  v = values_[g.inputs[0]] ^ values_[g.inputs[1]]; break;
      case GateKind::Nand: v = ~(values_[g.inputs[0]] & values_[g.inputs[1]]); break;
      case GateKind::Nor:  v = ~(values_[g.inputs[0]] | values_[g.inputs[1]]); break;
      case GateKind::Xnor: v = ~(values_[g.inputs[0]] ^ values_[g.inputs[1]]); break;
      case GateKind::Not:  v = ~values_[g.inputs[0]]; break;
      case GateKind::Buf:  v = values_[g.inputs[0]]; break;
      case GateKind::Mux2: {
        uint64_t s = values_[g.inputs[0]];
        v = (s & values_[g.inputs[1]]) | (~s & values_[g.inputs[2]]);
        break;
      }
      case GateKind::Const0: v = 0; break;
      case GateKind::Const1: v = ~0ull; break;
      case GateKind::Dff: continue;
    }
    values_[g.output] = v;
  }
}

void Simulator::step() {
  eval();
  // Sample all D pins before updating any Q: simultaneous edge.
  std::vector<uint64_t> next(dffs_.size());
  for (size_t i = 0; i < dffs_.size(); ++i)
    next[i] = values_[m_.gates[dffs_[i]].inputs[0]];
  for (size_t i = 0; i < dffs_.size(); ++i)
    values_[m_.gates[dffs_[i]].output] = next[i];
}

std::vector<CycleValues> simulate(const ModuleDef& flat_module,
                                  const std::vector<CycleValues>& stimulus) {
  Simulator sim(flat_module);
  std::vector<const PortDecl*> ins, outs;
  for (const auto& p : flat_module.ports)
    (p.dir == PortDir::Input ? ins : outs).push_back(&p);

  std::vector<CycleValues> result;
  result.reserve(stimulus.size());
  for (const auto& cycle : stimulus) {
    if (cycle.ports.size() != ins.size())
      throw NetlistError("stimulus port count mismatch");
    for (size_t pi = 0; pi < ins.size(); ++pi) {
      if (static_cast<int>(cycle.ports[pi].size()) != ins[pi]->width)
        throw NetlistError("stimulus width mismatch on port " + ins[pi]->name);
      for (int b = 0; b < ins[pi]->width; ++b)
        sim.set_input_word(ins[pi]->name, b, cycle.ports[pi][static_cast<size_t>(b)] ? ~0ull : 0);
    }
    sim.eval();
    CycleValues sampled;
    for (const PortDecl* p : outs) {
      BitVector bits(static_cast<size_t>(p->width));
      for (int b = 0; b < p->width; ++b)
        bits[static_cast<size_t>(b)] = sim.get_word(p->name, b) & 1 ? 1 : 0;
      sampled.ports.push_back(std::move(bits));
    }
    result.push_back(std::move(sampled));
    sim.step();
  }
  return result;
}

std::vector<NetId> clock_nets(const ModuleDef& flat_module) {
  std::vector<int> clock_loads(flat_module.net_names.size(), 0);
  std::vector<int> data_loads(flat_module.net_names.size(), 0);
  for (const auto& g : flat_module.gates) {
    for (NetId in : g.inputs) data_loads[in] += 1;
    if (g.kind == GateKind::Dff && g.clock != kNoNet) clock_loads[g.clock] += 1;
  }
  for (const auto& p : flat_module.ports)
    if (p.dir == PortDir::Output)
      for (NetId n : flat_module.port_bits.at(p.name)) data_loads[n] += 1;
  std::vector<NetId> out;
  for (NetId n = 0; n < flat_module.net_names.size(); ++n)
    if (clock_loads[n] > 0 && data_loads[n] == 0) out.push_back(n);
  return out;
}

std::vector<NetId> clock_sources(const ModuleDef& flat_module) {
  std::set<NetId> sources;
  std::vector<int> driver(flat_module.net_names.size(), -1);
  for (size_t i = 0; i < flat_module.gates.size(); ++i)
    driver[flat_module.gates[i].output] = static_cast<int>(i);
  for (const auto& g : flat_module.gates) {
    if (g.kind != GateKind::Dff) continue;
    NetId clk = g.clock;
    if (clk == kNoNet) throw NetlistError("DFF without a clock net");
    // Follow BUF chains back to the source.
    while (driver[clk] >= 0) {
      const Gate& d = flat_module.gates[static_cast<size_t>(driver[clk])];
      if (d.kind != GateKind::Buf)
        throw NetlistError("clock pin driven by logic is unsupported (net " +
                           flat_module.net_names[clk] + ")");
      clk = d.inputs[0];
    }
    sources.insert(clk);
  }
  return {sources.begin(), sources.end()};
}

void check_single_clock(const ModuleDef& flat_module) {
  if (clock_sources(flat_module).size() > 1)
    throw NetlistError("multi-clock design is unsupported");
}

}  // namespace arianna
