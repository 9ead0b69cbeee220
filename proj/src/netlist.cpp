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

#include "arianna/netlist.hpp"

#include <algorithm>
#include <deque>

#include "arianna/error.hpp"

namespace arianna {

const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::And: return "AND";
    case GateKind::Or: return "OR";
    case GateKind::Not: return "NOT";
    case GateKind::Xor: return "XOR";
    case GateKind::Nand: return "NAND";
    case GateKind::Nor: return "NOR";
    case GateKind::Xnor: return "XNOR";
    case GateKind::Mux2: return "MUX2";
    case GateKind::Buf: return "BUF";
    case GateKind::Const0: return "CONST0";
    case GateKind::Const1: return "CONST1";
    case GateKind::Dff: return "DFF";
  }
  return "?";
}

std::optional<GateKind> gate_kind_from_name(const std::string& name) {
  static const std::map<std::string, GateKind> table = {
      {"AND", GateKind::And},     {"OR", GateKind::Or},
      {"NOT", GateKind::Not},     {"XOR", GateKind::Xor},
      {"NAND", GateKind::Nand},   {"NOR", GateKind::Nor},
      {"XNOR", GateKind::Xnor},   {"MUX2", GateKind::Mux2},
      {"BUF", GateKind::Buf},     {"CONST0", GateKind::Const0},
      {"CONST1", GateKind::Const1}, {"DFF", GateKind::Dff},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::Not:
    case GateKind::Buf:
    case GateKind::Dff:
      return 1;
    case GateKind::Mux2:
      return 3;
    case GateKind::Const0:
    case GateKind::Const1:
      return 0;
    default:
      return 2;
  }
}

NetId ModuleDef::add_net(const std::string& net_name) {
  auto it = net_index_.find(net_name);
  if (it != net_index_.end()) return it->second;
  NetId id = static_cast<NetId>(net_names.size());
  net_names.push_back(net_name);
  net_index_.emplace(net_name, id);
  return id;
}

std::vector<NetId> ModuleDef::add_signal(const std::string& sig, int width) {
  std::vector<NetId> out;
  out.reserve(static_cast<size_t>(width));
  if (width == 1) {
    out.push_back(add_net(sig));
  } else {
    for (int b = 0; b < width; ++b)
      out.push_back(add_net(sig + "[" + std::to_string(b) + "]"));
  }
  return out;
}

NetId ModuleDef::find_net(const std::string& net_name) const {
  auto it = net_index_.find(net_name);
  return it == net_index_.end() ? kNoNet : it->second;
}

Gate& ModuleDef::add_gate(GateKind kind, std::vector<NetId> inputs, NetId output,
                          NetId clock) {
  Gate g;
  g.kind = kind;
  g.inputs = std::move(inputs);
  g.output = output;
  g.clock = clock;
  gates.push_back(std::move(g));
  return gates.back();
}

const PortDecl* ModuleDef::find_port(const std::string& port_name) const {
  for (const auto& p : ports)
    if (p.name == port_name) return &p;
  return nullptr;
}

int ModuleDef::io_pin_count() const {
  int n = 0;
  for (const auto& p : ports) n += p.width;
  return n;
}

int InstanceTree::find(const std::string& path) const {
  auto it = index_by_path.find(path);
  return it == index_by_path.end() ? -1 : it->second;
}

bool InstanceTree::is_ancestor(int a, int b) const {
  for (int cur = nodes[static_cast<size_t>(b)].parent; cur >= 0;
       cur = nodes[static_cast<size_t>(cur)].parent)
    if (cur == a) return true;
  return false;
}

int InstanceTree::lca(int a, int b) const {
  auto depth = [&](int n) {
    int d = 0;
    for (int cur = n; nodes[static_cast<size_t>(cur)].parent >= 0;
         cur = nodes[static_cast<size_t>(cur)].parent)
      ++d;
    return d;
  };
  int da = depth(a), db = depth(b);
  while (da > db) { a = nodes[static_cast<size_t>(a)].parent; --da; }
  while (db > da) { b = nodes[static_cast<size_t>(b)].parent; --db; }
  while (a != b) {
    a = nodes[static_cast<size_t>(a)].parent;
    b = nodes[static_cast<size_t>(b)].parent;
  }
  return a;
}

const InstanceTree::Node& InstanceTree::at(const std::string& path) const {
  int idx = find(path);
  if (idx < 0) throw NetlistError("instance path not found: " + path);
  return nodes[static_cast<size_t>(idx)];
}

const ModuleDef& Design::module(const std::string& name) const {
  auto it = modules.find(name);
  if (it == modules.end()) throw NetlistError("unresolved module reference: " + name);
  return it->second;
}

ModuleDef& Design::module(const std::string& name) {
  auto it = modules.find(name);
  if (it == modules.end()) throw NetlistError("unresolved module reference: " + name);
  return it->second;
}

InstanceTree Design::instance_tree() const {
  InstanceTree tree;
  if (modules.find(top) == modules.end())
    throw NetlistError("top module not found: " + top);

  struct Frame {
    int node;
    std::vector<std::string> open_modules;  // instantiation stack, cycle check
  };

  tree.nodes.push_back({top, top, top, -1, {}});
  tree.index_by_path.emplace(top, 0);

  std::deque<Frame> work;
  work.push_back({0, {top}});
  while (!work.empty()) {
    Frame frame = std::move(work.front());
    work.pop_front();
    // Copy path/module: growing tree.nodes below invalidates references.
    const std::string node_path = tree.nodes[static_cast<size_t>(frame.node)].path;
    const std::string node_module = tree.nodes[static_cast<size_t>(frame.node)].module;
    const ModuleDef& def = module(node_module);
    for (const auto& inst : def.instances) {
      if (modules.find(inst.module) == modules.end())
        throw NetlistError("unresolved module reference: " + inst.module +
                           " (instance " + node_path + "." + inst.name + ")");
      if (std::find(frame.open_modules.begin(), frame.open_modules.end(),
                    inst.module) != frame.open_modules.end())
        throw NetlistError("recursive instantiation of module " + inst.module);
      InstanceTree::Node child;
      child.path = node_path + "." + inst.name;
      child.inst_name = inst.name;
      child.module = inst.module;
      child.parent = frame.node;
      int idx = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(child);
      tree.nodes[static_cast<size_t>(frame.node)].children.push_back(idx);
      if (!tree.index_by_path.emplace(tree.nodes.back().path, idx).second)
        throw NetlistError("duplicate instance name: " + tree.nodes.back().path);
      Frame next{idx, frame.open_modules};
      next.open_modules.push_back(inst.module);
      work.push_back(std::move(next));
    }
  }
  return tree;
}

namespace {

void validate_module(const Design& design, const ModuleDef& m) {
  const std::string ctx = "module " + m.name + ": ";

  std::map<std::string, int> port_seen;
  for (const auto& p : m.ports) {
    if (p.width < 1) throw NetlistError(ctx + "port " + p.name + " has width < 1");
    if (++port_seen[p.name] > 1)
      throw NetlistError(ctx + "duplicate port name " + p.name);
    auto it = m.port_bits.find(p.name);
    if (it == m.port_bits.end() ||
        static_cast<int>(it->second.size()) != p.width)
      throw NetlistError(ctx + "port " + p.name + " has no matching net bits");
  }

  const size_t nnets = m.net_names.size();
  std::vector<int> drivers(nnets, 0);
  auto check_net = [&](NetId n, const char* what) {
    if (n == kNoNet || n >= nnets)
      throw NetlistError(ctx + std::string(what) + " references unknown net");
  };

  for (const auto& g : m.gates) {
    if (static_cast<int>(g.inputs.size()) != gate_arity(g.kind))
      throw NetlistError(ctx + std::string(gate_kind_name(g.kind)) +
                         " gate has arity " + std::to_string(g.inputs.size()));
    for (NetId in : g.inputs) check_net(in, "gate input");
    check_net(g.output, "gate output");
    if (g.kind == GateKind::Dff) {
      check_net(g.clock, "DFF clock");
    } else if (g.clock != kNoNet) {
      throw NetlistError(ctx + "clock pin on non-DFF gate");
    }
    drivers[g.output] += 1;
  }

  // Input ports drive their bits.
  for (const auto& p : m.ports)
    if (p.dir == PortDir::Input)
      for (NetId n : m.port_bits.at(p.name)) drivers[n] += 1;

  for (const auto& inst : m.instances) {
    const ModuleDef& child = design.module(inst.module);
    std::map<std::string, bool> connected;
    for (const auto& c : inst.connections) {
      const PortDecl* p = child.find_port(c.port);
      if (!p)
        throw NetlistError(ctx + "instance " + inst.name + " connects unknown port " +
                           c.port + " of module " + inst.module);
      if (static_cast<int>(c.bits.size()) != p->width)
        throw NetlistError(ctx + "instance " + inst.name + " port " + c.port +
                           ": width mismatch (" + std::to_string(c.bits.size()) +
                           " vs " + std::to_string(p->width) + ")");
      for (NetId n : c.bits) check_net(n, "connection");
      if (connected[c.port])
        throw NetlistError(ctx + "instance " + inst.name + " connects port " +
                           c.port + " twice");
      connected[c.port] = true;
      if (p->dir == PortDir::Output)
        for (NetId n : c.bits) drivers[n] += 1;
    }
    for (const auto& p : child.ports)
      if (!connected.count(p.name))
        throw NetlistError(ctx + "instance " + inst.name + " leaves port " +
                           p.name + " unconnected");
  }

  for (size_t n = 0; n < nnets; ++n)
    if (drivers[n] > 1)
      throw NetlistError(ctx + "multiple drivers on net " + m.net_names[n]);

  // Everything that is read must be driven, except in black boxes.
  if (!m.is_black_box()) {
    std::vector<bool> read(nnets, false);
    for (const auto& g : m.gates)
      for (NetId in : g.inputs) read[in] = true;
    for (const auto& p : m.ports)
      if (p.dir == PortDir::Output)
        for (NetId n : m.port_bits.at(p.name)) read[n] = true;
    for (const auto& inst : m.instances) {
      const ModuleDef& child = design.module(inst.module);
      for (const auto& c : inst.connections)
        if (child.find_port(c.port)->dir == PortDir::Input)
          for (NetId n : c.bits) read[n] = true;
    }
    for (size_t n = 0; n < nnets; ++n)
      if (read[n] && drivers[n] == 0 )
        throw NetlistError(ctx + "net " + m.net_names[n] + " is read but never driven");
  }

  topo_order(m);  // throws on a combinational cycle
}

}  // namespace

void validate(const Design& design) {
  if (design.modules.find(design.top) == design.modules.end())
    throw NetlistError("top module not found: " + design.top);
  for (const auto& [name, m] : design.modules) {
    if (name != m.name)
      throw NetlistError("module map key " + name + " != module name " + m.name);
    validate_module(design, m);
  }
  design.instance_tree();  // acyclic hierarchy + resolution
}

std::vector<uint32_t> topo_order(const ModuleDef& m) {
  const size_t ngates = m.gates.size();
  std::vector<int> driver_of(m.net_names.size(), -1);
  for (size_t i = 0; i < ngates; ++i) {
    const Gate& g = m.gates[i];
    if (g.kind != GateKind::Dff) driver_of[g.output] = static_cast<int>(i);
  }

  std::vector<uint8_t> state(ngates, 0);  // 0 new, 1 open, 2 done
  std::vector<uint32_t> order;
  order.reserve(ngates);

  // Iterative DFS; gates are visited through their combinational fanin.
  std::vector<std::pair<uint32_t, size_t>> stack;
  for (uint32_t root = 0; root < ngates; ++root) {
    if (state[root] == 2) continue;
    stack.emplace_back(root, 0);
    while (!stack.empty()) {
      auto& [gi, next_in] = stack.back();
      const Gate& g = m.gates[gi];
      if (state[gi] == 0) state[gi] = 1;
      if (g.kind == GateKind::Dff) {
        // Sequential element: D is evaluated, but the gate is not part of
        // the combinational order; its output is a source.
        state[gi] = 2;
        order.push_back(gi);
        stack.pop_back();
        continue;
      }
      bool descended = false;
      while (next_in < g.inputs.size()) {
        int drv = driver_of[g.inputs[next_in]];
        ++next_in;
        if (drv < 0) continue;
        uint32_t d = static_cast<uint32_t>(drv);
        if (m.gates[d].kind == GateKind::Dff) continue;
        if (state[d] == 1)
          throw NetlistError("combinational cycle through net " +
                             m.net_names[m.gates[d].output]);
        if (state[d] == 0) {
          stack.emplace_back(d, 0);
          descended = true;
          break;
        }
      }
      if (descended) continue;
      state[gi] = 2;
      order.push_back(gi);
      stack.pop_back();
    }
  }
  // Move DFFs to the end so a forward pass evaluates all combinational
  // logic before latching.
  std::stable_partition(order.begin(), order.end(), [&](uint32_t gi) {
    return m.gates[gi].kind != GateKind::Dff;
  });
  return order;
}

FlatModule flatten(const Design& design, const std::string& module_name,
                   bool allow_black_boxes) {
  return flatten_module(design, design.module(module_name), allow_black_boxes);
}

FlatModule flatten_module(const Design& design, const ModuleDef& top,
                          bool allow_black_boxes) {
  FlatModule out;
  out.flat.name = top.name;
  out.flat.ports = top.ports;

  // net map per visited instance: child NetId -> flat NetId
  struct Job {
    const ModuleDef* def;
    std::string prefix;  // "" for root, "u1.u2." otherwise
    std::string owner;   // instance path relative to root, "" for root
    std::vector<NetId> net_map;
  };

  auto map_nets = [&](Job& job) {
    job.net_map.assign(job.def->net_names.size(), kNoNet);
    for (size_t n = 0; n < job.def->net_names.size(); ++n)
      if (job.net_map[n] == kNoNet)
        job.net_map[n] = out.flat.add_net(job.prefix + job.def->net_names[n]);
  };

  std::deque<Job> work;
  {
    Job root{&top, "", "", {}};
    map_nets(root);
    for (const auto& p : top.ports) {
      std::vector<NetId> bits;
      for (NetId n : top.port_bits.at(p.name)) bits.push_back(root.net_map[n]);
      out.flat.port_bits[p.name] = std::move(bits);
    }
    work.push_back(std::move(root));
  }

  while (!work.empty()) {
    Job job = std::move(work.front());
    work.pop_front();
    for (const auto& g : job.def->gates) {
      std::vector<NetId> ins;
      ins.reserve(g.inputs.size());
      for (NetId n : g.inputs) ins.push_back(job.net_map[n]);
      out.flat.add_gate(g.kind, std::move(ins), job.net_map[g.output],
                        g.clock == kNoNet ? kNoNet : job.net_map[g.clock]);
      out.gate_owner.push_back(job.owner);
    }
    for (const auto& inst : job.def->instances) {
      const ModuleDef& child = design.module(inst.module);
      if (child.is_black_box() && !allow_black_boxes)
        throw NetlistError("cannot flatten black-box module " + child.name);
      Job sub;
      sub.def = &child;
      sub.prefix = job.prefix + inst.name + ".";
      sub.owner = job.owner.empty() ? inst.name : job.owner + "." + inst.name;
      sub.net_map.assign(child.net_names.size(), kNoNet);
      // Alias port bits onto the parent connection nets.
      for (const auto& c : inst.connections) {
        const auto& bits = child.port_bits.at(c.port);
        for (size_t b = 0; b < bits.size(); ++b)
          sub.net_map[bits[b]] = job.net_map[c.bits[b]];
      }
      for (size_t n = 0; n < child.net_names.size(); ++n)
        if (sub.net_map[n] == kNoNet)
          sub.net_map[n] = out.flat.add_net(sub.prefix + child.net_names[n]);
      auto& ports = out.instance_ports[sub.owner];
      for (const auto& p : child.ports) {
        FlatModule::PortNets pn;
        pn.port = p.name;
        pn.dir = p.dir;
        for (NetId n : child.port_bits.at(p.name)) pn.bits.push_back(sub.net_map[n]);
        ports.push_back(std::move(pn));
      }
      work.push_back(std::move(sub));
    }
  }
  return out;
}

bool structurally_equal(const ModuleDef& a, const ModuleDef& b) {
  if (a.ports.size() != b.ports.size() || a.gates.size() != b.gates.size())
    return false;
  for (size_t i = 0; i < a.ports.size(); ++i) {
    if (a.ports[i].name != b.ports[i].name || a.ports[i].dir != b.ports[i].dir ||
        a.ports[i].width != b.ports[i].width)
      return false;
  }
  if (a.instances.size() != b.instances.size()) return false;

  std::vector<NetId> a2b(a.net_names.size(), kNoNet);
  std::vector<NetId> b2a(b.net_names.size(), kNoNet);
  auto unify = [&](NetId na, NetId nb) {
    if (a2b[na] == kNoNet && b2a[nb] == kNoNet) {
      a2b[na] = nb;
      b2a[nb] = na;
      return true;
    }
    return a2b[na] == nb && b2a[nb] == na;
  };

  for (const auto& p : a.ports) {
    const auto& ba = a.port_bits.at(p.name);
    const auto& bb = b.port_bits.at(p.name);
    for (size_t i = 0; i < ba.size(); ++i)
      if (!unify(ba[i], bb[i])) return false;
  }
  // Compare in canonical order (combinational gates, then DFFs): writers
  // emit FF inference at the end of the module body, so re-parsed designs
  // have their DFFs appended regardless of original interleaving.
  auto canonical = [](const ModuleDef& m) {
    auto rank = [&](size_t i) {
      switch (m.gates[i].kind) {
        case GateKind::Const0: return 0;
        case GateKind::Const1: return 1;
        case GateKind::Dff: return 3;
        default: return 2;
      }
    };
    std::vector<size_t> idx(m.gates.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](size_t x, size_t y) { return rank(x) < rank(y); });
    return idx;
  };
  const auto ia = canonical(a);
  const auto ib = canonical(b);
  for (size_t i = 0; i < ia.size(); ++i) {
    const Gate& ga = a.gates[ia[i]];
    const Gate& gb = b.gates[ib[i]];
    if (ga.kind != gb.kind || ga.inputs.size() != gb.inputs.size()) return false;
    for (size_t k = 0; k < ga.inputs.size(); ++k)
      if (!unify(ga.inputs[k], gb.inputs[k])) return false;
    if (!unify(ga.output, gb.output)) return false;
    if ((ga.clock == kNoNet) != (gb.clock == kNoNet)) return false;
    if (ga.clock != kNoNet && !unify(ga.clock, gb.clock)) return false;
  }
  for (size_t i = 0; i < a.instances.size(); ++i) {
    const Instance& xa = a.instances[i];
    const Instance& xb = b.instances[i];
    if (xa.name != xb.name || xa.module != xb.module ||
        xa.connections.size() != xb.connections.size())
      return false;
    // Connection order may differ between front ends; match by port name.
    for (const auto& ca : xa.connections) {
      const Connection* cb = nullptr;
      for (const auto& c : xb.connections)
        if (c.port == ca.port) { cb = &c; break; }
      if (!cb || cb->bits.size() != ca.bits.size()) return false;
      for (size_t k = 0; k < ca.bits.size(); ++k)
        if (!unify(ca.bits[k], cb->bits[k])) return false;
    }
  }
  return true;
}

}  // namespace arianna
