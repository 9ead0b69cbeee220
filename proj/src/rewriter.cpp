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

#include "arianna/rewriter.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "arianna/error.hpp"
#include "arianna/verilog.hpp"

namespace arianna {
namespace {

std::vector<std::string> path_segments(const std::string& path) {
  std::vector<std::string> segs;
  size_t start = 0;
  for (size_t i = 0; i <= path.size(); ++i) {
    if (i == path.size() || path[i] == '.') {
      segs.push_back(path.substr(start, i - start));
      start = i + 1;
    }
  }
  return segs;
}

std::string parent_path(const std::string& path) {
  size_t dot = path.rfind('.');
  if (dot == std::string::npos)
    throw NetlistError("path has no parent: " + path);
  return path.substr(0, dot);
}

// Instance paths between `from` (exclusive) and its descendant `to`
// (inclusive), top-down.
std::vector<std::string> chain_between(const std::string& from,
                                       const std::string& to) {
  if (to == from) return {};
  if (to.rfind(from + ".", 0) != 0)
    throw NetlistError("path " + to + " is not below " + from);
  std::vector<std::string> chain;
  std::string cur = to;
  while (cur != from) {
    chain.push_back(cur);
    cur = parent_path(cur);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), '.', '_');
  return s;
}

// Port/net name allocation with deterministic suffix disambiguation.
std::string alloc_name(const ModuleDef& m, const std::string& base) {
  auto free_name = [&](const std::string& name) {
    if (m.find_port(name)) return false;
    if (m.find_net(name) != kNoNet) return false;
    if (m.find_net(name + "[0]") != kNoNet) return false;
    return true;
  };
  if (free_name(base)) return base;
  for (int i = 1; i < 100; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (free_name(cand)) return cand;
  }
  throw NetlistError("cannot allocate a unique port name for " + base);
}

std::vector<NetId> add_port(ModuleDef& m, const std::string& base, PortDir dir,
                            int width, std::string* actual = nullptr) {
  std::string name = alloc_name(m, base);
  m.ports.push_back({name, dir, width});
  auto bits = m.add_signal(name, width);
  m.port_bits[name] = bits;
  if (actual) *actual = name;
  return bits;
}

struct Rewriter {
  Design d;  // working copy
  int clone_counter = 0;

  explicit Rewriter(const Design& original) : d(original) {}

  ModuleDef& module_at(const std::string& path) {
    return d.module(module_name_at(path));
  }

  std::string module_name_at(const std::string& path) {
    auto segs = path_segments(path);
    if (segs.empty() || segs[0] != d.top)
      throw NetlistError("path not under top: " + path);
    std::string cur = d.top;
    for (size_t i = 1; i < segs.size(); ++i) {
      const ModuleDef& m = d.module(cur);
      const Instance* found = nullptr;
      for (const auto& inst : m.instances)
        if (inst.name == segs[i]) {
          found = &inst;
          break;
        }
      if (!found)
        throw NetlistError("instance path not found: " + path);
      cur = found->module;
    }
    return cur;
  }

  int instantiation_count(const std::string& module_name) const {
    int count = 0;
    for (const auto& [name, m] : d.modules)
      for (const auto& inst : m.instances)
        if (inst.module == module_name) ++count;
    return count;
  }

  // Clone-on-write along the chain top..path so edits stay local to this
  // instance subtree.
  void uniquify_chain(const std::string& path) {
    auto segs = path_segments(path);
    std::string parent_module = d.top;
    for (size_t i = 1; i < segs.size(); ++i) {
      ModuleDef& pm = d.module(parent_module);
      Instance* inst = nullptr;
      for (auto& x : pm.instances)
        if (x.name == segs[i]) {
          inst = &x;
          break;
        }
      if (!inst) throw NetlistError("instance path not found: " + path);
      if (instantiation_count(inst->module) > 1) {
        std::string clone_name;
        do {
          clone_name = inst->module + "_r" + std::to_string(clone_counter++);
        } while (d.modules.count(clone_name));
        ModuleDef clone = d.module(inst->module);
        clone.name = clone_name;
        d.modules.emplace(clone_name, std::move(clone));
        inst->module = clone_name;
      }
      parent_module = inst->module;
    }
  }

  // Carries `width` bits between the module at `lower_path` and the module
  // at `upper_path` by punching ports through every hop. dir_up: the data
  // originates at lower (punched ports are outputs); otherwise the data
  // flows down (inputs). `lower_nets` are the existing nets at lower_path.
  // Returns the connection nets created in the upper module; these become a
  // real port there when `expose_at_upper` is set (configuration signals
  // surfacing as primary ports).
  std::vector<NetId> punch(const std::string& lower_path,
                           const std::string& upper_path, bool dir_up,
                           const std::string& base, int width,
                           const std::vector<NetId>& lower_nets,
                           bool expose_at_upper = false) {
    auto chain = chain_between(upper_path, lower_path);  // top-down
    // Bottom module: bridge existing nets onto a fresh port.
    ModuleDef& bottom = module_at(lower_path);
    std::string bottom_port;
    auto bottom_bits = add_port(bottom, base, dir_up ? PortDir::Output : PortDir::Input,
                                width, &bottom_port);
    for (int b = 0; b < width; ++b) {
      if (dir_up)
        bottom.add_gate(GateKind::Buf, {lower_nets[static_cast<size_t>(b)]},
                        bottom_bits[static_cast<size_t>(b)]);
      else
        bottom.add_gate(GateKind::Buf, {bottom_bits[static_cast<size_t>(b)]},
                        lower_nets[static_cast<size_t>(b)]);
    }

    // Walk upward: connect the child's port in each parent, re-exporting
    // through a same-named port until the upper module is reached.
    std::string child_port = bottom_port;
    for (size_t i = chain.size(); i-- > 0;) {
      const std::string cur_path = chain[i];
      const std::string above_path =
          i == 0 ? upper_path : chain[i - 1];
      ModuleDef& above = d.module(module_name_at(above_path));
      const std::string inst_name = path_segments(cur_path).back();

      std::vector<NetId> conn;
      std::string port_name;
      if (above_path == upper_path && !expose_at_upper) {
        // destination: plain local nets
        std::string wire = alloc_name(above, base);
        conn = above.add_signal(wire, width);
      } else {
        conn = add_port(above, base, dir_up ? PortDir::Output : PortDir::Input,
                        width, &port_name);
      }
      for (auto& inst : above.instances)
        if (inst.name == inst_name) {
          inst.connections.push_back({child_port, conn});
          break;
        }
      if (above_path == upper_path) return conn;
      child_port = port_name;
    }
    // chain empty: lower == upper handled by caller
    throw NetlistError("punch called with equal paths");
  }
};

}  // namespace

RedactionPlan plan_redaction(const Design& design, const Solution& solution,
                             const std::vector<CandidateFabric>& fabrics) {
  InstanceTree tree = design.instance_tree();
  RedactionPlan plan;

  for (size_t si = 0; si < solution.fabrics.size(); ++si) {
    const CandidateFabric& f = fabrics[solution.fabrics[si]];
    EfpgaPlan ep;
    ep.fabric_index = solution.fabrics[si];
    ep.shell_module = "efpga_" + std::to_string(si);

    // insertion = LCA over members; a singleton's LCA is the member itself,
    // so fall back to its parent.
    int lca_node = -1;
    for (const auto& m : f.cluster.members) {
      int node = tree.find(m);
      if (node < 0) throw NetlistError("member path missing: " + m);
      lca_node = lca_node < 0 ? node : tree.lca(lca_node, node);
    }
    for (const auto& m : f.cluster.members)
      if (tree.nodes[static_cast<size_t>(lca_node)].path == m)
        lca_node = tree.nodes[static_cast<size_t>(lca_node)].parent;
    ep.insertion_path = tree.nodes[static_cast<size_t>(lca_node)].path;

    for (const auto& pm : f.wrapper.port_map) {
      const ModuleDef& member_def = design.module(tree.at(pm.member_path).module);
      const PortDecl* port = member_def.find_port(pm.member_port);
      ep.reroutes.push_back({pm.member_path, pm.member_port, pm.wrapper_port,
                             port->width});
      // punched hops: member parent up to (exclusive) the insertion module
      std::string parent = parent_path(pm.member_path);
      for (const auto& via : chain_between(ep.insertion_path, parent)) {
        PunchSpec ps;
        ps.via_instance_path = via;
        // member inputs travel up to the shell; outputs travel down
        ps.dir = port->dir == PortDir::Input ? PortDir::Output : PortDir::Input;
        ps.base_name = sanitize(ep.shell_module + "_" + pm.wrapper_port);
        ps.width = port->width;
        ps.member_path = pm.member_path;
        ps.member_port = pm.member_port;
        ep.punched.push_back(std::move(ps));
      }
    }
    plan.efpgas.push_back(std::move(ep));
  }
  return plan;
}

RedactedDesign apply_redaction(const Design& design, const RedactionPlan& plan,
                               const std::vector<CandidateFabric>& fabrics) {
  Rewriter rw(design);
  const InstanceTree original_tree = design.instance_tree();
  std::set<std::string> redacted_paths;

  for (const auto& ep : plan.efpgas) {
    const CandidateFabric& f = fabrics[ep.fabric_index];

    // Clone every shared module along the edited chains first.
    for (const auto& m : f.cluster.members) rw.uniquify_chain(parent_path(m));
    rw.uniquify_chain(ep.insertion_path);

    // Shell black box: wrapper interface plus configuration ports.
    std::string shell_name = ep.shell_module;
    while (rw.d.modules.count(shell_name)) shell_name += "_x";
    ModuleDef shell;
    shell.name = shell_name;
    for (const auto& p : f.wrapper.def.ports) {
      shell.ports.push_back(p);
      shell.port_bits[p.name] = shell.add_signal(p.name, p.width);
    }
    for (const char* cp : {"prog_clk", "scan_in", "op_clk"}) {
      shell.ports.push_back({cp, PortDir::Input, 1});
      shell.port_bits[cp] = shell.add_signal(cp, 1);
    }
    shell.ports.push_back({"scan_out", PortDir::Output, 1});
    shell.port_bits["scan_out"] = shell.add_signal("scan_out", 1);
    rw.d.modules.emplace(shell_name, std::move(shell));

    ModuleDef& insertion = rw.module_at(ep.insertion_path);
    Instance shell_inst;
    shell_inst.name = ep.shell_module;  // instance names live per module
    for (const auto& inst : insertion.instances)
      if (inst.name == shell_inst.name)
        throw NetlistError("instance name collision for " + shell_inst.name);
    shell_inst.module = shell_name;

    // Detach members, recording their connection nets.
    struct Detached {
      std::string parent;  // instance path of the member's parent
      std::map<std::string, std::vector<NetId>> nets;  // port -> parent nets
    };
    std::map<std::string, Detached> detached;
    for (const auto& mpath : f.cluster.members) {
      Detached det;
      det.parent = parent_path(mpath);
      ModuleDef& pm = rw.module_at(det.parent);
      const std::string inst_name = path_segments(mpath).back();
      auto it = std::find_if(pm.instances.begin(), pm.instances.end(),
                             [&](const Instance& x) { return x.name == inst_name; });
      if (it == pm.instances.end())
        throw NetlistError("member path missing: " + mpath);
      for (const auto& c : it->connections) det.nets[c.port] = c.bits;
      pm.instances.erase(it);
      detached.emplace(mpath, std::move(det));
      redacted_paths.insert(mpath);
    }

    // Wire every wrapper port to the shell, punching through intermediates.
    for (const auto& re : ep.reroutes) {
      const Detached& det = detached.at(re.member_path);
      const auto& member_nets = det.nets.at(re.member_port);
      const ModuleDef& member_def =
          design.module(original_tree.at(re.member_path).module);
      const PortDecl* mp = member_def.find_port(re.member_port);

      std::vector<NetId> at_insertion;
      if (det.parent == ep.insertion_path) {
        at_insertion = member_nets;
      } else {
        // member inputs flow up into the shell, outputs flow down
        const bool up = mp->dir == PortDir::Input;
        at_insertion =
            rw.punch(det.parent, ep.insertion_path, up,
                     sanitize(ep.shell_module + "_" + re.shell_port),
                     re.width, member_nets);
      }
      shell_inst.connections.push_back({re.shell_port, at_insertion});
    }

    // Configuration ports propagate to the top as new primary ports.
    {
      ModuleDef& ins = rw.module_at(ep.insertion_path);
      for (const char* cp : {"prog_clk", "scan_in", "op_clk", "scan_out"}) {
        const bool up = std::string(cp) == "scan_out";
        const std::string base = ep.shell_module + "_" + cp;
        std::vector<NetId> local;
        if (ep.insertion_path == rw.d.top) {
          local = add_port(ins, base, up ? PortDir::Output : PortDir::Input, 1);
        } else {
          std::string wire = alloc_name(ins, base + "_w");
          local = ins.add_signal(wire, 1);
        }
        shell_inst.connections.push_back({cp, local});
        if (ep.insertion_path != rw.d.top) {
          // ride the same punch machinery from the insertion module up,
          // surfacing as a primary port
          rw.punch(ep.insertion_path, rw.d.top, up, base, 1, local,
                   /*expose_at_upper=*/true);
        }
      }
    }

    rw.module_at(ep.insertion_path).instances.push_back(std::move(shell_inst));
  }

  RedactedDesign out;
  out.design = std::move(rw.d);
  for (const auto& ep : plan.efpgas) out.shell_modules.push_back(ep.shell_module);
  out.redacted_instances.assign(redacted_paths.begin(), redacted_paths.end());
  validate(out.design);
  return out;
}

Design bind_configured_shells(const RedactedDesign& redacted,
                              const RedactionPlan& plan,
                              const std::vector<CandidateFabric>& fabrics) {
  Design bound = redacted.design;
  for (size_t i = 0; i < plan.efpgas.size(); ++i) {
    const EfpgaPlan& ep = plan.efpgas[i];
    const CandidateFabric& f = fabrics[ep.fabric_index];
    const std::string& shell_name = redacted.shell_modules[i];

    FlatModule iface = flatten_module(redacted.design, f.wrapper.def);
    ModuleDef body = build_lut_module(f.result.network, iface.flat, shell_name);
    // configuration pins exist on the shell interface but carry no data in
    // the configured model
    for (const char* cp : {"prog_clk", "scan_in", "op_clk"}) {
      body.ports.push_back({cp, PortDir::Input, 1});
      body.port_bits[cp] = body.add_signal(cp, 1);
    }
    body.ports.push_back({"scan_out", PortDir::Output, 1});
    auto so = body.add_signal("scan_out", 1);
    body.port_bits["scan_out"] = so;
    body.add_gate(GateKind::Const0, {}, so[0]);

    bound.modules.at(shell_name) = std::move(body);
  }
  validate(bound);
  return bound;
}

namespace {

std::set<std::string> reachable_modules(const Design& d) {
  std::set<std::string> seen;
  std::vector<std::string> work{d.top};
  while (!work.empty()) {
    std::string name = work.back();
    work.pop_back();
    if (!seen.insert(name).second) continue;
    for (const auto& inst : d.module(name).instances) work.push_back(inst.module);
  }
  return seen;
}

}  // namespace

std::vector<std::string> emit_redaction(const RedactedDesign& redacted,
                                        const RedactionPlan& plan,
                                        const std::vector<CandidateFabric>& fabrics,
                                        const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;

  // reachable modules only: redacted bodies must not leak into the output
  Design pruned;
  pruned.top = redacted.design.top;
  for (const auto& name : reachable_modules(redacted.design))
    pruned.modules.emplace(name, redacted.design.module(name));

  auto write_file = [&](const std::string& name, const std::string& content) {
    fs::path p = fs::path(out_dir) / name;
    std::ofstream os(p, std::ios::binary);
    if (!os) throw FlowError("emit", "cannot write " + p.string());
    os << content;
    written.push_back(p.string());
  };

  write_file("top_redacted.v", write_verilog(pruned));

  nlohmann::json manifest;
  manifest["top"] = redacted.design.top;
  nlohmann::json efpgas = nlohmann::json::array();
  for (size_t i = 0; i < plan.efpgas.size(); ++i) {
    const EfpgaPlan& ep = plan.efpgas[i];
    const CandidateFabric& f = fabrics[ep.fabric_index];
    std::string spec_name = "efpga_" + std::to_string(i) + ".fabric.json";
    write_file(spec_name, fabric_json(f.result));

    nlohmann::json je;
    je["index"] = i;
    je["shell_module"] = redacted.shell_modules[i];
    je["insertion"] = ep.insertion_path;
    je["members"] = f.cluster.members;
    je["n"] = f.params.n;
    je["k"] = f.params.k;
    je["grid_side"] = f.result.grid_side;
    je["bitstream_bits"] = f.result.bitstream_bits;
    je["fabric_spec"] = spec_name;
    efpgas.push_back(std::move(je));
  }
  manifest["efpgas"] = std::move(efpgas);
  manifest["redacted_instances"] = redacted.redacted_instances;
  write_file("manifest.json", manifest.dump(2) + "\n");
  return written;
}

}  // namespace arianna
