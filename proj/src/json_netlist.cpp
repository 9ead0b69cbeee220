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

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "arianna/error.hpp"
#include "arianna/json_netlist.hpp"

namespace arianna {
namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& where, const std::string& msg) {
  throw ParseError(where, msg);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      schema_fail(where, "unknown field \"" + it.key() + "\"");
}

struct NetRef {
  std::string base;
  int lo = -1, hi = -1;  // -1/-1: whole signal
};

NetRef parse_ref(const std::string& s, const std::string& where) {
  NetRef r;
  size_t lb = s.find('[');
  if (lb == std::string::npos) {
    r.base = s;
    if (r.base.empty()) schema_fail(where, "empty net reference");
    return r;
  }
  if (s.back() != ']') schema_fail(where, "malformed net reference " + s);
  r.base = s.substr(0, lb);
  std::string sel = s.substr(lb + 1, s.size() - lb - 2);
  size_t colon = sel.find(':');
  try {
    if (colon == std::string::npos) {
      r.lo = r.hi = std::stoi(sel);
    } else {
      r.hi = std::stoi(sel.substr(0, colon));
      r.lo = std::stoi(sel.substr(colon + 1));
    }
  } catch (...) {
    schema_fail(where, "malformed net reference " + s);
  }
  if (r.lo < 0 || r.hi < r.lo) schema_fail(where, "bad bit range in " + s);
  return r;
}

class ModuleBuilder {
 public:
  ModuleBuilder(const json& jm, const std::string& name) : jm_(jm), where_("module " + name) {
    m_.name = name;
  }

  ModuleDef build() {
    check_keys(jm_, {"ports", "gates", "instances"}, where_);
    collect_widths();
    build_ports();
    build_gates();
    build_instances();
    return std::move(m_);
  }

 private:
  const json& jm_;
  std::string where_;
  ModuleDef m_;
  std::map<std::string, int> width_;         // signal -> width
  std::map<std::string, bool> indexed_use_;  // ever referenced with [i]
  std::map<std::string, std::vector<NetId>> bits_;

  void note_ref(const NetRef& r) {
    int need = r.hi < 0 ? 1 : r.hi + 1;
    auto [it, fresh] = width_.emplace(r.base, need);
    if (!fresh) it->second = std::max(it->second, need);
    auto [iu, fresh2] = indexed_use_.emplace(r.base, r.hi >= 0);
    if (!fresh2 && iu->second != (r.hi >= 0)) {
      // Mixed scalar + indexed use of the same name is ambiguous unless the
      // signal is a declared 1-bit port indexed as [0].
      if (!(r.hi <= 0)) schema_fail(where_, "signal " + r.base + " used both as scalar and vector");
    }
  }

  const json& expect_array(const json& j, const char* field) {
    if (!jm_.contains(field)) {
      static const json empty = json::array();
      return empty;
    }
    if (!j.is_array()) schema_fail(where_, std::string(field) + " must be an array");
    return j;
  }

  void collect_widths() {
    if (!jm_.contains("ports")) schema_fail(where_, "missing \"ports\"");
    const json& ports = jm_.at("ports");
    if (!ports.is_array()) schema_fail(where_, "ports must be an array");
    for (const auto& jp : ports) {
      check_keys(jp, {"name", "dir", "width"}, where_ + " port");
      for (const char* f : {"name", "dir"})
        if (!jp.contains(f) || !jp.at(f).is_string())
          schema_fail(where_, std::string("port needs string \"") + f + "\"");
      if (!jp.contains("width") || !jp.at("width").is_number_integer())
        schema_fail(where_, "port needs integer \"width\"");
      std::string pname = jp.at("name");
      int w = jp.at("width");
      if (w < 1) schema_fail(where_, "port " + pname + " width must be >= 1");
      if (width_.count(pname)) schema_fail(where_, "duplicate port " + pname);
      width_[pname] = w;
      indexed_use_[pname] = w > 1;
    }
    auto scan_pin = [&](const json& j, const char* what) {
      if (!j.is_string()) schema_fail(where_, std::string(what) + " must be a string");
      NetRef r = parse_ref(j.get<std::string>(), where_);
      if (r.hi != r.lo && !(r.hi < 0 && r.lo < 0))
        schema_fail(where_, std::string(what) + " must reference one bit");
      note_ref(r);
    };
    if (jm_.contains("gates")) {
      for (const auto& jg : expect_array(jm_.at("gates"), "gates")) {
        check_keys(jg, {"kind", "inputs", "output"}, where_ + " gate");
        if (!jg.contains("inputs") || !jg.at("inputs").is_array())
          schema_fail(where_, "gate needs an \"inputs\" array");
        for (const auto& in : jg.at("inputs")) scan_pin(in, "gate input");
        if (!jg.contains("output")) schema_fail(where_, "gate needs \"output\"");
        scan_pin(jg.at("output"), "gate output");
      }
    }
    if (jm_.contains("instances")) {
      for (const auto& ji : expect_array(jm_.at("instances"), "instances")) {
        check_keys(ji, {"name", "module", "connections"}, where_ + " instance");
        if (!ji.contains("connections") || !ji.at("connections").is_object())
          schema_fail(where_, "instance needs a \"connections\" object");
        for (auto it = ji.at("connections").begin(); it != ji.at("connections").end(); ++it) {
          const json& v = it.value();
          if (v.is_string()) {
            note_ref(parse_ref(v.get<std::string>(), where_));
          } else if (v.is_array()) {
            for (const auto& e : v) {
              if (!e.is_string()) schema_fail(where_, "connection array entries must be strings");
              note_ref(parse_ref(e.get<std::string>(), where_));
            }
          } else {
            schema_fail(where_, "connection must be a string or array");
          }
        }
      }
    }
  }

  void materialize() {
    // Ports use their declared width; internal signals take the widest
    // reference seen. add_signal names 1-bit signals without a [0] suffix,
    // so an indexed 1-bit use ("w[0]") still resolves through bits_.
    for (const auto& [name, w] : width_) bits_[name] = m_.add_signal(name, w);
  }

  std::vector<NetId> resolve(const NetRef& r) {
    auto it = bits_.find(r.base);
    if (it == bits_.end()) schema_fail(where_, "unknown signal " + r.base);
    const auto& all = it->second;
    if (r.hi < 0) return all;
    if (static_cast<size_t>(r.hi) >= all.size())
      schema_fail(where_, "bit index out of range on " + r.base);
    return std::vector<NetId>(all.begin() + r.lo, all.begin() + r.hi + 1);
  }

  NetId resolve_bit(const std::string& s) {
    auto v = resolve(parse_ref(s, where_));
    if (v.size() != 1) schema_fail(where_, "reference " + s + " is not one bit");
    return v[0];
  }

  void build_ports() {
    materialize();
    const json& ports = jm_.at("ports");
    for (const auto& jp : ports) {
      PortDecl p;
      p.name = jp.at("name");
      std::string dir = jp.at("dir");
      if (dir == "input")
        p.dir = PortDir::Input;
      else if (dir == "output")
        p.dir = PortDir::Output;
      else
        schema_fail(where_, "port " + p.name + ": dir must be \"input\" or \"output\"");
      p.width = jp.at("width");
      m_.ports.push_back(p);
      m_.port_bits[p.name] = bits_.at(p.name);
    }
  }

  void build_gates() {
    if (!jm_.contains("gates")) return;
    for (const auto& jg : jm_.at("gates")) {
      if (!jg.at("kind").is_string()) schema_fail(where_, "gate kind must be a string");
      auto kind = gate_kind_from_name(jg.at("kind"));
      if (!kind)
        schema_fail(where_, "unknown gate kind \"" + jg.at("kind").get<std::string>() + "\"");
      std::vector<NetId> ins;
      for (const auto& in : jg.at("inputs"))
        ins.push_back(resolve_bit(in.get<std::string>()));
      NetId out = resolve_bit(jg.at("output").get<std::string>());
      NetId clk = kNoNet;
      if (*kind == GateKind::Dff) {
        if (ins.size() != 2)
          schema_fail(where_, "DFF inputs must be [data, clock]");
        clk = ins[1];
        ins.resize(1);
      } else if (ins.size() != static_cast<size_t>(gate_arity(*kind))) {
        schema_fail(where_, std::string(gate_kind_name(*kind)) + " gate expects " +
                                std::to_string(gate_arity(*kind)) + " inputs");
      }
      m_.add_gate(*kind, std::move(ins), out, clk);
    }
  }

  void build_instances() {
    if (!jm_.contains("instances")) return;
    for (const auto& ji : jm_.at("instances")) {
      for (const char* f : {"name", "module"})
        if (!ji.contains(f) || !ji.at(f).is_string())
          schema_fail(where_, std::string("instance needs string \"") + f + "\"");
      Instance inst;
      inst.name = ji.at("name");
      inst.module = ji.at("module");
      for (auto it = ji.at("connections").begin(); it != ji.at("connections").end(); ++it) {
        Connection c;
        c.port = it.key();
        const json& v = it.value();
        if (v.is_string()) {
          c.bits = resolve(parse_ref(v.get<std::string>(), where_));
        } else {
          // array entries are MSB first, mirroring a Verilog concat
          for (size_t i = v.size(); i-- > 0;) {
            auto bits = resolve(parse_ref(v.at(i).get<std::string>(), where_));
            c.bits.insert(c.bits.end(), bits.begin(), bits.end());
          }
        }
        inst.connections.push_back(std::move(c));
      }
      std::sort(inst.connections.begin(), inst.connections.end(),
                [](const Connection& a, const Connection& b) { return a.port < b.port; });
      m_.instances.push_back(std::move(inst));
    }
  }
};

std::string bit_name(const ModuleDef& m, NetId n) { return m.net_names[n]; }

json refs_json(const ModuleDef& m, const std::vector<NetId>& bits) {
  // Emit an MSB-first array unless the run is a single whole-signal span.
  json arr = json::array();
  for (size_t i = bits.size(); i-- > 0;) arr.push_back(bit_name(m, bits[i]));
  if (arr.size() == 1) return arr.at(0);
  return arr;
}

}  // namespace

Design parse_json_ir(const std::string& source, bool standalone) {
  json root;
  try {
    root = json::parse(source);
  } catch (const json::exception& e) {
    throw ParseError("", std::string("JSON parse error: ") + e.what());
  }
  if (!root.is_object()) schema_fail("$", "top level must be an object");
  check_keys(root, {"top", "modules"}, "$");
  if (!root.contains("top") || !root.at("top").is_string())
    schema_fail("$", "missing string \"top\"");
  if (!root.contains("modules") || !root.at("modules").is_object())
    schema_fail("$", "missing object \"modules\"");

  Design d;
  d.top = root.at("top");
  for (auto it = root.at("modules").begin(); it != root.at("modules").end(); ++it) {
    if (!it.value().is_object())
      schema_fail("modules", "module " + it.key() + " must be an object");
    d.modules.emplace(it.key(), ModuleBuilder(it.value(), it.key()).build());
  }
  if (standalone) validate(d);
  return d;
}

std::string write_json_ir(const Design& design) {
  json root;
  root["top"] = design.top;
  json mods = json::object();
  for (const auto& [name, m] : design.modules) {
    json jm;
    json ports = json::array();
    for (const auto& p : m.ports)
      ports.push_back({{"name", p.name},
                       {"dir", p.dir == PortDir::Input ? "input" : "output"},
                       {"width", p.width}});
    jm["ports"] = std::move(ports);
    json gates = json::array();
    for (const auto& g : m.gates) {
      json jg;
      jg["kind"] = gate_kind_name(g.kind);
      json ins = json::array();
      for (NetId in : g.inputs) ins.push_back(bit_name(m, in));
      if (g.kind == GateKind::Dff) ins.push_back(bit_name(m, g.clock));
      jg["inputs"] = std::move(ins);
      jg["output"] = bit_name(m, g.output);
      gates.push_back(std::move(jg));
    }
    jm["gates"] = std::move(gates);
    json insts = json::array();
    for (const auto& inst : m.instances) {
      json ji;
      ji["name"] = inst.name;
      ji["module"] = inst.module;
      json conns = json::object();
      for (const auto& c : inst.connections) conns[c.port] = refs_json(m, c.bits);
      ji["connections"] = std::move(conns);
      insts.push_back(std::move(ji));
    }
    jm["instances"] = std::move(insts);
    mods[name] = std::move(jm);
  }
  root["modules"] = std::move(mods);
  return root.dump(2) + "\n";
}

}  // namespace arianna
