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

#ifndef ARIANNA_NETLIST_HPP
#define ARIANNA_NETLIST_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace arianna {

using NetId = uint32_t;
inline constexpr NetId kNoNet = 0xffffffffu;

enum class PortDir { Input, Output };

enum class GateKind {
  And,
  Or,
  Not,
  Xor,
  Nand,
  Nor,
  Xnor,
  Mux2,
  Buf,
  Const0,
  Const1,
  Dff,
};

const char* gate_kind_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(const std::string& name);

/// Number of data inputs for a gate kind. DFF counts its D pin only;
/// the clock is carried separately.
int gate_arity(GateKind kind);

struct PortDecl {
  std::string name;
  PortDir dir = PortDir::Input;
  int width = 1;
};

/// One primitive gate over single-bit nets. MUX2 input order is
/// {select, a, b} with out = select ? a : b (select high picks `a`).
struct Gate {
  GateKind kind;
  std::vector<NetId> inputs;
  NetId output = kNoNet;
  NetId clock = kNoNet;  // Dff only
};

struct Connection {
  std::string port;           // child port name
  std::vector<NetId> bits;    // parent nets, LSB first, one per port bit
};

struct Instance {
  std::string name;
  std::string module;
  std::vector<Connection> connections;
};

/// A module body over single-bit nets. Multi-bit signals are bit-blasted at
/// construction; bit b of signal `s` is the net named "s[b]" (scalar signals
/// keep their plain name). A module with no gates and no instances is a
/// black box: its outputs are intentionally undriven.
struct ModuleDef {
  std::string name;
  std::vector<PortDecl> ports;
  std::vector<std::string> net_names;  // index == NetId
  std::vector<Gate> gates;
  std::vector<Instance> instances;
  std::map<std::string, std::vector<NetId>> port_bits;  // LSB first

  NetId add_net(const std::string& name);
  /// Declares a signal of `width` bits and returns its nets, LSB first.
  std::vector<NetId> add_signal(const std::string& name, int width);
  NetId find_net(const std::string& name) const;  // kNoNet if absent
  Gate& add_gate(GateKind kind, std::vector<NetId> inputs, NetId output,
                 NetId clock = kNoNet);

  const PortDecl* find_port(const std::string& name) const;
  bool is_black_box() const { return gates.empty() && instances.empty(); }
  /// Total input+output bit count of the interface.
  int io_pin_count() const;

 private:
  std::unordered_map<std::string, NetId> net_index_;
};

/// Instance hierarchy as a rooted tree. Paths are dot-joined instance names
/// starting at the top module name, e.g. "top.u_core.sbox1".
struct InstanceTree {
  struct Node {
    std::string path;
    std::string inst_name;
    std::string module;
    int parent = -1;
    std::vector<int> children;
  };

  std::vector<Node> nodes;  // nodes[0] is the root
  std::unordered_map<std::string, int> index_by_path;

  int find(const std::string& path) const;
  bool is_ancestor(int a, int b) const;  // strict: a above b
  int lca(int a, int b) const;
  const Node& at(const std::string& path) const;
};

struct Design {
  std::string top;
  std::map<std::string, ModuleDef> modules;

  const ModuleDef& module(const std::string& name) const;
  ModuleDef& module(const std::string& name);

  /// Builds the instance tree rooted at `top`. Throws NetlistError on
  /// recursive instantiation or unresolved module references.
  InstanceTree instance_tree() const;
};

/// Checks every structural invariant: unique names, widths >= 1, gate
/// arities, at most one driver per net, complete instance connections,
/// acyclic hierarchy, and combinational acyclicity per module body.
/// Throws NetlistError with a description of the first violation.
void validate(const Design& design);

/// Flattened view of one module: gates only, hierarchical nets renamed
/// "inst.sub.net". `gate_owner[i]` is the instance path owning gate i
/// ("" for gates of the root module itself). `instance_ports` records, for
/// every descendant instance (path relative to the root, e.g. "u1.u2"),
/// the flat nets of each of its port bits.
struct FlatModule {
  ModuleDef flat;
  std::vector<std::string> gate_owner;
  struct PortNets {
    std::string port;
    PortDir dir = PortDir::Input;
    std::vector<NetId> bits;
  };
  std::map<std::string, std::vector<PortNets>> instance_ports;
};

/// Inlines the full hierarchy below `module_name`. Child port bits are
/// aliased onto the parent connection nets (no buffer gates inserted).
/// Black-box children are an error unless `allow_black_boxes` is set, in
/// which case their output bits are left undriven (they simulate as 0).
FlatModule flatten(const Design& design, const std::string& module_name,
                   bool allow_black_boxes = false);

/// Same, rooted at a module that need not be registered in `design`
/// (wrapper modules resolve their children against the design).
FlatModule flatten_module(const Design& design, const ModuleDef& root,
                          bool allow_black_boxes = false);

/// Topological order of the combinational gates (DFF outputs act as
/// sources). Throws NetlistError naming a net on a combinational cycle.
std::vector<uint32_t> topo_order(const ModuleDef& module);

/// Order-sensitive structural equality: same ports, same gate sequence, and
/// a consistent net bijection anchored at the port bits. This is the "equal
/// under net renaming" check used by the round-trip tests; it relies on
/// writers preserving gate order.
bool structurally_equal(const ModuleDef& a, const ModuleDef& b);

}  // namespace arianna

#endif  // ARIANNA_NETLIST_HPP
