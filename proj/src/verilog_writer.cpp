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
#include <sstream>
#include <vector>

#include "arianna/error.hpp"
#include "arianna/verilog.hpp"

namespace arianna {
namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

struct SignalRef {
  std::string base;
  int index = -1;  // -1: scalar
};

// Splits "name[3]" into base/index; scalars keep index -1.
SignalRef split_net_name(const std::string& n) {
  SignalRef r;
  if (!n.empty() && n.back() == ']') {
    size_t lb = n.rfind('[');
    if (lb != std::string::npos && lb + 1 < n.size() - 1 + 1) {
      bool digits = true;
      for (size_t i = lb + 1; i + 1 < n.size(); ++i)
        if (!isdigit(static_cast<unsigned char>(n[i]))) digits = false;
      if (digits && lb + 1 < n.size() - 1) {
        r.base = n.substr(0, lb);
        r.index = std::stoi(n.substr(lb + 1, n.size() - lb - 2));
        return r;
      }
    }
  }
  r.base = n;
  return r;
}

class ModuleWriter {
 public:
  ModuleWriter(const Design& design, const ModuleDef& m) : design_(design), m_(m) {
    analyze();
  }

  void print(std::ostream& os) {
    os << "module " << m_.name << "(";
    for (size_t i = 0; i < m_.ports.size(); ++i) {
      const auto& p = m_.ports[i];
      if (i) os << ", ";
      os << (p.dir == PortDir::Input ? "input " : "output ");
      if (reg_signals_.count(p.name)) os << "reg ";
      if (p.width > 1) os << "[" << p.width - 1 << ":0] ";
      os << p.name;
    }
    os << ");\n";

    for (const auto& [base, width] : internal_signals_) {
      os << "  " << (reg_signals_.count(base) ? "reg" : "wire");
      if (width > 1) os << " [" << width - 1 << ":0]";
      os << " " << base << ";\n";
    }

    for (const auto& g : m_.gates) {
      if (g.kind == GateKind::Dff || g.kind == GateKind::Const0 ||
          g.kind == GateKind::Const1)
        continue;
      os << "  assign " << ref(g.output) << " = " << gate_expr(g) << ";\n";
    }

    // One always block per clock net (the subset allows a single clock, but
    // the grouping keeps emission total for any validated design).
    std::map<NetId, std::vector<const Gate*>> by_clock;
    for (const auto& g : m_.gates)
      if (g.kind == GateKind::Dff) by_clock[g.clock].push_back(&g);
    for (const auto& [clk, ffs] : by_clock) {
      os << "  always @(posedge " << ref(clk) << ") begin\n";
      for (const Gate* g : ffs)
        os << "    " << ref(g->output) << " <= " << ref(g->inputs[0]) << ";\n";
      os << "  end\n";
    }

    for (const auto& inst : m_.instances) {
      os << "  " << inst.module << " " << inst.name << "(";
      for (size_t i = 0; i < inst.connections.size(); ++i) {
        const auto& c = inst.connections[i];
        if (i) os << ", ";
        os << "." << c.port << "(" << bit_group(c.bits) << ")";
      }
      os << ");\n";
    }
    os << "endmodule\n";
  }

 private:
  const Design& design_;
  const ModuleDef& m_;
  std::vector<SignalRef> net_ref_;                 // per NetId
  std::map<std::string, int> internal_signals_;    // base -> width
  std::map<std::string, bool> reg_signals_;
  NetId const0_net_ = kNoNet, const1_net_ = kNoNet;

  void analyze() {
    net_ref_.resize(m_.net_names.size());
    std::map<std::string, int> max_index;
    std::map<std::string, bool> is_port;
    for (const auto& p : m_.ports) is_port[p.name] = true;

    for (const auto& g : m_.gates) {
      if (g.kind == GateKind::Const0) const0_net_ = g.output;
      if (g.kind == GateKind::Const1) const1_net_ = g.output;
    }

    std::map<std::string, int> used;  // sanitized-name collision counter
    for (NetId n = 0; n < m_.net_names.size(); ++n) {
      SignalRef r = split_net_name(m_.net_names[n]);
      if (!valid_identifier(r.base)) {
        std::string s = r.base;
        for (char& c : s)
          if (!isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
        if (s.empty() || (!isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_'))
          s = "n_" + s;
        int k = used[s]++;
        if (k) s += "_" + std::to_string(k);
        r.base = s;
        if (r.index >= 0) r.base += "_b" + std::to_string(r.index), r.index = -1;
      }
      net_ref_[n] = r;
      if (r.index >= 0)
        max_index[r.base] = std::max(max_index[r.base], r.index);
      else
        max_index.emplace(r.base, -1);
    }
    for (const auto& [base, mi] : max_index)
      if (!is_port.count(base)) internal_signals_[base] = mi < 0 ? 1 : mi + 1;

    for (const auto& g : m_.gates)
      if (g.kind == GateKind::Dff) reg_signals_[net_ref_[g.output].base] = true;

    // A vector mixing DFF- and logic-driven bits cannot be declared.
    for (const auto& g : m_.gates) {
      if (g.kind == GateKind::Dff) continue;
      if (reg_signals_.count(net_ref_[g.output].base) &&
          net_ref_[g.output].index >= 0)
        throw NetlistError("module " + m_.name + ": signal " +
                           net_ref_[g.output].base +
                           " mixes registered and combinational bits");
    }
  }

  std::string ref(NetId n) const {
    if (n == const0_net_) return "1'b0";
    if (n == const1_net_) return "1'b1";
    const SignalRef& r = net_ref_[n];
    if (r.index < 0) return r.base;
    return r.base + "[" + std::to_string(r.index) + "]";
  }

  // Renders a bit list (LSB first) as a Verilog expression, compressing
  // contiguous runs into part selects.
  std::string bit_group(const std::vector<NetId>& bits) const {
    struct Piece { std::string base; int lo, hi; bool is_const; std::string lit; };
    std::vector<Piece> pieces;
    for (NetId n : bits) {
      if (n == const0_net_ || n == const1_net_) {
        std::string b = n == const1_net_ ? "1" : "0";
        if (!pieces.empty() && pieces.back().is_const) {
          pieces.back().lit = b + pieces.back().lit;
          continue;
        }
        pieces.push_back({"", 0, 0, true, b});
        continue;
      }
      const SignalRef& r = net_ref_[n];
      if (!pieces.empty() && !pieces.back().is_const &&
          pieces.back().base == r.base && r.index >= 0 &&
          pieces.back().hi + 1 == r.index) {
        pieces.back().hi = r.index;
        continue;
      }
      pieces.push_back({r.base, r.index, r.index, false, ""});
    }
    auto piece_str = [&](const Piece& p) -> std::string {
      if (p.is_const)
        return std::to_string(p.lit.size()) + "'b" + p.lit;
      if (p.lo < 0) return p.base;
      int width = signal_width(p.base);
      if (p.lo == 0 && p.hi == width - 1) return p.base;
      if (p.lo == p.hi) return p.base + "[" + std::to_string(p.lo) + "]";
      return p.base + "[" + std::to_string(p.hi) + ":" + std::to_string(p.lo) + "]";
    };
    if (pieces.size() == 1) return piece_str(pieces[0]);
    std::string out = "{";
    for (size_t i = pieces.size(); i-- > 0;) {  // concat is MSB first
      out += piece_str(pieces[i]);
      if (i) out += ", ";
    }
    return out + "}";
  }

  int signal_width(const std::string& base) const {
    auto it = internal_signals_.find(base);
    if (it != internal_signals_.end()) return it->second;
    const PortDecl* p = m_.find_port(base);
    return p ? p->width : 1;
  }

  std::string gate_expr(const Gate& g) const {
    switch (g.kind) {
      case GateKind::And:  return ref(g.inputs[0]) + " & " + ref(g.inputs[1]);
      case GateKind::Or:   return ref(g.inputs[0]) + " | " + ref(g.inputs[1]);
      case GateKind::Xor:  return ref(g.inputs[0]) + " ^ " + ref(g.inputs[1]);
      case GateKind::Xnor: return ref(g.inputs[0]) + " ~^ " + ref(g.inputs[1]);
      case GateKind::Nand: return "~(" + ref(g.inputs[0]) + " & " + ref(g.inputs[1]) + ")";
      case GateKind::Nor:  return "~(" + ref(g.inputs[0]) + " | " + ref(g.inputs[1]) + ")";
      case GateKind::Not:  return "~" + ref(g.inputs[0]);
      case GateKind::Buf:  return ref(g.inputs[0]);
      case GateKind::Mux2:
        return ref(g.inputs[0]) + " ? " + ref(g.inputs[1]) + " : " + ref(g.inputs[2]);
      default:
        throw NetlistError("unexpected gate in expression position");
    }
  }
};

}  // namespace

std::string write_verilog(const Design& design) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, m] : design.modules) {
    if (!first) os << "\n";
    first = false;
    ModuleWriter(design, m).print(os);
  }
  return os.str();
}

}  // namespace arianna
