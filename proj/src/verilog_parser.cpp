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
#include <cassert>
#include <map>
#include <set>
#include <vector>

#include "arianna/error.hpp"
#include "arianna/verilog.hpp"

namespace arianna {
namespace {

// ---------------------------------------------------------------- lexer --

enum class Tok {
  End, Ident, Number, LParen, RParen, LBrack, RBrack, LBrace, RBrace,
  Semi, Comma, Dot, Colon, Question, At, Assign,   // '='
  BitNot, BitAnd, BitOr, BitXor, Xnor,             // ~ & | ^ ~^|^~
  LogNot, LogAnd, LogOr,                           // ! && ||
  Eq, Neq, Lt, Le, Gt, Ge,                         // == != < <= > >=
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 0, col = 0;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(int l, int c, const std::string& msg) const {
    throw ParseError(std::to_string(l) + ":" + std::to_string(c), msg);
  }

  char peek(size_t k = 0) const {
    return pos + k < src.size() ? src[pos + k] : '\0';
  }
  char advance() {
    char c = src[pos++];
    if (c == '\n') { ++line; col = 1; } else { ++col; }
    return c;
  }

  void skip_space() {
    for (;;) {
      while (pos < src.size() && (peek() == ' ' || peek() == '\t' ||
                                  peek() == '\r' || peek() == '\n'))
        advance();
      if (peek() == '/' && peek(1) == '/') {
        while (pos < src.size() && peek() != '\n') advance();
        continue;
      }
      if (peek() == '/' && peek(1) == '*') {
        int l = line, c = col;
        advance(); advance();
        while (pos < src.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (pos >= src.size()) fail(l, c, "unterminated block comment");
        advance(); advance();
        continue;
      }
      break;
    }
  }

  Token next() {
    skip_space();
    Token t;
    t.line = line;
    t.col = col;
    if (pos >= src.size()) { t.kind = Tok::End; return t; }
    char c = peek();
    if (c == '`')
      fail(line, col, "unsupported construct: compiler directive");
    if (isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '\\') {
      if (c == '\\') fail(line, col, "unsupported construct: escaped identifier");
      while (isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
             peek() == '$')
        t.text += advance();
      t.kind = Tok::Ident;
      return t;
    }
    if (isdigit(static_cast<unsigned char>(c)) || c == '\'') {
      // number: [size]'[bdh]digits  or plain decimal
      while (isdigit(static_cast<unsigned char>(peek())) || peek() == '_')
        t.text += advance();
      if (peek() == '\'') {
        t.text += advance();
        if (peek() == 'b' || peek() == 'B' || peek() == 'h' || peek() == 'H' ||
            peek() == 'd' || peek() == 'D') {
          t.text += advance();
        } else {
          fail(line, col, "bad literal base (expected b, d, or h)");
        }
        while (isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
          t.text += advance();
      }
      t.kind = Tok::Number;
      return t;
    }
    advance();
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '[': t.kind = Tok::LBrack; return t;
      case ']': t.kind = Tok::RBrack; return t;
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case ';': t.kind = Tok::Semi; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '.': t.kind = Tok::Dot; return t;
      case ':': t.kind = Tok::Colon; return t;
      case '?': t.kind = Tok::Question; return t;
      case '@': t.kind = Tok::At; return t;
      case '=':
        if (peek() == '=') { advance(); t.kind = Tok::Eq; return t; }
        t.kind = Tok::Assign; return t;
      case '~':
        if (peek() == '^') { advance(); t.kind = Tok::Xnor; return t; }
        if (peek() == '&' || peek() == '|')
          fail(t.line, t.col, "unsupported construct: nand/nor reduction");
        t.kind = Tok::BitNot; return t;
      case '^':
        if (peek() == '~') { advance(); t.kind = Tok::Xnor; return t; }
        t.kind = Tok::BitXor; return t;
      case '&':
        if (peek() == '&') { advance(); t.kind = Tok::LogAnd; return t; }
        t.kind = Tok::BitAnd; return t;
      case '|':
        if (peek() == '|') { advance(); t.kind = Tok::LogOr; return t; }
        t.kind = Tok::BitOr; return t;
      case '!':
        if (peek() == '=') { advance(); t.kind = Tok::Neq; return t; }
        t.kind = Tok::LogNot; return t;
      case '<':
        if (peek() == '=') { advance(); t.kind = Tok::Le; return t; }
        if (peek() == '<') fail(t.line, t.col, "unsupported construct: shift operator");
        t.kind = Tok::Lt; return t;
      case '>':
        if (peek() == '=') { advance(); t.kind = Tok::Ge; return t; }
        if (peek() == '>') fail(t.line, t.col, "unsupported construct: shift operator");
        t.kind = Tok::Gt; return t;
      case '+': case '-': case '*': case '/': case '%':
        fail(t.line, t.col, "unsupported construct: arithmetic operator");
      case '#':
        fail(t.line, t.col, "unsupported construct: delay/parameter override");
      default:
        fail(t.line, t.col, std::string("unexpected character '") + c + "'");
    }
    return t;  // unreachable
  }
};

// -------------------------------------------------------------- literals --

std::vector<uint8_t> parse_literal_bits(const Token& t, const Lexer& lx) {
  std::string s = t.text;
  s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
  size_t q = s.find('\'');
  if (q == std::string::npos) {
    // plain decimal: minimal width
    unsigned long long v = 0;
    for (char c : s) {
      if (!isdigit(static_cast<unsigned char>(c)))
        lx.fail(t.line, t.col, "bad decimal literal");
      v = v * 10 + static_cast<unsigned long long>(c - '0');
    }
    std::vector<uint8_t> bits;
    do { bits.push_back(v & 1); v >>= 1; } while (v);
    return bits;
  }
  int width = 0;
  for (size_t i = 0; i < q; ++i) width = width * 10 + (s[i] - '0');
  if (width <= 0) lx.fail(t.line, t.col, "literal width must be positive");
  char base = static_cast<char>(tolower(s[q + 1]));
  std::string digits = s.substr(q + 2);
  if (digits.empty()) lx.fail(t.line, t.col, "literal has no digits");
  std::vector<uint8_t> bits;
  if (base == 'b') {
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
      if (*it != '0' && *it != '1')
        lx.fail(t.line, t.col, "bad binary digit");
      bits.push_back(static_cast<uint8_t>(*it - '0'));
    }
  } else if (base == 'h') {
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
      int v = isdigit(static_cast<unsigned char>(*it)) ? *it - '0'
              : tolower(*it) >= 'a' && tolower(*it) <= 'f' ? tolower(*it) - 'a' + 10
                                                           : -1;
      if (v < 0) lx.fail(t.line, t.col, "bad hex digit");
      for (int b = 0; b < 4; ++b) bits.push_back(static_cast<uint8_t>((v >> b) & 1));
    }
  } else {  // 'd'
    unsigned long long v = 0;
    for (char c : digits) {
      if (!isdigit(static_cast<unsigned char>(c)))
        lx.fail(t.line, t.col, "bad decimal digit");
      v = v * 10 + static_cast<unsigned long long>(c - '0');
    }
    for (int b = 0; b < 64; ++b) bits.push_back(static_cast<uint8_t>((v >> b) & 1));
  }
  bits.resize(static_cast<size_t>(width), 0);  // truncate or zero-extend
  return bits;
}

// -------------------------------------------------------------- parser ---

struct SignalInfo {
  int width = 1;
  int lsb = 0;
  bool is_reg = false;
  bool declared = false;
  std::vector<NetId> bits;  // LSB first
};

struct PendingFf {
  NetId target;             // Q net
  std::vector<std::tuple<NetId, NetId>> assigns;  // (guard or kNoNet, value)
  NetId clock;
  int line, col;
};

class Parser {
 public:
  Parser(const std::string& source, const std::string& top)
      : lx_(source), top_(top) {
    cur_ = lx_.next();
  }

  Design run() {
    Design d;
    while (cur_.kind != Tok::End) {
      expect_keyword("module");
      ModuleDef m = parse_module();
      std::string name = m.name;
      if (!d.modules.emplace(name, std::move(m)).second)
        fail("duplicate module definition: " + name);
    }
    if (d.modules.empty()) throw ParseError("", "no modules in source");
    return d;
  }

 public:
  static std::string infer_top_module(const Design& d) { return infer_top(d); }

 private:
  Lexer lx_;
  std::string top_;
  Token cur_;

  // per-module state
  ModuleDef* m_ = nullptr;
  std::map<std::string, SignalInfo> signals_;
  std::vector<std::string> header_order_;
  std::map<std::string, std::pair<PortDir, bool>> port_dirs_;  // dir, ansi-declared
  std::map<std::string, std::pair<int, int>> port_ranges_;     // width, lsb
  std::vector<PendingFf> pending_ffs_;
  std::string clock_name_;
  NetId const0_ = kNoNet, const1_ = kNoNet;
  int temp_counter_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(std::to_string(cur_.line) + ":" + std::to_string(cur_.col), msg);
  }
  [[noreturn]] void fail_at(int line, int col, const std::string& msg) const {
    throw ParseError(std::to_string(line) + ":" + std::to_string(col), msg);
  }

  void bump() { cur_ = lx_.next(); }

  bool at_keyword(const char* kw) const {
    return cur_.kind == Tok::Ident && cur_.text == kw;
  }
  void expect_keyword(const char* kw) {
    if (!at_keyword(kw)) fail(std::string("expected '") + kw + "'");
    bump();
  }
  void expect(Tok k, const char* what) {
    if (cur_.kind != k) fail(std::string("expected ") + what);
    bump();
  }
  std::string expect_ident(const char* what) {
    if (cur_.kind != Tok::Ident) fail(std::string("expected ") + what);
    std::string s = cur_.text;
    bump();
    return s;
  }

  static const std::set<std::string>& reserved() {
    static const std::set<std::string> kw = {
        "module", "endmodule", "input", "output", "inout", "wire", "reg",
        "assign", "always", "posedge", "negedge", "begin", "end", "if",
        "else", "generate", "endgenerate", "genvar", "for", "while",
        "case", "casex", "casez", "endcase", "function", "endfunction",
        "task", "endtask", "initial", "parameter", "localparam", "integer",
        "real", "signed", "fork", "join", "specify", "primitive", "defparam"};
    return kw;
  }

  static std::string infer_top(const Design& d) {
    std::set<std::string> instantiated;
    for (const auto& [name, m] : d.modules)
      for (const auto& inst : m.instances) instantiated.insert(inst.module);
    std::vector<std::string> roots;
    for (const auto& [name, m] : d.modules)
      if (!instantiated.count(name)) roots.push_back(name);
    if (roots.size() != 1)
      throw ParseError("", "cannot infer top module (found " +
                               std::to_string(roots.size()) +
                               " uninstantiated modules); pass it explicitly");
    return roots[0];
  }

  // ------------------------------------------------------- module level --

  ModuleDef parse_module() {
    ModuleDef m;
    signals_.clear();
    header_order_.clear();
    port_dirs_.clear();
    port_ranges_.clear();
    pending_ffs_.clear();
    clock_name_.clear();
    const0_ = const1_ = kNoNet;
    temp_counter_ = 0;
    m_ = &m;

    m.name = expect_ident("module name");
    if (cur_.kind == Tok::LParen) {
      bump();
      if (cur_.kind != Tok::RParen) parse_port_list();
      expect(Tok::RParen, "')'");
    }
    expect(Tok::Semi, "';'");

    while (!at_keyword("endmodule")) {
      if (cur_.kind == Tok::End) fail("unexpected end of file inside module");
      parse_item();
    }
    bump();  // endmodule

    finalize_ports();
    finalize_ffs();
    m_ = nullptr;
    return m;
  }

  void parse_port_list() {
    PortDir dir = PortDir::Input;
    bool have_dir = false;
    for (;;) {
      if (at_keyword("input") || at_keyword("output") || at_keyword("inout")) {
        if (at_keyword("inout")) fail("unsupported construct: inout port");
        dir = at_keyword("input") ? PortDir::Input : PortDir::Output;
        have_dir = true;
        bump();
        if (at_keyword("wire") || at_keyword("reg")) {
          bool is_reg = at_keyword("reg");
          bump();
          auto [w, lsb] = opt_range();
          std::string name = expect_ident("port name");
          declare_port(name, dir, w, lsb, true, is_reg);
        } else {
          auto [w, lsb] = opt_range();
          std::string name = expect_ident("port name");
          declare_port(name, dir, w, lsb, true, false);
        }
      } else {
        std::string name = expect_ident("port name");
        if (have_dir) {
          // ANSI list continues the previous direction: `input a, b`
          declare_port(name, dir, 1, 0, true, false);
        } else {
          header_order_.push_back(name);  // non-ANSI; direction comes later
        }
      }
      if (cur_.kind != Tok::Comma) break;
      bump();
    }
  }

  void declare_port(const std::string& name, PortDir dir, int width, int lsb,
                    bool ansi, bool is_reg) {
    if (port_dirs_.count(name)) fail("duplicate port " + name);
    port_dirs_[name] = {dir, ansi};
    port_ranges_[name] = {width, lsb};
    header_order_.push_back(name);
    declare_signal(name, width, lsb, is_reg);
  }

  SignalInfo& declare_signal(const std::string& name, int width, int lsb,
                             bool is_reg) {
    if (reserved().count(name)) fail("reserved word used as identifier: " + name);
    auto& info = signals_[name];
    if (info.declared) {
      // wire/reg redeclaration of a port name refines it
      if (info.width != width)
        fail("conflicting width for signal " + name);
      info.is_reg = info.is_reg || is_reg;
      return info;
    }
    info.width = width;
    info.lsb = lsb;
    info.is_reg = is_reg;
    info.declared = true;
    info.bits = m_->add_signal(name, width);
    return info;
  }

  std::pair<int, int> opt_range() {
    if (cur_.kind != Tok::LBrack) return {1, 0};
    bump();
    int msb = expect_int("range msb");
    expect(Tok::Colon, "':'");
    int lsb = expect_int("range lsb");
    expect(Tok::RBrack, "']'");
    if (msb < lsb) fail("descending ranges are unsupported");
    return {msb - lsb + 1, lsb};
  }

  int expect_int(const char* what) {
    if (cur_.kind != Tok::Number) fail(std::string("expected ") + what);
    auto bits = parse_literal_bits(cur_, lx_);
    long v = 0;
    for (size_t i = 0; i < bits.size() && i < 31; ++i)
      v |= static_cast<long>(bits[i]) << i;
    bump();
    return static_cast<int>(v);
  }

  void parse_item() {
    static const std::set<std::string> rejected = {
        "generate", "genvar", "for", "while", "case", "casex", "casez",
        "function", "task", "initial", "parameter", "localparam",
        "integer", "real", "defparam", "specify", "primitive", "fork"};
    if (cur_.kind == Tok::Ident && rejected.count(cur_.text))
      fail("unsupported construct: " + cur_.text);

    if (at_keyword("input") || at_keyword("output") || at_keyword("inout")) {
      if (at_keyword("inout")) fail("unsupported construct: inout port");
      PortDir dir = at_keyword("input") ? PortDir::Input : PortDir::Output;
      bump();
      bool is_reg = false;
      if (at_keyword("wire") || at_keyword("reg")) {
        is_reg = at_keyword("reg");
        bump();
      }
      auto [w, lsb] = opt_range();
      for (;;) {
        std::string name = expect_ident("port name");
        if (std::find(header_order_.begin(), header_order_.end(), name) ==
            header_order_.end())
          fail("port " + name + " not listed in module header");
        if (port_dirs_.count(name)) fail("duplicate direction for port " + name);
        port_dirs_[name] = {dir, false};
        port_ranges_[name] = {w, lsb};
        declare_signal(name, w, lsb, is_reg);
        if (cur_.kind != Tok::Comma) break;
        bump();
      }
      expect(Tok::Semi, "';'");
      return;
    }
    if (at_keyword("wire") || at_keyword("reg")) {
      bool is_reg = at_keyword("reg");
      bump();
      auto [w, lsb] = opt_range();
      for (;;) {
        std::string name = expect_ident("signal name");
        if (cur_.kind == Tok::LBrack)
          fail("unsupported construct: memory declaration");
        declare_signal(name, w, lsb, is_reg);
        if (cur_.kind != Tok::Comma) break;
        bump();
      }
      expect(Tok::Semi, "';'");
      return;
    }
    if (at_keyword("assign")) {
      bump();
      parse_assign();
      return;
    }
    if (at_keyword("always")) {
      bump();
      parse_always();
      return;
    }
    if (cur_.kind == Tok::Ident) {
      parse_instance();
      return;
    }
    fail("expected a module item");
  }

  // ------------------------------------------------------- expressions ---

  NetId const_net(bool one) {
    NetId& slot = one ? const1_ : const0_;
    if (slot == kNoNet) {
      slot = fresh_net(one ? "_const1" : "_const0");
      m_->add_gate(one ? GateKind::Const1 : GateKind::Const0, {}, slot);
    }
    return slot;
  }

  NetId fresh_net(const std::string& hint) {
    std::string name = hint;
    while (m_->find_net(name) != kNoNet)
      name = hint + "_" + std::to_string(temp_counter_++);
    return m_->add_net(name);
  }

  // Nets freshly created by the current expression; eligible for output
  // retargeting when assigned straight to a destination.
  std::set<NetId>* temps_ = nullptr;

  NetId emit(GateKind kind, std::vector<NetId> ins) {
    NetId out = fresh_net("_t" + std::to_string(temp_counter_++));
    m_->add_gate(kind, std::move(ins), out);
    if (temps_) temps_->insert(out);
    return out;
  }

  SignalInfo& lookup(const std::string& name) {
    auto it = signals_.find(name);
    if (it == signals_.end() || !it->second.declared)
      fail("undeclared signal " + name);
    return it->second;
  }

  std::vector<NetId> zero_extend(std::vector<NetId> v, size_t w) {
    while (v.size() < w) v.push_back(const_net(false));
    return v;
  }

  NetId reduce_or(const std::vector<NetId>& bits) {
    if (bits.empty()) return const_net(false);
    NetId acc = bits[0];
    for (size_t i = 1; i < bits.size(); ++i)
      acc = emit(GateKind::Or, {acc, bits[i]});
    return acc;
  }

  std::vector<NetId> parse_expr() { return parse_ternary(); }

  std::vector<NetId> parse_ternary() {
    auto cond = parse_logor();
    if (cur_.kind != Tok::Question) return cond;
    bump();
    NetId sel = cond.size() == 1 ? cond[0] : reduce_or(cond);
    auto a = parse_ternary();
    expect(Tok::Colon, "':'");
    auto b = parse_ternary();
    size_t w = std::max(a.size(), b.size());
    a = zero_extend(std::move(a), w);
    b = zero_extend(std::move(b), w);
    std::vector<NetId> out;
    out.reserve(w);
    for (size_t i = 0; i < w; ++i)
      out.push_back(emit(GateKind::Mux2, {sel, a[i], b[i]}));
    return out;
  }

  std::vector<NetId> parse_logor() {
    auto lhs = parse_logand();
    while (cur_.kind == Tok::LogOr) {
      bump();
      auto rhs = parse_logand();
      lhs = {emit(GateKind::Or, {reduce_or(lhs), reduce_or(rhs)})};
    }
    return lhs;
  }

  std::vector<NetId> parse_logand() {
    auto lhs = parse_bitor();
    while (cur_.kind == Tok::LogAnd) {
      bump();
      auto rhs = parse_bitor();
      lhs = {emit(GateKind::And, {reduce_or(lhs), reduce_or(rhs)})};
    }
    return lhs;
  }

  std::vector<NetId> bitwise(GateKind kind, std::vector<NetId> a,
                             std::vector<NetId> b) {
    size_t w = std::max(a.size(), b.size());
    a = zero_extend(std::move(a), w);
    b = zero_extend(std::move(b), w);
    std::vector<NetId> out;
    out.reserve(w);
    for (size_t i = 0; i < w; ++i) out.push_back(emit(kind, {a[i], b[i]}));
    return out;
  }

  std::vector<NetId> parse_bitor() {
    auto lhs = parse_bitxor();
    while (cur_.kind == Tok::BitOr) {
      bump();
      lhs = bitwise(GateKind::Or, std::move(lhs), parse_bitxor());
    }
    return lhs;
  }

  std::vector<NetId> parse_bitxor() {
    auto lhs = parse_bitand();
    while (cur_.kind == Tok::BitXor || cur_.kind == Tok::Xnor) {
      GateKind k = cur_.kind == Tok::BitXor ? GateKind::Xor : GateKind::Xnor;
      bump();
      lhs = bitwise(k, std::move(lhs), parse_bitand());
    }
    return lhs;
  }

  std::vector<NetId> parse_bitand() {
    auto lhs = parse_equality();
    while (cur_.kind == Tok::BitAnd) {
      bump();
      lhs = bitwise(GateKind::And, std::move(lhs), parse_equality());
    }
    return lhs;
  }

  std::vector<NetId> parse_equality() {
    auto lhs = parse_relational();
    while (cur_.kind == Tok::Eq || cur_.kind == Tok::Neq) {
      bool negate = cur_.kind == Tok::Neq;
      bump();
      auto rhs = parse_relational();
      size_t w = std::max(lhs.size(), rhs.size());
      lhs = zero_extend(std::move(lhs), w);
      rhs = zero_extend(std::move(rhs), w);
      NetId acc = emit(GateKind::Xnor, {lhs[0], rhs[0]});
      for (size_t i = 1; i < w; ++i)
        acc = emit(GateKind::And, {acc, emit(GateKind::Xnor, {lhs[i], rhs[i]})});
      if (negate) acc = emit(GateKind::Not, {acc});
      lhs = {acc};
    }
    return lhs;
  }

  std::vector<NetId> parse_relational() {
    auto lhs = parse_unary();
    while (cur_.kind == Tok::Lt || cur_.kind == Tok::Le || cur_.kind == Tok::Gt ||
           cur_.kind == Tok::Ge) {
      Tok op = cur_.kind;
      bump();
      auto rhs = parse_unary();
      if (op == Tok::Gt || op == Tok::Ge) std::swap(lhs, rhs);
      size_t w = std::max(lhs.size(), rhs.size());
      lhs = zero_extend(std::move(lhs), w);
      rhs = zero_extend(std::move(rhs), w);
      // unsigned less-than as a borrow chain, LSB to MSB
      NetId lt = emit(GateKind::And, {emit(GateKind::Not, {lhs[0]}), rhs[0]});
      NetId eq = emit(GateKind::Xnor, {lhs[0], rhs[0]});
      for (size_t i = 1; i < w; ++i) {
        NetId bit_lt = emit(GateKind::And, {emit(GateKind::Not, {lhs[i]}), rhs[i]});
        NetId bit_eq = emit(GateKind::Xnor, {lhs[i], rhs[i]});
        lt = emit(GateKind::Or, {bit_lt, emit(GateKind::And, {bit_eq, lt})});
        eq = emit(GateKind::And, {eq, bit_eq});
      }
      NetId res = (op == Tok::Le || op == Tok::Ge)
                      ? emit(GateKind::Or, {lt, eq})
                      : lt;
      lhs = {res};
    }
    return lhs;
  }

  std::vector<NetId> parse_unary() {
    if (cur_.kind == Tok::BitNot) {
      bump();
      auto v = parse_unary();
      for (auto& b : v) b = emit(GateKind::Not, {b});
      return v;
    }
    if (cur_.kind == Tok::LogNot) {
      bump();
      auto v = parse_unary();
      return {emit(GateKind::Not, {reduce_or(v)})};
    }
    if (cur_.kind == Tok::BitAnd || cur_.kind == Tok::BitOr ||
        cur_.kind == Tok::BitXor) {
      GateKind k = cur_.kind == Tok::BitAnd ? GateKind::And
                   : cur_.kind == Tok::BitOr ? GateKind::Or
                                             : GateKind::Xor;
      bump();
      auto v = parse_unary();
      NetId acc = v[0];
      for (size_t i = 1; i < v.size(); ++i) acc = emit(k, {acc, v[i]});
      return {acc};
    }
    return parse_primary();
  }

  std::vector<NetId> parse_primary() {
    if (cur_.kind == Tok::LParen) {
      bump();
      auto v = parse_expr();
      expect(Tok::RParen, "')'");
      return v;
    }
    if (cur_.kind == Tok::Number) {
      auto bits = parse_literal_bits(cur_, lx_);
      bump();
      std::vector<NetId> v;
      v.reserve(bits.size());
      for (uint8_t b : bits) v.push_back(const_net(b != 0));
      return v;
    }
    if (cur_.kind == Tok::LBrace) {
      bump();
      // replication {n{expr}} or concat {a, b, ...}
      if (cur_.kind == Tok::Number) {
        Token count_tok = cur_;
        size_t save_pos = lx_.pos;
        int save_line = lx_.line, save_col = lx_.col;
        Token save_cur = cur_;
        bump();
        if (cur_.kind == Tok::LBrace) {
          int count = 0;
          auto bits = parse_literal_bits(count_tok, lx_);
          for (size_t i = 0; i < bits.size() && i < 31; ++i)
            count |= bits[i] << i;
          if (count <= 0) fail("replication count must be positive");
          bump();
          auto inner = parse_expr();
          expect(Tok::RBrace, "'}'");
          expect(Tok::RBrace, "'}'");
          std::vector<NetId> out;
          for (int r = 0; r < count; ++r)
            out.insert(out.end(), inner.begin(), inner.end());
          return out;
        }
        // plain numeric element in a concat: rewind
        lx_.pos = save_pos;
        lx_.line = save_line;
        lx_.col = save_col;
        cur_ = save_cur;
      }
      std::vector<std::vector<NetId>> parts;
      parts.push_back(parse_expr());
      while (cur_.kind == Tok::Comma) {
        bump();
        parts.push_back(parse_expr());
      }
      expect(Tok::RBrace, "'}'");
      // Verilog concat is MSB-first: {a, b} places a in the high bits.
      std::vector<NetId> out;
      for (auto it = parts.rbegin(); it != parts.rend(); ++it)
        out.insert(out.end(), it->begin(), it->end());
      return out;
    }
    if (cur_.kind == Tok::Ident) {
      std::string name = cur_.text;
      if (reserved().count(name)) fail("unexpected keyword " + name);
      bump();
      SignalInfo& sig = lookup(name);
      if (cur_.kind == Tok::LBrack) {
        bump();
        int hi = expect_int("bit index");
        int lo = hi;
        if (cur_.kind == Tok::Colon) {
          bump();
          lo = expect_int("bit index");
        }
        expect(Tok::RBrack, "']'");
        if (hi < lo) fail("descending part select");
        std::vector<NetId> out;
        for (int i = lo; i <= hi; ++i) {
          int idx = i - sig.lsb;
          if (idx < 0 || idx >= sig.width)
            fail("bit index out of range on " + name);
          out.push_back(sig.bits[static_cast<size_t>(idx)]);
        }
        return out;
      }
      return sig.bits;
    }
    fail("expected an expression");
  }

  // ------------------------------------------------------------ assigns ---

  // lvalue -> destination nets (LSB first)
  std::vector<NetId> parse_lvalue() {
    if (cur_.kind == Tok::LBrace) {
      bump();
      std::vector<std::vector<NetId>> parts;
      parts.push_back(parse_lvalue());
      while (cur_.kind == Tok::Comma) {
        bump();
        parts.push_back(parse_lvalue());
      }
      expect(Tok::RBrace, "'}'");
      std::vector<NetId> out;
      for (auto it = parts.rbegin(); it != parts.rend(); ++it)
        out.insert(out.end(), it->begin(), it->end());
      return out;
    }
    std::string name = expect_ident("assignment target");
    SignalInfo& sig = lookup(name);
    if (cur_.kind == Tok::LBrack) {
      bump();
      int hi = expect_int("bit index");
      int lo = hi;
      if (cur_.kind == Tok::Colon) {
        bump();
        lo = expect_int("bit index");
      }
      expect(Tok::RBrack, "']'");
      if (hi < lo) fail("descending part select");
      std::vector<NetId> out;
      for (int i = lo; i <= hi; ++i) {
        int idx = i - sig.lsb;
        if (idx < 0 || idx >= sig.width)
          fail("bit index out of range on " + name);
        out.push_back(sig.bits[static_cast<size_t>(idx)]);
      }
      return out;
    }
    return sig.bits;
  }

  void parse_assign() {
    auto dest = parse_lvalue();
    expect(Tok::Assign, "'='");
    std::set<NetId> temps;
    temps_ = &temps;
    auto rhs = parse_expr();
    temps_ = nullptr;
    expect(Tok::Semi, "';'");
    connect(dest, std::move(rhs), temps);
  }

  /// Drives dest[i] from rhs[i] (zero-extending/truncating rhs). Gates whose
  /// fresh temp output feeds exactly one destination bit are retargeted in
  /// place; everything else gets a BUF.
  void connect(const std::vector<NetId>& dest, std::vector<NetId> rhs,
               std::set<NetId>& temps) {
    rhs = zero_extend(std::move(rhs), dest.size());
    rhs.resize(dest.size());
    for (size_t i = 0; i < dest.size(); ++i) {
      if (temps.count(rhs[i])) {
        NetId old = rhs[i];
        temps.erase(old);
        for (auto& g : m_->gates)
          if (g.output == old) {
            g.output = dest[i];
            break;
          }
        // Rewire any sibling gate inputs that consumed the temp (e.g. the
        // carry chain of a comparison feeding multiple bits), and any
        // remaining occurrences of the temp in this right-hand side.
        for (auto& g : m_->gates)
          for (auto& in : g.inputs)
            if (in == old) in = dest[i];
        for (size_t j = i + 1; j < rhs.size(); ++j)
          if (rhs[j] == old) rhs[j] = dest[i];
      } else {
        m_->add_gate(GateKind::Buf, {rhs[i]}, dest[i]);
      }
    }
  }

  // ------------------------------------------------------------- always ---

  void parse_always() {
    expect(Tok::At, "'@'");
    expect(Tok::LParen, "'('");
    if (at_keyword("negedge")) fail("unsupported construct: negedge clocking");
    expect_keyword("posedge");
    std::string clk = expect_ident("clock name");
    if (cur_.kind == Tok::Comma || at_keyword("or"))
      fail("unsupported construct: multiple events in sensitivity list");
    expect(Tok::RParen, "')'");
    if (!clock_name_.empty() && clock_name_ != clk)
      fail("unsupported construct: multiple clocks in one module");
    clock_name_ = clk;
    SignalInfo& clk_sig = lookup(clk);
    if (clk_sig.width != 1) fail("clock must be 1 bit wide");
    NetId clk_net = clk_sig.bits[0];

    parse_statement(kNoNet, clk_net);
  }

  PendingFf& pending_for(NetId target, NetId clk, int line, int col) {
    for (auto& p : pending_ffs_)
      if (p.target == target) return p;
    pending_ffs_.push_back(PendingFf{target, {}, clk, line, col});
    return pending_ffs_.back();
  }

  void parse_statement(NetId guard, NetId clk) {
    if (at_keyword("begin")) {
      bump();
      while (!at_keyword("end")) {
        if (cur_.kind == Tok::End) fail("unexpected end of file in begin/end");
        parse_statement(guard, clk);
      }
      bump();
      return;
    }
    if (at_keyword("if")) {
      bump();
      expect(Tok::LParen, "'('");
      std::set<NetId> temps;
      temps_ = &temps;
      auto cond = parse_expr();
      temps_ = nullptr;
      expect(Tok::RParen, "')'");
      NetId c = cond.size() == 1 ? cond[0] : reduce_or(cond);
      NetId then_guard = guard == kNoNet ? c : emit(GateKind::And, {guard, c});
      parse_statement(then_guard, clk);
      if (at_keyword("else")) {
        bump();
        NetId not_c = emit(GateKind::Not, {c});
        NetId else_guard =
            guard == kNoNet ? not_c : emit(GateKind::And, {guard, not_c});
        parse_statement(else_guard, clk);
      }
      return;
    }
    if (at_keyword("case") || at_keyword("casex") || at_keyword("casez") ||
        at_keyword("for") || at_keyword("while"))
      fail("unsupported construct: " + cur_.text + " statement");

    // non-blocking assignment
    int line = cur_.line, col = cur_.col;
    auto dest = parse_lvalue();
    if (cur_.kind == Tok::Assign)
      fail("unsupported construct: blocking assignment in always block");
    expect(Tok::Le, "'<='");
    std::set<NetId> temps;
    temps_ = &temps;
    auto rhs = parse_expr();
    temps_ = nullptr;
    expect(Tok::Semi, "';'");
    rhs = zero_extend(std::move(rhs), dest.size());
    rhs.resize(dest.size());
    for (size_t i = 0; i < dest.size(); ++i) {
      PendingFf& ff = pending_for(dest[i], clk, line, col);
      if (ff.clock != clk)
        fail_at(line, col, "register assigned from two different clocks");
      ff.assigns.emplace_back(guard, rhs[i]);
    }
  }

  void finalize_ffs() {
    for (auto& ff : pending_ffs_) {
      // Last assignment wins; unassigned-under-guard holds the old value.
      NetId d = ff.target;  // hold
      bool unconditional = false;
      for (auto& [guard, value] : ff.assigns) {
        if (guard == kNoNet) {
          d = value;
          unconditional = true;
        } else {
          d = emit(GateKind::Mux2, {guard, value, d});
        }
      }
      (void)unconditional;
      m_->add_gate(GateKind::Dff, {d}, ff.target, ff.clock);
    }
  }

  // ---------------------------------------------------------- instances ---

  void parse_instance() {
    std::string module_name = expect_ident("module name");
    std::string inst_name = expect_ident("instance name");
    if (cur_.kind == Tok::LBrack)
      fail("unsupported construct: instance array");
    expect(Tok::LParen, "'('");

    Instance inst;
    inst.name = inst_name;
    inst.module = module_name;

    // Connections are recorded as expressions now and resolved against the
    // child module's ports in finalize (the child may not be parsed yet), so
    // both input and output positions must be plain net lvalues here.
    if (cur_.kind == Tok::Dot) {
      while (cur_.kind == Tok::Dot) {
        bump();
        std::string port = expect_ident("port name");
        expect(Tok::LParen, "'('");
        if (cur_.kind == Tok::RParen)
          fail("unconnected port " + port + " on instance " + inst_name);
        Connection c;
        c.port = port;
        c.bits = parse_lvalue_or_expr();
        expect(Tok::RParen, "')'");
        inst.connections.push_back(std::move(c));
        if (cur_.kind == Tok::Comma) bump();
      }
    } else if (cur_.kind != Tok::RParen) {
      int position = 0;
      for (;;) {
        Connection c;
        c.port = "$pos" + std::to_string(position++);  // resolved later
        c.bits = parse_lvalue_or_expr();
        inst.connections.push_back(std::move(c));
        if (cur_.kind != Tok::Comma) break;
        bump();
      }
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Semi, "';'");
    m_->instances.push_back(std::move(inst));
  }

  // A connection may be a plain lvalue (works for outputs) or a general
  // expression (inputs only; an output wired to an expression is caught by
  // the driver check in validate()).
  std::vector<NetId> parse_lvalue_or_expr() {
    std::set<NetId> temps;
    temps_ = &temps;
    auto v = parse_expr();
    temps_ = nullptr;
    return v;
  }

  // ------------------------------------------------------------- ports ----

  void finalize_ports() {
    for (const auto& name : header_order_) {
      auto it = port_dirs_.find(name);
      if (it == port_dirs_.end())
        throw ParseError("", "module " + m_->name + ": port " + name +
                                 " has no direction declaration");
      PortDecl p;
      p.name = name;
      p.dir = it->second.first;
      p.width = port_ranges_.at(name).first;
      m_->ports.push_back(p);
      m_->port_bits[name] = signals_.at(name).bits;
    }
  }
};

// Positional connections ("$posN") and width checks need all modules parsed;
// resolve them here.
void resolve_positional(Design& d) {
  for (auto& [name, m] : d.modules) {
    for (auto& inst : m.instances) {
      auto child_it = d.modules.find(inst.module);
      if (child_it == d.modules.end())
        throw ParseError("", "module " + name + ": unresolved module reference: " +
                                 inst.module);
      const ModuleDef& child = child_it->second;
      for (auto& c : inst.connections) {
        if (c.port.rfind("$pos", 0) == 0) {
          size_t idx = std::stoul(c.port.substr(4));
          if (idx >= child.ports.size())
            throw ParseError("", "module " + name + ": instance " + inst.name +
                                     " has too many positional connections");
          c.port = child.ports[idx].name;
        }
        const PortDecl* p = child.find_port(c.port);
        if (!p)
          throw ParseError("", "module " + name + ": instance " + inst.name +
                                   " connects unknown port " + c.port);
        if (p->dir == PortDir::Input && c.bits.size() < static_cast<size_t>(p->width)) {
          // zero-extend input connections with a shared constant
          NetId c0 = m.find_net("_const0");
          if (c0 == kNoNet) {
            c0 = m.add_net("_const0");
            m.add_gate(GateKind::Const0, {}, c0);
          }
          while (c.bits.size() < static_cast<size_t>(p->width)) c.bits.push_back(c0);
        }
        if (c.bits.size() != static_cast<size_t>(p->width))
          throw ParseError("", "module " + name + ": instance " + inst.name +
                                   " port " + c.port + ": width mismatch");
      }
    }
  }
}

}  // namespace

Design parse_verilog_modules(const std::string& source) {
  Parser parser(source, "");
  return parser.run();
}

void link_design(Design& design, const std::string& top) {
  resolve_positional(design);
  design.top = top.empty() ? Parser::infer_top_module(design) : top;
  if (design.modules.find(design.top) == design.modules.end())
    throw ParseError("", "top module not found: " + design.top);
  validate(design);
}

Design parse_verilog(const std::string& source, const std::string& top) {
  Design d = parse_verilog_modules(source);
  link_design(d, top);
  return d;
}

}  // namespace arianna

