// Copyright 2026 The qfrag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfrag/qasm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "qfrag/error.hpp"

namespace qfrag {

namespace {

struct Statement {
  std::string text;
  std::size_t line;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits on ';' after removing // comments. Each statement remembers the line
// on which its first non-blank character appeared.
std::vector<Statement> split_statements(std::string_view text) {
  std::vector<Statement> out;
  std::string current;
  std::size_t line = 1;
  std::size_t start_line = 0;
  bool in_comment = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      in_comment = false;
      current.push_back(' ');
      continue;
    }
    if (in_comment) continue;
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      in_comment = true;
      continue;
    }
    if (c == ';') {
      auto t = trim(current);
      if (t.empty()) throw ParseError(line, "empty statement");
      out.push_back({std::string(t), start_line});
      current.clear();
      start_line = 0;
      continue;
    }
    if (start_line == 0 && !std::isspace(static_cast<unsigned char>(c))) start_line = line;
    current.push_back(c);
  }
  if (!trim(current).empty()) throw ParseError(start_line, "missing ';' at end of statement");
  return out;
}

// Recursive-descent evaluator for gate parameter expressions.
class ExprParser {
 public:
  ExprParser(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  double parse() {
    double v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "' in expression");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double expr() {
    double v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }

  double term() {
    double v = power();
    for (;;) {
      if (eat('*')) {
        v *= power();
      } else if (eat('/')) {
        double d = power();
        if (d == 0.0) fail("division by zero in expression");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double power() {
    double base = unary();
    if (eat('^')) return std::pow(base, power());
    return base;
  }

  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return primary();
  }

  double primary() {
    skip_ws();
    if (eat('(')) {
      double v = expr();
      if (!eat(')')) fail("expected ')' in expression");
      return v;
    }
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.')) ++end;
      if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
        std::size_t e = end + 1;
        if (e < s_.size() && (s_[e] == '+' || s_[e] == '-')) ++e;
        if (e < s_.size() && std::isdigit(static_cast<unsigned char>(s_[e]))) {
          end = e;
          while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
        }
      }
      const std::string num(s_.substr(pos_, end - pos_));
      pos_ = end;
      try {
        std::size_t used = 0;
        double v = std::stod(num, &used);
        if (used != num.size()) fail("malformed number '" + num + "'");
        return v;
      } catch (const std::logic_error&) {
        fail("malformed number '" + num + "'");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
      const std::string ident(s_.substr(pos_, end - pos_));
      pos_ = end;
      if (ident == "pi") return std::numbers::pi;
      if (!eat('(')) fail("unknown identifier '" + ident + "' in expression");
      double arg = expr();
      if (!eat(')')) fail("expected ')' after function argument");
      if (ident == "sin") return std::sin(arg);
      if (ident == "cos") return std::cos(arg);
      if (ident == "tan") return std::tan(arg);
      if (ident == "exp") return std::exp(arg);
      if (ident == "ln") return std::log(arg);
      if (ident == "sqrt") return std::sqrt(arg);
      fail("unknown function '" + ident + "'");
    }
    fail("unexpected '" + std::string(1, c) + "' in expression");
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_top_level(std::string_view s, char sep) {
  std::vector<std::string> parts;
  int paren = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++paren;
    if (c == ')') --paren;
    if (c == sep && paren == 0) {
      parts.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.emplace_back(trim(cur));
  return parts;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

struct Operand {
  std::string reg;
  std::optional<int> index;
};

Operand parse_operand(std::string_view s, std::size_t line) {
  s = trim(s);
  const auto lb = s.find('[');
  if (lb == std::string_view::npos) {
    if (!is_identifier(s)) throw ParseError(line, "malformed operand '" + std::string(s) + "'");
    return {std::string(s), std::nullopt};
  }
  if (s.back() != ']') throw ParseError(line, "malformed operand '" + std::string(s) + "'");
  const auto reg = trim(s.substr(0, lb));
  const auto idx = trim(s.substr(lb + 1, s.size() - lb - 2));
  if (!is_identifier(reg) || idx.empty()) throw ParseError(line, "malformed operand '" + std::string(s) + "'");
  for (char c : idx) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError(line, "register index must be an integer: '" + std::string(s) + "'");
    }
  }
  return {std::string(reg), std::stoi(std::string(idx))};
}

class Parser {
 public:
  QuantumCircuit run(std::string_view text) {
    for (const Statement& st : split_statements(text)) statement(st);
    if (!circuit_) throw ParseError(1, "no qreg declared");
    return std::move(*circuit_);
  }

 private:
  void statement(const Statement& st) {
    std::string_view s = st.text;
    const std::size_t line = st.line;
    std::size_t kw_end = 0;
    while (kw_end < s.size() && (std::isalnum(static_cast<unsigned char>(s[kw_end])) || s[kw_end] == '_')) ++kw_end;
    const std::string kw(s.substr(0, kw_end));
    std::string_view rest = trim(s.substr(kw_end));

    if (kw.empty()) throw ParseError(line, "syntax error near '" + std::string(s.substr(0, 16)) + "'");
    if (kw == "OPENQASM") {
      if (seen_header_ || seen_any_) throw ParseError(line, "OPENQASM header must be the first statement");
      if (rest != "2.0" && rest != "2") throw ParseError(line, "unsupported OpenQASM version '" + std::string(rest) + "'");
      seen_header_ = true;
      return;
    }
    seen_any_ = true;
    if (kw == "include") {
      if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"') throw ParseError(line, "malformed include");
      return;
    }
    if (kw == "qreg" || kw == "creg") {
      Operand decl = parse_operand(rest, line);
      if (!decl.index || *decl.index < 1) throw ParseError(line, kw + " needs a positive size");
      if (kw == "qreg") {
        if (circuit_) throw ParseError(line, "multiple qreg declarations are not supported");
        qreg_ = decl.reg;
        circuit_.emplace(*decl.index);
      } else {
        if (cregs_.count(decl.reg)) throw ParseError(line, "duplicate creg '" + decl.reg + "'");
        cregs_.insert(decl.reg);
      }
      return;
    }
    if (kw == "if") throw ParseError(line, "classically conditioned operations are not supported");
    if (kw == "gate" || kw == "opaque") throw ParseError(line, "custom gate definitions are not supported");
    if (!circuit_) throw ParseError(line, "operation before qreg declaration");

    if (kw == "measure") {
      const auto arrow = rest.find("->");
      if (arrow == std::string_view::npos) throw ParseError(line, "measure needs '->' target");
      Operand src = parse_operand(rest.substr(0, arrow), line);
      Operand dst = parse_operand(rest.substr(arrow + 2), line);
      if (!cregs_.count(dst.reg)) throw ParseError(line, "unknown creg '" + dst.reg + "'");
      if (src.index.has_value() != dst.index.has_value()) {
        throw ParseError(line, "measure operands must both be indexed or both be registers");
      }
      for (int q : qubits_of(src, line)) add(line, GateKind::MEASURE, {q}, {});
      return;
    }
    if (kw == "barrier") {
      std::vector<int> qs;
      for (const auto& part : split_top_level(rest, ',')) {
        for (int q : qubits_of(parse_operand(part, line), line)) qs.push_back(q);
      }
      add(line, GateKind::BARRIER, qs, {});
      return;
    }

    auto kind = gate_kind_from_name(kw);
    if (!kind || gate_info(*kind).is_feature == false) throw UnsupportedGateError(line, kw);

    std::vector<double> params;
    if (!rest.empty() && rest.front() == '(') {
      int depth = 0;
      std::size_t close = 0;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i] == '(') ++depth;
        if (rest[i] == ')' && --depth == 0) {
          close = i;
          break;
        }
      }
      if (close == 0) throw ParseError(line, "unbalanced parentheses in parameters of '" + kw + "'");
      for (const auto& p : split_top_level(rest.substr(1, close - 1), ',')) {
        if (p.empty()) throw ParseError(line, "empty parameter in '" + kw + "'");
        params.push_back(ExprParser(p, line).parse());
      }
      rest = trim(rest.substr(close + 1));
    }
    const GateInfo& info = gate_info(*kind);
    if (static_cast<int>(params.size()) != info.num_params) {
      throw ParseError(line, kw + " expects " + std::to_string(info.num_params) + " parameter(s)");
    }
    if (rest.empty()) throw ParseError(line, kw + " has no operands");
    const auto parts = split_top_level(rest, ',');
    if (static_cast<int>(parts.size()) != info.arity) {
      throw ParseError(line, kw + " expects " + std::to_string(info.arity) + " operand(s)");
    }
    if (info.arity == 1) {
      for (int q : qubits_of(parse_operand(parts[0], line), line)) add(line, *kind, {q}, params);
      return;
    }
    std::vector<int> qs;
    for (const auto& part : parts) {
      Operand op = parse_operand(part, line);
      if (!op.index) throw ParseError(line, "register broadcast is only supported for single-qubit operations");
      qs.push_back(qubit_index(op, line));
    }
    add(line, *kind, qs, params);
  }

  int qubit_index(const Operand& op, std::size_t line) const {
    if (op.reg != qreg_) throw ParseError(line, "unknown qreg '" + op.reg + "'");
    if (*op.index >= circuit_->n_qubits()) {
      throw ParseError(line, "qubit index " + std::to_string(*op.index) + " out of range");
    }
    return *op.index;
  }

  std::vector<int> qubits_of(const Operand& op, std::size_t line) const {
    if (op.index) return {qubit_index(op, line)};
    if (op.reg != qreg_) throw ParseError(line, "unknown qreg '" + op.reg + "'");
    std::vector<int> qs(static_cast<std::size_t>(circuit_->n_qubits()));
    for (int i = 0; i < circuit_->n_qubits(); ++i) qs[i] = i;
    return qs;
  }

  void add(std::size_t line, GateKind kind, std::vector<int> qs, std::vector<double> params) {
    try {
      circuit_->add(kind, std::move(qs), std::move(params));
    } catch (const CircuitError& e) {
      throw ParseError(line, e.what());
    }
  }

  std::optional<QuantumCircuit> circuit_;
  std::string qreg_;
  std::set<std::string> cregs_;
  bool seen_header_ = false;
  bool seen_any_ = false;
};

}  // namespace

QuantumCircuit parse_qasm(std::string_view text) { return Parser().run(text); }

QuantumCircuit parse_qasm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open circuit file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  QuantumCircuit c = parse_qasm(ss.str());
  c.set_name(path.stem().string());
  return c;
}

std::string emit_qasm(const QuantumCircuit& circuit) {
  std::ostringstream out;
  const int n = circuit.n_qubits();
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  out << "qreg q[" << n << "];\ncreg c[" << n << "];\n";
  char buf[64];
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::MEASURE) {
      out << "measure q[" << g.qubits[0] << "] -> c[" << g.qubits[0] << "];\n";
      continue;
    }
    out << gate_info(g.kind).name;
    if (!g.params.empty()) {
      out << '(';
      for (std::size_t i = 0; i < g.params.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", g.params[i]);
        out << (i ? "," : "") << buf;
      }
      out << ')';
    }
    for (std::size_t i = 0; i < g.qubits.size(); ++i) out << (i ? "," : " ") << "q[" << g.qubits[i] << ']';
    out << ";\n";
  }
  return out.str();
}

}  // namespace qfrag
