// Copyright 2026 The rdesign Authors
//
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

#pragma once

/// Text forms of Expr. See docs/expression-formats.md for both grammars.
///
///  * Infix: `+ - * ^`, unary minus, sqrt(), abs(), min(), max() and the
///    R-function calls rand(a,b,alpha) / ror(a,b,alpha). Parentheses are
///    kept wherever dropping them would change the tree, so printing and
///    parsing round-trip structurally.
///  * Tree: JSON objects tagged by "op" with an "args" child list.

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rdesign/error.hpp"
#include "rdesign/expr.hpp"
#include "rdesign/format.hpp"

namespace rdesign {

enum class TextFormat { Infix, Tree };

enum class InfixStyle {
  Compact,   ///< R-function nodes printed as rand()/ror() calls; exact round trip.
  Expanded,  ///< R-function nodes written out with sqrt(), see expand_rfunctions.
  Abs,       ///< alpha=1 nodes canonicalised to abs(); others expanded.
};

namespace detail {

inline void print_infix(const Expr& e, std::string& out);

// 1: + -   2: *   3: unary minus, negative literals   4: ^   5: atoms and calls
inline int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    case NodeKind::Const: return std::signbit(e.value()) ? 3 : 5;
    default: return 5;
  }
}

inline void print_wrapped(const Expr& e, bool wrap, std::string& out) {
  std::string s;
  print_infix(e, s);
  // A leading '-' after a binary operator is legal but hard to read.
  wrap = wrap || (!s.empty() && s.front() == '-');
  if (wrap) out += '(';
  out += s;
  if (wrap) out += ')';
}

inline void print_call(const char* fn, const Expr& e, std::string& out) {
  out += fn;
  out += '(';
  for (std::size_t i = 0; i < e.args().size(); ++i) {
    if (i) out += ',';
    print_infix(e.arg(i), out);
  }
  if (e.kind() == NodeKind::RAnd || e.kind() == NodeKind::ROr) {
    out += ',';
    out += format_real(e.alpha());
  }
  out += ')';
}

inline void print_infix(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::Const: out += format_real(e.value()); return;
    case NodeKind::Var: out += e.name(); return;
    case NodeKind::Neg: {
      // -(2) keeps Neg(Const) distinct from the literal -2.
      const Expr& x = e.arg(0);
      out += '-';
      print_wrapped(x, precedence(x) <= 3 || x.kind() == NodeKind::Const, out);
      return;
    }
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul: {
      const int p = precedence(e);
      std::string lhs;
      print_infix(e.arg(0), lhs);
      const Expr& l = e.arg(0);
      // (x+y)-z and (x-y)+z keep their parentheses; x+y+z does not need any.
      if (precedence(l) < p || (precedence(l) == p && l.kind() != e.kind())) lhs = "(" + lhs + ")";
      out += lhs;
      out += e.kind() == NodeKind::Add ? '+' : e.kind() == NodeKind::Sub ? '-' : '*';
      print_wrapped(e.arg(1), precedence(e.arg(1)) <= p, out);
      return;
    }
    case NodeKind::Pow: {
      const Expr& b = e.arg(0);
      const bool wrap = precedence(b) < 5;
      if (wrap) out += '(';
      print_infix(b, out);
      if (wrap) out += ')';
      out += '^';
      out += std::to_string(e.exponent());
      return;
    }
    case NodeKind::Sqrt: print_call("sqrt", e, out); return;
    case NodeKind::Abs: print_call("abs", e, out); return;
    case NodeKind::Min: print_call("min", e, out); return;
    case NodeKind::Max: print_call("max", e, out); return;
    case NodeKind::RAnd: print_call("rand", e, out); return;
    case NodeKind::ROr: print_call("ror", e, out); return;
  }
}

class InfixParser {
 public:
  explicit InfixParser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expression();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const { throw ParseError(pos_, why); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = lhs + term();
      else if (accept('-'))
        lhs = lhs - term();
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    while (accept('*')) lhs = lhs * unary();
    return lhs;
  }

  // '-' directly followed by a numeric literal is a negative constant
  // (unless the literal is raised to a power); otherwise it is negation.
  Expr unary() {
    if (accept('-')) {
      skip_ws();
      if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        Expr p = power();
        return p.kind() == NodeKind::Const ? constant(-p.value()) : -p;
      }
      return -unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      unsigned long n = 0;
      try {
        n = std::stoul(std::string(text_.substr(start, pos_ - start)));
      } catch (const std::exception&) {
        pos_ = start;
        fail("exponent out of range");
      }
      if (n > 4096) {
        pos_ = start;
        fail("exponent out of range");
      }
      return pow(base, static_cast<unsigned>(n));
    }
    return base;
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        ++pos_;
      } else if ((c == 'e' || c == 'E') && pos_ > start) {
        ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      } else {
        break;
      }
    }
    auto v = parse_real(text_.substr(start, pos_ - start));
    if (!v) {
      pos_ = start;
      fail("malformed number");
    }
    return *v;
  }

  double signed_number() {
    const bool neg = accept('-');
    const double v = number();
    return neg ? -v : v;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return constant(number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string ident(text_.substr(start, pos_ - start));
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(') return call(ident, start);
      return variable(ident);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr call(const std::string& fn, std::size_t fn_pos) {
    expect('(');
    if (fn == "sqrt" || fn == "abs") {
      Expr a = expression();
      expect(')');
      return fn == "sqrt" ? sqrt(a) : abs(a);
    }
    if (fn == "min" || fn == "max") {
      Expr a = expression();
      expect(',');
      Expr b = expression();
      expect(')');
      return fn == "min" ? min(a, b) : max(a, b);
    }
    if (fn == "rand" || fn == "ror") {
      Expr a = expression();
      expect(',');
      Expr b = expression();
      expect(',');
      const std::size_t alpha_pos = pos_;
      const double alpha = signed_number();
      expect(')');
      try {
        return fn == "rand" ? r_and(a, b, alpha) : r_or(a, b, alpha);
      } catch (const Error& err) {
        throw ParseError(alpha_pos, err.what());
      }
    }
    pos_ = fn_pos;
    fail("unknown function '" + fn + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline nlohmann::json to_json(const Expr& e) {
  nlohmann::json j;
  switch (e.kind()) {
    case NodeKind::Const:
      j["op"] = "const";
      j["value"] = e.value();
      return j;
    case NodeKind::Var:
      j["op"] = "var";
      j["name"] = e.name();
      return j;
    case NodeKind::Neg: j["op"] = "neg"; break;
    case NodeKind::Add: j["op"] = "add"; break;
    case NodeKind::Sub: j["op"] = "sub"; break;
    case NodeKind::Mul: j["op"] = "mul"; break;
    case NodeKind::Pow:
      j["op"] = "pow";
      j["exponent"] = e.exponent();
      break;
    case NodeKind::Sqrt: j["op"] = "sqrt"; break;
    case NodeKind::Abs: j["op"] = "abs"; break;
    case NodeKind::Min: j["op"] = "min"; break;
    case NodeKind::Max: j["op"] = "max"; break;
    case NodeKind::RAnd:
      j["op"] = "rand";
      j["alpha"] = e.alpha();
      break;
    case NodeKind::ROr:
      j["op"] = "ror";
      j["alpha"] = e.alpha();
      break;
  }
  nlohmann::json args = nlohmann::json::array();
  for (const auto& a : e.args()) args.push_back(to_json(a));
  j["args"] = std::move(args);
  return j;
}

inline Expr from_json(const nlohmann::json& j, const std::string& path = "$") {
  auto bad = [&](const std::string& why) -> ParseError { return ParseError(0, path + ": " + why); };
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string()) throw bad("node needs a string \"op\"");
  const std::string op = j["op"].get<std::string>();
  if (op == "const") {
    if (!j.contains("value") || !j["value"].is_number()) throw bad("const needs numeric \"value\"");
    return constant(j["value"].get<double>());
  }
  if (op == "var") {
    if (!j.contains("name") || !j["name"].is_string()) throw bad("var needs string \"name\"");
    return variable(j["name"].get<std::string>());
  }
  if (!j.contains("args") || !j["args"].is_array()) throw bad("\"" + op + "\" needs an \"args\" array");
  const auto& args = j["args"];
  std::vector<Expr> kids;
  for (std::size_t i = 0; i < args.size(); ++i)
    kids.push_back(from_json(args[i], path + ".args[" + std::to_string(i) + "]"));
  auto arity = [&](std::size_t n) {
    if (kids.size() != n) throw bad("\"" + op + "\" takes " + std::to_string(n) + " argument(s)");
  };
  if (op == "neg") return arity(1), -kids[0];
  if (op == "add") return arity(2), kids[0] + kids[1];
  if (op == "sub") return arity(2), kids[0] - kids[1];
  if (op == "mul") return arity(2), kids[0] * kids[1];
  if (op == "sqrt") return arity(1), sqrt(kids[0]);
  if (op == "abs") return arity(1), abs(kids[0]);
  if (op == "min") return arity(2), min(kids[0], kids[1]);
  if (op == "max") return arity(2), max(kids[0], kids[1]);
  if (op == "pow") {
    arity(1);
    if (!j.contains("exponent") || !j["exponent"].is_number_unsigned())
      throw bad("pow needs a non-negative integer \"exponent\"");
    return pow(kids[0], j["exponent"].get<unsigned>());
  }
  if (op == "rand" || op == "ror") {
    arity(2);
    if (!j.contains("alpha") || !j["alpha"].is_number()) throw bad(op + " needs numeric \"alpha\"");
    try {
      return op == "rand" ? r_and(kids[0], kids[1], j["alpha"].get<double>())
                          : r_or(kids[0], kids[1], j["alpha"].get<double>());
    } catch (const Error& e) {
      throw bad(e.what());
    }
  }
  throw bad("unknown op \"" + op + "\"");
}

}  // namespace detail

inline std::string to_infix(const Expr& e, InfixStyle style = InfixStyle::Compact) {
  std::string out;
  switch (style) {
    case InfixStyle::Compact: detail::print_infix(e, out); break;
    case InfixStyle::Expanded: detail::print_infix(expand_rfunctions(e), out); break;
    case InfixStyle::Abs: detail::print_infix(expand_rfunctions(canonicalize_alpha1(e)), out); break;
  }
  return out;
}

inline nlohmann::json to_tree_json(const Expr& e) { return detail::to_json(e); }
inline Expr from_tree_json(const nlohmann::json& j) { return detail::from_json(j); }

inline std::string serialize(const Expr& e, TextFormat format) {
  if (format == TextFormat::Infix) return to_infix(e);
  return detail::to_json(e).dump();
}

inline Expr parse(std::string_view text, TextFormat format) {
  if (format == TextFormat::Infix) return detail::InfixParser(text).parse();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
  return detail::from_json(j);
}

}  // namespace rdesign
