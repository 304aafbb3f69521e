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

/// Immutable expression trees for real-valued implicit functions, and the
/// R_alpha family of R-functions built on top of them.
///
/// An Expr is a cheap handle (shared, immutable node). Building an
/// R-conjunction of two region functions yields a single closed-form
/// expression whose sign is fully determined by the signs of its operands.

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdesign/error.hpp"
#include "rdesign/format.hpp"

namespace rdesign {

enum class NodeKind { Const, Var, Neg, Add, Sub, Mul, Pow, Sqrt, Abs, Min, Max, RAnd, ROr };

/// Arguments of sqrt in [-kSqrtClampTol, 0) are treated as 0.
inline constexpr double kSqrtClampTol = 1e-12;

class Expr {
 public:
  struct Node {
    NodeKind kind = NodeKind::Const;
    double value = 0.0;     // Const
    std::string name;       // Var
    unsigned exponent = 0;  // Pow
    double alpha = 0.0;     // RAnd / ROr
    std::vector<Expr> args;
  };

  /// Default-constructed expression is the constant 0.
  Expr() : node_(std::make_shared<const Node>()) {}

  static Expr make(Node node) { return Expr(std::make_shared<const Node>(std::move(node))); }

  NodeKind kind() const noexcept { return node_->kind; }
  double value() const noexcept { return node_->value; }
  const std::string& name() const noexcept { return node_->name; }
  unsigned exponent() const noexcept { return node_->exponent; }
  double alpha() const noexcept { return node_->alpha; }
  const std::vector<Expr>& args() const noexcept { return node_->args; }
  const Expr& arg(std::size_t i) const { return node_->args.at(i); }

  bool is_const() const noexcept { return kind() == NodeKind::Const; }
  bool same_node(const Expr& other) const noexcept { return node_ == other.node_; }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Construction

inline Expr constant(double v) {
  Expr::Node n;
  n.kind = NodeKind::Const;
  n.value = v;
  return Expr::make(std::move(n));
}

inline Expr variable(std::string name) {
  Expr::Node n;
  n.kind = NodeKind::Var;
  n.name = std::move(name);
  return Expr::make(std::move(n));
}

namespace detail {
inline Expr node(NodeKind kind, std::vector<Expr> args) {
  Expr::Node n;
  n.kind = kind;
  n.args = std::move(args);
  return Expr::make(std::move(n));
}

inline void check_alpha(double alpha) {
  if (!(alpha > -1.0 && alpha <= 1.0))
    throw Error(Errc::AlphaOutOfRange, "alpha must satisfy -1 < alpha <= 1, got " + format_real(alpha));
}
}  // namespace detail

inline Expr operator-(const Expr& a) { return detail::node(NodeKind::Neg, {a}); }
inline Expr operator+(const Expr& a, const Expr& b) { return detail::node(NodeKind::Add, {a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return detail::node(NodeKind::Sub, {a, b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return detail::node(NodeKind::Mul, {a, b}); }
inline Expr operator+(const Expr& a, double b) { return a + constant(b); }
inline Expr operator-(const Expr& a, double b) { return a - constant(b); }
inline Expr operator*(double a, const Expr& b) { return constant(a) * b; }
inline Expr operator+(double a, const Expr& b) { return constant(a) + b; }
inline Expr operator-(double a, const Expr& b) { return constant(a) - b; }

inline Expr pow(const Expr& base, unsigned exponent) {
  Expr::Node n;
  n.kind = NodeKind::Pow;
  n.exponent = exponent;
  n.args = {base};
  return Expr::make(std::move(n));
}

inline Expr sqrt(const Expr& a) { return detail::node(NodeKind::Sqrt, {a}); }
inline Expr abs(const Expr& a) { return detail::node(NodeKind::Abs, {a}); }
inline Expr min(const Expr& a, const Expr& b) { return detail::node(NodeKind::Min, {a, b}); }
inline Expr max(const Expr& a, const Expr& b) { return detail::node(NodeKind::Max, {a, b}); }

/// R-conjunction of the R_alpha system:
///   (a + b - sqrt(a^2 + b^2 - 2 alpha a b)) / (1 + alpha).
/// Positive exactly where both operands are positive.
inline Expr r_and(const Expr& a, const Expr& b, double alpha = 1.0) {
  detail::check_alpha(alpha);
  Expr::Node n;
  n.kind = NodeKind::RAnd;
  n.alpha = alpha;
  n.args = {a, b};
  return Expr::make(std::move(n));
}

/// R-disjunction: same as r_and with "+ sqrt(...)".
inline Expr r_or(const Expr& a, const Expr& b, double alpha = 1.0) {
  detail::check_alpha(alpha);
  Expr::Node n;
  n.kind = NodeKind::ROr;
  n.alpha = alpha;
  n.args = {a, b};
  return Expr::make(std::move(n));
}

/// R-negation.
inline Expr r_not(const Expr& a) { return -a; }

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

// The radicand a^2 + b^2 - 2ab*alpha is evaluated as (a-b)^2 + 2(1-alpha)ab,
// which is exactly (a-b)^2 when alpha == 1 and so reproduces min/max to
// rounding. Where a + b and the root would cancel, the conjugate form
// 2ab / (a + b +/- root) is used instead.
inline double r_conj(double a, double b, double alpha) {
  const double d = a - b;
  const double root = std::sqrt(std::max(0.0, d * d + 2.0 * (1.0 - alpha) * (a * b)));
  const double s = a + b;
  if (s > 0.0) return 2.0 * (a * b) / (s + root);
  return (s - root) / (1.0 + alpha);
}

inline double r_disj(double a, double b, double alpha) {
  const double d = a - b;
  const double root = std::sqrt(std::max(0.0, d * d + 2.0 * (1.0 - alpha) * (a * b)));
  const double s = a + b;
  if (s < 0.0) return 2.0 * (a * b) / (s - root);
  return (s + root) / (1.0 + alpha);
}

inline double ipow(double base, unsigned n) {
  double result = 1.0;
  while (n > 0) {
    if (n & 1u) result *= base;
    base *= base;
    n >>= 1u;
  }
  return result;
}

template <typename Lookup>
double eval_with(const Expr& e, const Lookup& lookup) {
  switch (e.kind()) {
    case NodeKind::Const: return e.value();
    case NodeKind::Var: return lookup(e.name());
    case NodeKind::Neg: return -eval_with(e.arg(0), lookup);
    case NodeKind::Add: return eval_with(e.arg(0), lookup) + eval_with(e.arg(1), lookup);
    case NodeKind::Sub: return eval_with(e.arg(0), lookup) - eval_with(e.arg(1), lookup);
    case NodeKind::Mul: return eval_with(e.arg(0), lookup) * eval_with(e.arg(1), lookup);
    case NodeKind::Pow: return ipow(eval_with(e.arg(0), lookup), e.exponent());
    case NodeKind::Sqrt: {
      double v = eval_with(e.arg(0), lookup);
      if (v < 0.0) {
        if (v < -kSqrtClampTol)
          throw Error(Errc::NegativeSqrtArgument, "sqrt of " + format_real(v));
        v = 0.0;
      }
      return std::sqrt(v);
    }
    case NodeKind::Abs: return std::fabs(eval_with(e.arg(0), lookup));
    case NodeKind::Min: return std::min(eval_with(e.arg(0), lookup), eval_with(e.arg(1), lookup));
    case NodeKind::Max: return std::max(eval_with(e.arg(0), lookup), eval_with(e.arg(1), lookup));
    case NodeKind::RAnd:
      return r_conj(eval_with(e.arg(0), lookup), eval_with(e.arg(1), lookup), e.alpha());
    case NodeKind::ROr:
      return r_disj(eval_with(e.arg(0), lookup), eval_with(e.arg(1), lookup), e.alpha());
  }
  return 0.0;
}

}  // namespace detail

/// Scalar R_alpha conjunction and disjunction.
inline double r_and(double a, double b, double alpha = 1.0) {
  detail::check_alpha(alpha);
  return detail::r_conj(a, b, alpha);
}
inline double r_or(double a, double b, double alpha = 1.0) {
  detail::check_alpha(alpha);
  return detail::r_disj(a, b, alpha);
}

using Bindings = std::map<std::string, double, std::less<>>;

inline double eval(const Expr& e, const Bindings& point) {
  return detail::eval_with(e, [&](const std::string& name) {
    auto it = point.find(name);
    if (it == point.end()) throw Error(Errc::UnboundVariable, name);
    return it->second;
  });
}

/// Evaluates with positional values; `names[i]` is bound to `values[i]`.
inline double eval(const Expr& e, std::span<const std::string> names, std::span<const double> values) {
  if (names.size() != values.size())
    throw Error(Errc::DimensionMismatch, "names and values differ in length");
  return detail::eval_with(e, [&](const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return values[i];
    throw Error(Errc::UnboundVariable, name);
  });
}

// ---------------------------------------------------------------------------
// Structural helpers

/// Bottom-up rebuild: `f` receives a node whose children were already mapped.
template <typename F>
Expr transform(const Expr& e, const F& f) {
  if (e.args().empty()) return f(e);
  std::vector<Expr> args;
  args.reserve(e.args().size());
  bool changed = false;
  for (const auto& a : e.args()) {
    args.push_back(transform(a, f));
    changed = changed || !args.back().same_node(a);
  }
  if (!changed) return f(e);
  Expr::Node n;
  n.kind = e.kind();
  n.value = e.value();
  n.name = e.name();
  n.exponent = e.exponent();
  n.alpha = e.alpha();
  n.args = std::move(args);
  return f(Expr::make(std::move(n)));
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.same_node(b)) return true;
  if (a.kind() != b.kind() || a.args().size() != b.args().size()) return false;
  switch (a.kind()) {
    case NodeKind::Const:
      if (std::signbit(a.value()) != std::signbit(b.value()) ||
          !(a.value() == b.value() || (std::isnan(a.value()) && std::isnan(b.value()))))
        return false;
      break;
    case NodeKind::Var:
      if (a.name() != b.name()) return false;
      break;
    case NodeKind::Pow:
      if (a.exponent() != b.exponent()) return false;
      break;
    case NodeKind::RAnd:
    case NodeKind::ROr:
      if (a.alpha() != b.alpha()) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!structurally_equal(a.arg(i), b.arg(i))) return false;
  return true;
}

inline std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e.args()) n += node_count(a);
  return n;
}

inline std::size_t count_kind(const Expr& e, NodeKind kind) {
  std::size_t n = e.kind() == kind ? 1 : 0;
  for (const auto& a : e.args()) n += count_kind(a, kind);
  return n;
}

inline void collect_variables(const Expr& e, std::vector<std::string>& out) {
  if (e.kind() == NodeKind::Var) {
    for (const auto& n : out)
      if (n == e.name()) return;
    out.push_back(e.name());
    return;
  }
  for (const auto& a : e.args()) collect_variables(a, out);
}

/// Replaces each RAnd(1)/ROr(1) node with 0.5*((a+b) -/+ abs(a-b)). All other
/// nodes are kept as they are.
inline Expr canonicalize_alpha1(const Expr& e) {
  return transform(e, [](const Expr& n) {
    if ((n.kind() == NodeKind::RAnd || n.kind() == NodeKind::ROr) && n.alpha() == 1.0) {
      const Expr& a = n.arg(0);
      const Expr& b = n.arg(1);
      Expr s = a + b;
      Expr d = abs(a - b);
      return constant(0.5) * (n.kind() == NodeKind::RAnd ? s - d : s + d);
    }
    return n;
  });
}

/// Rewrites every R_alpha node into plain arithmetic with an explicit
/// square root, k*((a+b) -/+ sqrt((a-b)^2 + c*a*b)) with k = 1/(1+alpha)
/// and c = 2(1-alpha). The c-term is dropped for alpha == 1 and the factor
/// k for alpha == 0.
inline Expr expand_rfunctions(const Expr& e) {
  return transform(e, [](const Expr& n) {
    if (n.kind() != NodeKind::RAnd && n.kind() != NodeKind::ROr) return n;
    const Expr& a = n.arg(0);
    const Expr& b = n.arg(1);
    const double alpha = n.alpha();
    Expr radicand = pow(a - b, 2);
    if (alpha != 1.0) radicand = radicand + (constant(2.0 * (1.0 - alpha)) * a) * b;
    Expr body = n.kind() == NodeKind::RAnd ? (a + b) - sqrt(radicand) : (a + b) + sqrt(radicand);
    if (alpha == 0.0) return body;
    return constant(1.0 / (1.0 + alpha)) * body;
  });
}

}  // namespace rdesign
