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

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdesign/error.hpp"
#include "rdesign/expr.hpp"

namespace rdesign {

struct Variable {
  std::string name;
  std::string unit;

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// A point set { x : expr(x) >= 0 } over an ordered list of variables.
class Region {
 public:
  Region(Expr expr, std::vector<Variable> vars, std::string description = {})
      : expr_(std::move(expr)), vars_(std::move(vars)), description_(std::move(description)) {
    names_.reserve(vars_.size());
    for (const auto& v : vars_) names_.push_back(v.name);
    std::vector<std::string> used;
    collect_variables(expr_, used);
    for (const auto& u : used) {
      bool found = false;
      for (const auto& n : names_) found = found || n == u;
      if (!found) throw Error(Errc::UnboundVariable, "'" + u + "' is not in the region's variable list");
    }
  }

  static Region over(Expr expr, const std::vector<std::string>& names, std::string description = {}) {
    std::vector<Variable> vars;
    for (const auto& n : names) vars.push_back({n, {}});
    return Region(std::move(expr), std::move(vars), std::move(description));
  }

  const Expr& expr() const noexcept { return expr_; }
  const std::vector<Variable>& vars() const noexcept { return vars_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& description() const noexcept { return description_; }
  std::size_t dimension() const noexcept { return vars_.size(); }

  double operator()(std::span<const double> point) const {
    if (point.size() != names_.size())
      throw Error(Errc::DimensionMismatch, "expected " + std::to_string(names_.size()) + " coordinates");
    return eval(expr_, names_, point);
  }
  double operator()(std::initializer_list<double> point) const {
    return (*this)(std::span<const double>(point.begin(), point.size()));
  }

  bool contains(std::span<const double> point) const { return (*this)(point) >= 0.0; }

 private:
  Expr expr_;
  std::vector<Variable> vars_;
  std::vector<std::string> names_;
  std::string description_;
};

enum class Membership { Inside, Boundary, Outside };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Boundary: return "boundary";
    case Membership::Outside: return "outside";
  }
  return "?";
}

inline Membership classify(double value, double tol) {
  if (value > tol) return Membership::Inside;
  if (value < -tol) return Membership::Outside;
  return Membership::Boundary;
}

inline Membership sign_class(const Region& region, std::span<const double> point, double tol) {
  if (!(tol >= 0.0)) throw Error(Errc::InvalidSpec, "tolerance must be non-negative");
  return classify(region(point), tol);
}

/// Set-theoretic description over primitive regions.
class BoolTree {
 public:
  enum class Kind { Leaf, And, Or, Not };

  static BoolTree leaf(Region r) {
    BoolTree t(Kind::Leaf);
    t.leaf_ = std::make_shared<const Region>(std::move(r));
    return t;
  }
  static BoolTree all_of(std::vector<BoolTree> children) { return BoolTree(Kind::And, std::move(children)); }
  static BoolTree any_of(std::vector<BoolTree> children) { return BoolTree(Kind::Or, std::move(children)); }
  static BoolTree negate(BoolTree child) { return BoolTree(Kind::Not, {std::move(child)}); }

  Kind kind() const noexcept { return kind_; }
  const Region& region() const { return *leaf_; }
  const std::vector<BoolTree>& children() const noexcept { return children_; }

 private:
  explicit BoolTree(Kind k) : kind_(k) {}
  BoolTree(Kind k, std::vector<BoolTree> children) : kind_(k), children_(std::move(children)) {
    if (children_.empty()) throw Error(Errc::InvalidSpec, "boolean node without operands");
    if (k == Kind::Not && children_.size() != 1) throw Error(Errc::InvalidSpec, "negation takes one operand");
  }

  Kind kind_;
  std::shared_ptr<const Region> leaf_;
  std::vector<BoolTree> children_;
};

inline BoolTree operator&&(BoolTree a, BoolTree b) { return BoolTree::all_of({std::move(a), std::move(b)}); }
inline BoolTree operator||(BoolTree a, BoolTree b) { return BoolTree::any_of({std::move(a), std::move(b)}); }
inline BoolTree operator!(BoolTree a) { return BoolTree::negate(std::move(a)); }

namespace detail {

inline const Region& first_leaf(const BoolTree& t) {
  return t.kind() == BoolTree::Kind::Leaf ? t.region() : first_leaf(t.children().front());
}

inline Expr compose_expr(const BoolTree& t, double alpha, const std::vector<Variable>& vars) {
  switch (t.kind()) {
    case BoolTree::Kind::Leaf:
      if (t.region().vars() != vars)
        throw Error(Errc::MixedVariableLists, "leaf '" + t.region().description() + "' uses a different variable list");
      return t.region().expr();
    case BoolTree::Kind::Not: return r_not(compose_expr(t.children().front(), alpha, vars));
    case BoolTree::Kind::And:
    case BoolTree::Kind::Or: {
      // n-ary operators fold to the left: ((c1 op c2) op c3) ...
      Expr acc = compose_expr(t.children().front(), alpha, vars);
      for (std::size_t i = 1; i < t.children().size(); ++i) {
        Expr next = compose_expr(t.children()[i], alpha, vars);
        acc = t.kind() == BoolTree::Kind::And ? r_and(acc, next, alpha) : r_or(acc, next, alpha);
      }
      return acc;
    }
  }
  return {};
}

}  // namespace detail

/// Replaces And/Or/Not by R-conjunction/R-disjunction/R-negation, giving
/// one region whose sign reproduces the boolean combination of the leaves.
inline Region compose(const BoolTree& tree, double alpha = 1.0, std::string description = {}) {
  detail::check_alpha(alpha);
  const auto& vars = detail::first_leaf(tree).vars();
  Expr e = detail::compose_expr(tree, alpha, vars);
  return Region(std::move(e), vars, std::move(description));
}

}  // namespace rdesign
