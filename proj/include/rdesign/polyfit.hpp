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

/// Least-squares polynomial metamodels over an explicit monomial basis.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rdesign/error.hpp"
#include "rdesign/expr.hpp"
#include "rdesign/format.hpp"

namespace rdesign {

using Exponents = std::vector<unsigned>;

struct BasisSpec {
  std::vector<std::string> names;
  std::vector<Exponents> monomials;

  std::size_t size() const noexcept { return monomials.size(); }

  void validate() const {
    std::set<Exponents> seen;
    for (const auto& m : monomials) {
      if (m.size() != names.size())
        throw Error(Errc::InvalidSpec, "monomial exponent vector does not match the variable count");
      if (!seen.insert(m).second) throw Error(Errc::InvalidSpec, "duplicate monomial in basis");
    }
    if (monomials.empty()) throw Error(Errc::InvalidSpec, "empty basis");
  }

  /// Human-readable monomial, e.g. "T^2*t" or "1".
  std::string label(std::size_t j) const {
    std::string s;
    for (std::size_t v = 0; v < names.size(); ++v) {
      const unsigned e = monomials[j][v];
      if (e == 0) continue;
      if (!s.empty()) s += '*';
      s += names[v];
      if (e > 1) s += '^' + std::to_string(e);
    }
    return s.empty() ? "1" : s;
  }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

/// Full polynomial basis of total degree <= degree, graded order.
inline BasisSpec total_degree_basis(std::vector<std::string> names, unsigned degree) {
  BasisSpec b{std::move(names), {}};
  const std::size_t d = b.names.size();
  for (unsigned total = 0; total <= degree; ++total) {
    Exponents e(d, 0);
    // Enumerate compositions of `total` into d parts, first variable highest.
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t v, unsigned left) {
      if (v + 1 == d) {
        e[v] = left;
        b.monomials.push_back(e);
        return;
      }
      for (unsigned k = left + 1; k-- > 0;) {
        e[v] = k;
        rec(v + 1, left - k);
      }
    };
    if (d == 0) break;
    rec(0, total);
  }
  return b;
}

/// {1, T, T^2, t, t*T} over variables (T, t): second order in temperature,
/// first order in time, with the interaction term.
inline BasisSpec reactor_basis() { return BasisSpec{{"T", "t"}, {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}}}; }

inline double monomial_value(const Exponents& exps, std::span<const double> point) {
  double v = 1.0;
  for (std::size_t i = 0; i < exps.size(); ++i)
    for (unsigned k = 0; k < exps[i]; ++k) v *= point[i];
  return v;
}

inline Eigen::MatrixXd design_matrix(const std::vector<std::vector<double>>& points, const BasisSpec& basis) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != basis.names.size())
      throw Error(Errc::DimensionMismatch, "point " + std::to_string(i) + " has " + std::to_string(points[i].size()) +
                                               " coordinates, basis has " + std::to_string(basis.names.size()) +
                                               " variables");
    for (std::size_t j = 0; j < basis.size(); ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = monomial_value(basis.monomials[j], points[i]);
  }
  return a;
}

struct FitResult {
  BasisSpec basis;
  std::vector<double> coefficients;
  double r_squared = 0.0;
  std::size_t n_points = 0;
  double residual_max_abs = 0.0;

  double predict(std::span<const double> point) const {
    double v = 0.0;
    for (std::size_t j = 0; j < coefficients.size(); ++j) v += coefficients[j] * monomial_value(basis.monomials[j], point);
    return v;
  }
};

/// 1 - SS_res/SS_tot. When the data are constant, 1 if every residual is
/// within 1e-12 and 0 otherwise.
inline double r_squared(std::span<const double> values, std::span<const double> predictions) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss_res = 0.0, ss_tot = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double r = values[i] - predictions[i];
    ss_res += r * r;
    ss_tot += (values[i] - mean) * (values[i] - mean);
    worst = std::max(worst, std::fabs(r));
  }
  if (ss_tot == 0.0) return worst <= 1e-12 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

struct FitOptions {
  bool scale_columns = true;
  double rank_tolerance = 1e-10;
};

/// Ordinary least squares through a column-pivoted Householder QR of the
/// design matrix. Columns are scaled to unit max-abs before factorising and
/// the coefficients are returned in the original units.
inline FitResult fit_least_squares(const std::vector<std::vector<double>>& points, std::span<const double> values,
                                   const BasisSpec& basis, const FitOptions& options = {}) {
  basis.validate();
  if (points.size() != values.size())
    throw Error(Errc::DimensionMismatch, "points and values differ in length");
  if (points.size() < basis.size())
    throw Error(Errc::InsufficientPoints, std::to_string(points.size()) + " points for " +
                                              std::to_string(basis.size()) + " coefficients");
  Eigen::MatrixXd a = design_matrix(points, basis);
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(a.cols());
  if (options.scale_columns) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double m = a.col(j).cwiseAbs().maxCoeff();
      if (m > 0.0) scale(j) = m;
    }
    a = a * scale.cwiseInverse().asDiagonal();
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0 || sv(sv.size() - 1) < options.rank_tolerance * sv(0))
    throw Error(Errc::RankDeficient, "design matrix is rank deficient (sigma_min/sigma_max below " +
                                         format_real(options.rank_tolerance) + ")");
  const Eigen::Map<const Eigen::VectorXd> y(values.data(), static_cast<Eigen::Index>(values.size()));
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y).cwiseQuotient(scale);

  FitResult fit;
  fit.basis = basis;
  fit.coefficients.assign(c.data(), c.data() + c.size());
  fit.n_points = points.size();
  std::vector<double> pred(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    pred[i] = fit.predict(points[i]);
    fit.residual_max_abs = std::max(fit.residual_max_abs, std::fabs(values[i] - pred[i]));
  }
  fit.r_squared = r_squared(values, pred);
  return fit;
}

/// Sum of coefficient*monomial terms over the basis variables.
inline Expr to_expr(const FitResult& fit) {
  Expr sum;
  for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
    std::optional<Expr> mono;
    for (std::size_t v = 0; v < fit.basis.names.size(); ++v) {
      const unsigned e = fit.basis.monomials[j][v];
      if (e == 0) continue;
      Expr factor = e == 1 ? variable(fit.basis.names[v]) : pow(variable(fit.basis.names[v]), e);
      mono = mono ? *mono * factor : factor;
    }
    Expr term = mono ? constant(fit.coefficients[j]) * *mono : constant(fit.coefficients[j]);
    sum = j == 0 ? term : sum + term;
  }
  return sum;
}

inline nlohmann::json to_json(const FitResult& fit) {
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t j = 0; j < fit.coefficients.size(); ++j)
    terms.push_back({{"monomial", fit.basis.label(j)}, {"exponents", fit.basis.monomials[j]},
                     {"coefficient", fit.coefficients[j]}});
  return {{"variables", fit.basis.names},
          {"terms", terms},
          {"r_squared", fit.r_squared},
          {"n_points", fit.n_points},
          {"residual_max_abs", fit.residual_max_abs}};
}

inline FitResult fit_from_json(const nlohmann::json& j) {
  try {
    FitResult f;
    f.basis.names = j.at("variables").get<std::vector<std::string>>();
    for (const auto& t : j.at("terms")) {
      f.basis.monomials.push_back(t.at("exponents").get<Exponents>());
      f.coefficients.push_back(t.at("coefficient").get<double>());
    }
    f.r_squared = j.at("r_squared").get<double>();
    f.n_points = j.at("n_points").get<std::size_t>();
    f.residual_max_abs = j.at("residual_max_abs").get<double>();
    f.basis.validate();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("fit block: ") + e.what());
  }
}

}  // namespace rdesign
