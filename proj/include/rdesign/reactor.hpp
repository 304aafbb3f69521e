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

/// Isothermal two-stage batch reactor 2A -> B -> C in scaled time
/// tau = (clock time)/t on [0, 1]:
///   dC_A/dtau = -2 t k1 C_A^2
///   dC_B/dtau =  t (k1 C_A^2 - k2 C_B)
///   dC_C/dtau =  t k2 C_B
/// with C_A(0) = C_A0, C_B(0) = C_C(0) = 0 and Arrhenius rates
/// k_j = k_j0 exp(-E_j / (R T)).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rdesign/box.hpp"
#include "rdesign/error.hpp"
#include "rdesign/format.hpp"
#include "rdesign/stiff.hpp"

namespace rdesign::reactor {

struct KineticParams {
  double E1 = 2500.2;   // J/mol
  double E2 = 5000.1;   // J/mol
  double k1_0 = 0.0666;
  double k2_0 = 10333.5;
  double R = 8.314;     // J/(mol K)
  double CA0 = 2000.0;
  double V = 1.0;       // m^3

  /// Activation energies and prefactors may be zero (no temperature
  /// dependence, no reaction); everything else must be positive.
  void validate() const {
    auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!finite_nonneg(E1) || !finite_nonneg(E2)) throw Error(Errc::InvalidSpec, "activation energies must be >= 0");
    if (!finite_nonneg(k1_0) || !finite_nonneg(k2_0)) throw Error(Errc::InvalidSpec, "rate prefactors must be >= 0");
    if (!positive(R) || !positive(CA0) || !positive(V))
      throw Error(Errc::InvalidSpec, "R, CA0 and V must be positive");
  }
};

struct OperatingPoint {
  double T = 275.0;  // K
  double t = 275.0;  // min
};

inline constexpr double kPurityThreshold = 0.80;
inline constexpr double kProfitThreshold = 128.0;

/// T in [250, 300] K, t in [250, 300] min.
inline Box default_box() { return {{250.0, 300.0}, {250.0, 300.0}}; }

inline IntegratorOptions default_integrator_options() { return IntegratorOptions{}; }

struct RateConstants {
  double k1 = 0.0;
  double k2 = 0.0;
};

inline RateConstants rate_constants(double T, const KineticParams& p = {}) {
  if (!(T > 0.0) || !std::isfinite(T))
    throw Error(Errc::NonpositiveTemperature, "temperature must be positive, got " + format_real(T));
  return {p.k1_0 * std::exp(-p.E1 / (p.R * T)), p.k2_0 * std::exp(-p.E2 / (p.R * T))};
}

struct ReactorOutcome {
  double CA = 0.0;
  double CB = 0.0;
  double CC = 0.0;
  double purity = 0.0;
  double profit = 0.0;
  IntegratorStats stats;
};

struct TrajectoryPoint {
  double tau = 0.0;
  double CA = 0.0;
  double CB = 0.0;
  double CC = 0.0;
};

struct Trajectory {
  ReactorOutcome outcome;
  /// State at each requested checkpoint, in order.
  std::vector<TrajectoryPoint> checkpoints;
  /// State after every accepted step, starting with tau = 0.
  std::vector<TrajectoryPoint> steps;
};

namespace detail {

using State = Eigen::Matrix<double, 3, 1>;
using Jacobian = Eigen::Matrix<double, 3, 3>;

inline void check_point(const OperatingPoint& u) {
  if (!(u.T > 0.0) || !std::isfinite(u.T))
    throw Error(Errc::NonpositiveTemperature, "temperature must be positive, got " + format_real(u.T));
  if (!(u.t > 0.0) || !std::isfinite(u.t)) throw Error(Errc::InvalidSpec, "processing time must be positive");
}

inline ReactorOutcome finish(const State& y, const OperatingPoint& u, const KineticParams& p) {
  ReactorOutcome o;
  o.CA = y(0);
  o.CB = y(1);
  o.CC = y(2);
  const double total = o.CA + o.CB + o.CC;
  o.purity = total > 0.0 ? o.CB / total : 0.0;
  o.purity = std::clamp(o.purity, 0.0, 1.0);
  o.profit = (100.0 * o.CB - 20.0 * o.CA) * p.V / (u.t + 30.0);
  return o;
}

template <typename Observer>
ReactorOutcome run(const OperatingPoint& u, const KineticParams& p, const IntegratorOptions& opt,
                   const std::vector<double>& stops, Observer&& observer) {
  p.validate();
  check_point(u);
  const auto [k1, k2] = rate_constants(u.T, p);
  const double a = u.t * k1;
  const double b = u.t * k2;
  auto f = [a, b](const State& y) {
    const double r1 = a * y(0) * y(0);
    const double r2 = b * y(1);
    return State(-2.0 * r1, r1 - r2, r2);
  };
  auto jac = [a, b](const State& y) {
    Jacobian j = Jacobian::Zero();
    j(0, 0) = -4.0 * a * y(0);
    j(1, 0) = 2.0 * a * y(0);
    j(1, 1) = -b;
    j(2, 1) = b;
    return j;
  };
  ExtrapolatedEuler<3> solver(opt);
  const State y = solver.integrate(f, jac, State(p.CA0, 0.0, 0.0), 0.0, 1.0, stops, observer);
  ReactorOutcome o = finish(y, u, p);
  o.stats = solver.stats();
  return o;
}

}  // namespace detail

inline ReactorOutcome simulate(const OperatingPoint& u, const KineticParams& p = {},
                               const IntegratorOptions& opt = default_integrator_options()) {
  return detail::run(u, p, opt, {}, [](double, const detail::State&) {});
}

/// Integrates with steps forced to land on each checkpoint tau (sorted,
/// within (0, 1]) and records every accepted step.
inline Trajectory simulate_trajectory(const OperatingPoint& u, const std::vector<double>& checkpoints,
                                      const KineticParams& p = {},
                                      const IntegratorOptions& opt = default_integrator_options()) {
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > 0.0 && checkpoints[i] <= 1.0))
      throw Error(Errc::InvalidSpec, "checkpoints must lie in (0, 1]");
    if (i > 0 && !(checkpoints[i] > checkpoints[i - 1]))
      throw Error(Errc::InvalidSpec, "checkpoints must be strictly increasing");
  }
  Trajectory tr;
  std::size_t next = 0;
  tr.outcome = detail::run(u, p, opt, checkpoints, [&](double tau, const detail::State& y) {
    tr.steps.push_back({tau, y(0), y(1), y(2)});
    if (next < checkpoints.size() && tau == checkpoints[next]) {
      tr.checkpoints.push_back(tr.steps.back());
      ++next;
    }
  });
  return tr;
}

struct Cqa {
  double purity = 0.0;
  double profit = 0.0;
};

inline Cqa cqa_vector(const OperatingPoint& u, const KineticParams& p = {},
                      const IntegratorOptions& opt = default_integrator_options()) {
  const ReactorOutcome o = simulate(u, p, opt);
  return {o.purity, o.profit};
}

}  // namespace rdesign::reactor
