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

/// Adaptive integrator for small stiff autonomous systems y' = f(y).
///
/// Each step of size H runs the linearly implicit Euler scheme
///   (I - h J) (z_{i+1} - z_i) = h f(z_i),   h = H / n_j,
/// with J = f'(y_n) frozen over the step, for n_j = 1, 2, ..., K sub-steps,
/// and combines the K results by polynomial extrapolation to h -> 0
/// (Aitken-Neville). The last two diagonal entries of the tableau give the
/// local error estimate. The base scheme is L-stable, which keeps fast
/// quasi-steady components accurate with large steps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "rdesign/error.hpp"
#include "rdesign/format.hpp"

namespace rdesign {

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  /// Extrapolation columns (order of the accepted solution), 2..8.
  int order = 5;
  double initial_step = 0.0;  // 0 picks one from the initial slope
  double min_step = 1e-15;
  std::size_t max_steps = 200000;
};

struct IntegratorStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
  std::size_t jacobian_evals = 0;
  /// Largest normalised error estimate among accepted steps (<= 1).
  double max_error_estimate = 0.0;
  double smallest_step = 0.0;
};

template <int N>
class ExtrapolatedEuler {
 public:
  using Vec = Eigen::Matrix<double, N, 1>;
  using Mat = Eigen::Matrix<double, N, N>;

  explicit ExtrapolatedEuler(IntegratorOptions options = {}) : opt_(options) {
    if (opt_.order < 2 || opt_.order > 8) throw Error(Errc::InvalidSpec, "extrapolation order must be in 2..8");
    if (!(opt_.rtol > 0.0) || !(opt_.atol >= 0.0)) throw Error(Errc::InvalidSpec, "tolerances must be positive");
  }

  /// Integrates from t0 to t1. `observer(t, y)` is called for the initial
  /// state and after every accepted step; steps are shortened to land on
  /// each value in `stops` (sorted, inside (t0, t1]).
  template <typename Rhs, typename Jac, typename Observer>
  Vec integrate(const Rhs& f, const Jac& jac, Vec y, double t0, double t1, const std::vector<double>& stops,
                Observer&& observer) {
    stats_ = {};
    const double span = t1 - t0;
    if (!(span > 0.0)) throw Error(Errc::InvalidSpec, "integration interval must be increasing");
    observer(t0, y);
    double t = t0;
    double h = opt_.initial_step > 0.0 ? opt_.initial_step : initial_step(f, y, span);
    std::size_t next_stop = 0;
    while (next_stop < stops.size() && stops[next_stop] <= t0) ++next_stop;
    bool last_rejected = false;
    stats_.smallest_step = span;
    while (t < t1) {
      if (stats_.steps + stats_.rejected >= opt_.max_steps)
        throw Error(Errc::ToleranceNotMet, "step budget of " + std::to_string(opt_.max_steps) +
                                               " exhausted at t=" + format_real(t));
      double target = t1;
      if (next_stop < stops.size()) target = std::min(target, stops[next_stop]);
      bool lands = false;
      if (t + h >= target || target - (t + h) < 1e-12 * std::max(1.0, std::fabs(target))) {
        h = target - t;
        lands = true;
      }
      if (h < opt_.min_step * std::max(1.0, std::fabs(t)))
        throw Error(Errc::IntegratorFailure, "step size underflow at t=" + format_real(t));

      Vec err;
      const Vec y_new = macro_step(f, jac, y, h, err);
      double norm = 0.0;
      bool finite = y_new.allFinite();
      for (int i = 0; i < y.size() && finite; ++i) {
        const double sc = opt_.atol + opt_.rtol * std::max(std::fabs(y(i)), std::fabs(y_new(i)));
        norm = std::max(norm, std::fabs(err(i)) / sc);
      }
      if (!finite || !std::isfinite(norm)) {
        ++stats_.rejected;
        last_rejected = true;
        h *= 0.25;
        continue;
      }
      const double k = static_cast<double>(opt_.order);
      double factor = norm > 0.0 ? 0.9 * std::pow(norm, -1.0 / k) : 4.0;
      factor = std::clamp(factor, 0.2, 4.0);
      if (norm <= 1.0) {
        t = lands ? target : t + h;
        y = y_new;
        ++stats_.steps;
        stats_.max_error_estimate = std::max(stats_.max_error_estimate, norm);
        stats_.smallest_step = std::min(stats_.smallest_step, h);
        observer(t, y);
        if (lands && next_stop < stops.size() && target == stops[next_stop]) ++next_stop;
        if (last_rejected) factor = std::min(factor, 1.0);
        last_rejected = false;
        h *= factor;
      } else {
        ++stats_.rejected;
        last_rejected = true;
        h *= std::min(factor, 0.9);
      }
    }
    return y;
  }

  const IntegratorStats& stats() const noexcept { return stats_; }

 private:
  template <typename Rhs>
  double initial_step(const Rhs& f, const Vec& y, double span) {
    const Vec f0 = f(y);
    ++stats_.rhs_evals;
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double sc = opt_.atol + opt_.rtol * std::fabs(y(i));
      d0 = std::max(d0, std::fabs(y(i)) / sc);
      d1 = std::max(d1, std::fabs(f0(i)) / sc);
    }
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    return std::min(h, span);
  }

  template <typename Rhs, typename Jac>
  Vec macro_step(const Rhs& f, const Jac& jac, const Vec& y, double H, Vec& err) {
    const int kcols = opt_.order;
    const Mat J = jac(y);
    const Vec f0 = f(y);
    ++stats_.jacobian_evals;
    ++stats_.rhs_evals;
    std::vector<std::vector<Vec>> table(static_cast<std::size_t>(kcols));
    const Mat I = Mat::Identity(y.size(), y.size());
    for (int j = 0; j < kcols; ++j) {
      const int n = j + 1;
      const double h = H / n;
      const Eigen::PartialPivLU<Mat> lu(I - h * J);
      Vec z = y;
      Vec fz = f0;
      for (int i = 0; i < n; ++i) {
        z += lu.solve(h * fz);
        if (i + 1 < n) {
          fz = f(z);
          ++stats_.rhs_evals;
        }
      }
      auto& row = table[static_cast<std::size_t>(j)];
      row.push_back(z);
      for (int k = 1; k <= j; ++k) {
        const double ratio = static_cast<double>(n) / static_cast<double>(n - k);
        const Vec& prev = table[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)];
        row.push_back(row[static_cast<std::size_t>(k - 1)] +
                      (row[static_cast<std::size_t>(k - 1)] - prev) / (ratio - 1.0));
      }
    }
    const auto& last = table.back();
    err = last[static_cast<std::size_t>(kcols - 1)] - last[static_cast<std::size_t>(kcols - 2)];
    return last[static_cast<std::size_t>(kcols - 1)];
  }

  IntegratorOptions opt_;
  IntegratorStats stats_;
};

}  // namespace rdesign
