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

#include <gtest/gtest.h>

#include <cmath>

#include "rdesign/stiff.hpp"

using namespace rdesign;

namespace {

using V2 = Eigen::Matrix<double, 2, 1>;
using M2 = Eigen::Matrix<double, 2, 2>;
using V1 = Eigen::Matrix<double, 1, 1>;
using M1 = Eigen::Matrix<double, 1, 1>;

constexpr double kStiff = 1e5;

// y1' = -y1, y2' = -k (y2 - y1), y(0) = (1, 0):
// y2 = k/(k-1) (e^-t - e^-kt).
V2 linear_rhs(const V2& y) { return V2(-y(0), -kStiff * (y(1) - y(0))); }
M2 linear_jac(const V2&) {
  M2 j;
  j << -1.0, 0.0, kStiff, -kStiff;
  return j;
}
double y2_exact(double t) { return kStiff / (kStiff - 1.0) * (std::exp(-t) - std::exp(-kStiff * t)); }

}  // namespace

TEST(ExtrapolatedEuler, StiffLinearSystemAccurate) {
  ExtrapolatedEuler<2> solver;
  double worst = 0.0;
  const std::vector<double> stops{0.1, 0.5, 1.0, 2.0};
  std::vector<double> seen;
  solver.integrate(linear_rhs, linear_jac, V2(1.0, 0.0), 0.0, 3.0, stops, [&](double t, const V2& y) {
    worst = std::max(worst, std::fabs(y(0) - std::exp(-t)) / std::exp(-t));
    if (t > 1e-3) worst = std::max(worst, std::fabs(y(1) - y2_exact(t)) / y2_exact(t));
    for (double s : stops)
      if (t == s) seen.push_back(t);
  });
  EXPECT_LT(worst, 1e-6);
  EXPECT_EQ(seen, stops);
  EXPECT_LT(solver.stats().steps, 2000u);
  EXPECT_LE(solver.stats().max_error_estimate, 1.0);
  EXPECT_GT(solver.stats().jacobian_evals, 0u);
}

TEST(ExtrapolatedEuler, NonlinearDecayMatchesClosedForm) {
  ExtrapolatedEuler<1> solver;
  auto f = [](const V1& y) { return V1(-y(0) * y(0)); };
  auto j = [](const V1& y) { return M1(-2.0 * y(0)); };
  const V1 end = solver.integrate(f, j, V1(1.0), 0.0, 10.0, {}, [](double, const V1&) {});
  EXPECT_NEAR(end(0), 1.0 / 11.0, 1e-9);
}

TEST(ExtrapolatedEuler, TighterToleranceIsMoreAccurate) {
  auto run = [](double rtol) {
    IntegratorOptions o;
    o.rtol = rtol;
    o.atol = rtol * 1e-2;
    ExtrapolatedEuler<2> s(o);
    const V2 y = s.integrate(linear_rhs, linear_jac, V2(1.0, 0.0), 0.0, 1.0, {}, [](double, const V2&) {});
    return std::fabs(y(1) - y2_exact(1.0));
  };
  EXPECT_LT(run(1e-10), run(1e-5));
}

TEST(ExtrapolatedEuler, BlowUpIsIntegratorFailure) {
  ExtrapolatedEuler<1> solver;
  auto f = [](const V1& y) { return V1(y(0) * y(0)); };
  auto j = [](const V1& y) { return M1(2.0 * y(0)); };
  try {
    solver.integrate(f, j, V1(1.0), 0.0, 2.0, {}, [](double, const V1&) {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == Errc::IntegratorFailure || e.code() == Errc::ToleranceNotMet) << e.what();
  }
}

TEST(ExtrapolatedEuler, StepBudgetIsToleranceNotMet) {
  IntegratorOptions o;
  o.max_steps = 5;
  ExtrapolatedEuler<2> solver(o);
  try {
    solver.integrate(linear_rhs, linear_jac, V2(1.0, 0.0), 0.0, 1.0, {}, [](double, const V2&) {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ToleranceNotMet);
  }
}

TEST(ExtrapolatedEuler, OptionValidation) {
  IntegratorOptions o;
  o.order = 1;
  EXPECT_THROW(ExtrapolatedEuler<2>{o}, Error);
  o.order = 5;
  o.rtol = 0.0;
  EXPECT_THROW(ExtrapolatedEuler<2>{o}, Error);
  ExtrapolatedEuler<2> ok;
  EXPECT_THROW(ok.integrate(linear_rhs, linear_jac, V2(1.0, 0.0), 1.0, 1.0, {}, [](double, const V2&) {}), Error);
}
