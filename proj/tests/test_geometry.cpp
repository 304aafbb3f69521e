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

#include <functional>

#include "oracles.hpp"
#include "rdesign/geometry.hpp"

using namespace rdesign;
using namespace rdesign::geometry;

TEST(Primitive, Examples) {
  EXPECT_EQ(primitive(Circle{1.0, 2.0, 1.5})({1.0, 2.0}), 2.25);
  EXPECT_EQ(primitive(Slab{'x', 2.0})({2.0, 0.3, -7.0}), 0.0);
  EXPECT_NEAR(primitive(CylinderZ{0.5})({0.3, 0.4, 12.0}), 0.0, 1e-16);
  EXPECT_NEAR(primitive(Paraboloid{Paraboloid::Side::Under, 0.6})({0.5, 0.0, 0.1}), -0.1 + 0.6 * 0.75, 1e-15);
  EXPECT_NEAR(primitive(Paraboloid{Paraboloid::Side::Above, 0.6})({0.5, 0.0, 0.1}), 0.1 + 0.6 * 0.75, 1e-15);
  EXPECT_EQ(primitive(Parabola{1.0, 1.0, 3.0, Parabola::Orientation::OpensUp})({1.0, -3.0}), 0.0);
  EXPECT_EQ(primitive(Parabola{1.0, 1.0, 1.5, Parabola::Orientation::OpensDown})({2.0, 0.0}), 2.5);
}

TEST(Primitive, InvalidSpecs) {
  for (const PrimitiveSpec& s :
       std::vector<PrimitiveSpec>{Circle{0, 0, 0}, Circle{0, 0, -1}, Circle{std::nan(""), 0, 1}, Slab{'w', 1.0},
                                  Slab{'x', 0.0}, Paraboloid{Paraboloid::Side::Under, 0.0}, CylinderZ{-0.1},
                                  Parabola{0.0, 0.0, 0.0, Parabola::Orientation::OpensUp}}) {
    try {
      primitive(s);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::InvalidSpec);
    }
  }
}

TEST(TestCases, NamesAndUnknown) {
  EXPECT_EQ(testcase_names().size(), 4u);
  for (auto n : testcase_names()) EXPECT_EQ(testcase(n).spec.name, n);
  try {
    testcase("triangles");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownTestCase);
  }
}

TEST(TestCases, ParabolasMatchClosedForm) {
  const auto tc = testcase("parabolas-4.2");
  double worst_and = 0.0, worst_or = 0.0;
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = 0; j < 50; ++j) {
      const double x = oracle::node(-2.0, 4.0, i, 50), y = oracle::node(-6.0, 2.0, j, 50);
      worst_and = std::max(worst_and, std::fabs(tc.first({x, y}) - oracle::parabolas_and(x, y)));
      worst_or = std::max(worst_or, std::fabs(tc.second({x, y}) - oracle::parabolas_or(x, y)));
    }
  EXPECT_LE(worst_and, 1e-9);
  EXPECT_LE(worst_or, 1e-9);
  EXPECT_NEAR(tc.first({1.0, -2.25}), 0.75, 1e-15);
}

TEST(TestCases, SlabsAtOrigin) {
  const auto tc = testcase("slabs-A1");
  EXPECT_EQ(tc.first({0.0, 0.0, 0.0}), 1.0);
  EXPECT_EQ(tc.second({0.0, 0.0, 0.0}), 4.0);
}

TEST(TestCases, ParaboloidCutoutCore) {
  const auto tc = testcase("paraboloid-cylinders-A2");
  EXPECT_NEAR(tc.second({0.0, 0.0, 0.0}), std::min({0.6, 0.6, std::max(-0.25, 0.09)}), 1e-15);
  EXPECT_NEAR(tc.first({0.0, 0.0, 0.0}), 0.6, 1e-15);
}

namespace {

// Fraction of grid nodes (outside the band) where the composed sign matches
// the Boolean oracle.
template <std::size_t D>
void expect_boolean_agreement(const Region& r, const Box& box, std::size_t n,
                              const std::function<bool(const std::array<double, D>&)>& inside) {
  std::size_t checked = 0, mismatched = 0;
  std::array<double, D> p{};
  std::array<std::size_t, D> idx{};
  for (;;) {
    for (std::size_t k = 0; k < D; ++k) p[k] = oracle::node(box[k].lo, box[k].hi, idx[k], n);
    const double v = r(p);
    if (std::fabs(v) > 1e-9) {
      ++checked;
      if ((v > 0.0) != inside(p)) ++mismatched;
    }
    std::size_t k = 0;
    while (k < D && ++idx[k] == n) idx[k++] = 0;
    if (k == D) break;
  }
  EXPECT_GT(checked, n);
  EXPECT_EQ(mismatched, 0u);
}

}  // namespace

TEST(TestCaseProperty, CirclesBooleanOracle) {
  const auto tc = testcase("circles-4.1");
  auto p1 = [](const std::array<double, 2>& p) { return oracle::disk(p[0], p[1], 1.0, 2.0, 1.5) >= 0.0; };
  auto p2 = [](const std::array<double, 2>& p) { return oracle::disk(p[0], p[1], 1.0, 1.0, 1.0) >= 0.0; };
  expect_boolean_agreement<2>(tc.first, tc.spec.bounds, 256, [&](const auto& p) { return p1(p) && p2(p); });
  expect_boolean_agreement<2>(tc.second, tc.spec.bounds, 256, [&](const auto& p) { return p1(p) || p2(p); });
}

TEST(TestCaseProperty, CirclesSubsetAndSuperset) {
  const auto tc = testcase("circles-4.1");
  for (std::size_t i = 0; i < 128; ++i)
    for (std::size_t j = 0; j < 128; ++j) {
      const double x = oracle::node(-1.0, 3.0, i, 128), y = oracle::node(-0.5, 4.0, j, 128);
      for (const auto& prim : tc.spec.primitives) {
        if (tc.first({x, y}) >= 0.0) {
          EXPECT_GE(prim({x, y}), 0.0);
        }
        if (prim({x, y}) >= 0.0) {
          EXPECT_GE(tc.second({x, y}), 0.0);
        }
      }
    }
}

TEST(TestCaseProperty, ParabolasBooleanOracle) {
  const auto tc = testcase("parabolas-4.2");
  auto p1 = [](const std::array<double, 2>& p) { return p[1] - (p[0] - 1.0) * (p[0] - 1.0) + 3.0 >= 0.0; };
  auto p2 = [](const std::array<double, 2>& p) { return p[1] + (p[0] - 1.0) * (p[0] - 1.0) + 1.5 >= 0.0; };
  expect_boolean_agreement<2>(tc.first, tc.spec.bounds, 200, [&](const auto& p) { return p1(p) && !p2(p); });
  expect_boolean_agreement<2>(tc.second, tc.spec.bounds, 200, [&](const auto& p) { return p1(p) || !p2(p); });
}

TEST(TestCaseProperty, SlabsCuboidAndUnion) {
  const auto tc = testcase("slabs-A1");
  auto cuboid = [](const std::array<double, 3>& p) {
    return std::fabs(p[0]) <= 2.0 && std::fabs(p[1]) <= 1.0 && std::fabs(p[2]) <= 2.0;
  };
  auto any_slab = [](const std::array<double, 3>& p) {
    return std::fabs(p[0]) <= 2.0 || std::fabs(p[1]) <= 1.0 || std::fabs(p[2]) <= 2.0;
  };
  expect_boolean_agreement<3>(tc.first, tc.spec.bounds, 41, cuboid);
  expect_boolean_agreement<3>(tc.second, tc.spec.bounds, 41, any_slab);
}

TEST(TestCaseProperty, ParaboloidCylindersBooleanOracle) {
  const auto tc = testcase("paraboloid-cylinders-A2");
  auto f12 = [](const std::array<double, 3>& p) {
    return oracle::under_paraboloid(p[0], p[1], p[2], 0.6) >= 0.0 &&
           oracle::above_paraboloid(p[0], p[1], p[2], 0.6) >= 0.0;
  };
  auto cut = [&](const std::array<double, 3>& p) {
    return f12(p) && (oracle::cylinder(p[0], p[1], 0.5) < 0.0 || oracle::cylinder(p[0], p[1], 0.3) >= 0.0);
  };
  expect_boolean_agreement<3>(tc.first, tc.spec.bounds, 41, f12);
  expect_boolean_agreement<3>(tc.second, tc.spec.bounds, 41, cut);
}

TEST(TestCaseProperty, NonUnitAlphaKeepsSigns) {
  TestCase spec = testcase_spec("circles-4.1");
  for (double alpha : {-0.5, 0.0, 0.5}) {
    const Region r = compose(spec.compositions[0].second, alpha);
    auto inside = [](const std::array<double, 2>& p) {
      return oracle::disk(p[0], p[1], 1.0, 2.0, 1.5) >= 0.0 && oracle::disk(p[0], p[1], 1.0, 1.0, 1.0) >= 0.0;
    };
    expect_boolean_agreement<2>(r, spec.bounds, 101, inside);
  }
}
