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

/// Implicit primitives and the four reference scenes (two circles, two
/// parabolas, three slabs, paraboloids with a cylindrical cut-out).

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rdesign/box.hpp"
#include "rdesign/error.hpp"
#include "rdesign/expr.hpp"
#include "rdesign/region.hpp"

namespace rdesign::geometry {

/// Disk R^2 - (x-cx)^2 - (y-cy)^2 >= 0.
struct Circle {
  double cx = 0.0, cy = 0.0, radius = 1.0;
};

/// Opens up:   y - a(x-x0)^2 + c >= 0  (the area above the parabola).
/// Opens down: y + a(x-x0)^2 + c >= 0.
struct Parabola {
  enum class Orientation { OpensUp, OpensDown };
  double a = 1.0, x0 = 0.0, c = 0.0;
  Orientation orientation = Orientation::OpensUp;
};

/// Infinite slab h^2 - axis^2 >= 0 in 3D.
struct Slab {
  char axis = 'x';
  double half_thickness = 1.0;
};

/// Under: -z + k(1-x^2-y^2) >= 0.  Above: z + k(1-x^2-y^2) >= 0.
struct Paraboloid {
  enum class Side { Under, Above };
  Side side = Side::Under;
  double coeff = 1.0;
};

/// Infinite cylinder around the z axis, r^2 - x^2 - y^2 >= 0.
struct CylinderZ {
  double radius = 1.0;
};

using PrimitiveSpec = std::variant<Circle, Parabola, Slab, Paraboloid, CylinderZ>;

inline const std::vector<std::string>& plane_vars() {
  static const std::vector<std::string> v{"x", "y"};
  return v;
}
inline const std::vector<std::string>& space_vars() {
  static const std::vector<std::string> v{"x", "y", "z"};
  return v;
}

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw Error(Errc::InvalidSpec, what);
}

inline bool finite(std::initializer_list<double> vs) {
  for (double v : vs)
    if (!std::isfinite(v)) return false;
  return true;
}

// (v - c)^2, printed as v^2 when c == 0.
inline Expr shifted_square(const std::string& v, double c) {
  return c == 0.0 ? pow(variable(v), 2) : pow(variable(v) - c, 2);
}

}  // namespace detail

inline Region primitive(const PrimitiveSpec& spec) {
  using detail::require;
  struct Visitor {
    Region operator()(const Circle& c) const {
      require(detail::finite({c.cx, c.cy, c.radius}), "circle parameters must be finite");
      require(c.radius > 0.0, "circle radius must be positive");
      Expr e = constant(c.radius * c.radius) - detail::shifted_square("x", c.cx) - detail::shifted_square("y", c.cy);
      return Region::over(e, plane_vars(), "circle");
    }
    Region operator()(const Parabola& p) const {
      require(detail::finite({p.a, p.x0, p.c}), "parabola parameters must be finite");
      require(p.a > 0.0, "parabola coefficient must be positive");
      Expr bend = constant(p.a) * detail::shifted_square("x", p.x0);
      Expr e = p.orientation == Parabola::Orientation::OpensUp ? variable("y") - bend : variable("y") + bend;
      return Region::over(e + p.c, plane_vars(), "parabola");
    }
    Region operator()(const Slab& s) const {
      require(s.axis == 'x' || s.axis == 'y' || s.axis == 'z', "slab axis must be x, y or z");
      require(detail::finite({s.half_thickness}) && s.half_thickness > 0.0, "slab half-thickness must be positive");
      Expr e = constant(s.half_thickness * s.half_thickness) - pow(variable(std::string(1, s.axis)), 2);
      return Region::over(e, space_vars(), std::string("slab-") + s.axis);
    }
    Region operator()(const Paraboloid& p) const {
      require(detail::finite({p.coeff}) && p.coeff > 0.0, "paraboloid coefficient must be positive");
      Expr bowl = constant(p.coeff) * ((constant(1.0) - pow(variable("x"), 2)) - pow(variable("y"), 2));
      Expr e = p.side == Paraboloid::Side::Under ? -variable("z") + bowl : variable("z") + bowl;
      return Region::over(e, space_vars(), p.side == Paraboloid::Side::Under ? "under-paraboloid" : "above-paraboloid");
    }
    Region operator()(const CylinderZ& c) const {
      require(detail::finite({c.radius}) && c.radius > 0.0, "cylinder radius must be positive");
      Expr e = (constant(c.radius * c.radius) - pow(variable("x"), 2)) - pow(variable("y"), 2);
      return Region::over(e, space_vars(), "cylinder-z");
    }
  };
  return std::visit(Visitor{}, spec);
}

// ---------------------------------------------------------------------------
// Reference scenes

struct TestCase {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<Region> primitives;
  /// Two labelled boolean descriptions over `primitives`.
  std::array<std::pair<std::string, BoolTree>, 2> compositions;
  double alpha = 1.0;
  Box bounds;
};

struct ComposedCase {
  Region first;
  Region second;
  TestCase spec;
};

inline const std::vector<std::string_view>& testcase_names() {
  static const std::vector<std::string_view> names{"circles-4.1", "parabolas-4.2", "slabs-A1",
                                                   "paraboloid-cylinders-A2"};
  return names;
}

inline TestCase testcase_spec(std::string_view name) {
  using L = BoolTree;
  if (name == "circles-4.1") {
    const Circle c0{1.0, 2.0, 1.5};
    const Circle c1{1.0, 1.0, 1.0};
    Region p1 = primitive(c0);
    Region p2 = primitive(c1);
    return TestCase{std::string(name),
                    {{"x0", 1.0}, {"y0", 2.0}, {"R0", 1.5}, {"x1", 1.0}, {"y1", 1.0}, {"R1", 1.0}},
                    {p1, p2},
                    {{{"and", L::leaf(p1) && L::leaf(p2)}, {"or", L::leaf(p1) || L::leaf(p2)}}},
                    1.0,
                    {{-1.0, 3.0}, {-0.5, 4.0}}};
  }
  if (name == "parabolas-4.2") {
    const double a = 1.0, x0 = 1.0, d = 3.0, b = 1.5;
    Region p1 = primitive(Parabola{a, x0, d, Parabola::Orientation::OpensUp});
    Region p2 = primitive(Parabola{a, x0, b, Parabola::Orientation::OpensDown});
    // The region of interest is phi1 >= 0 together with phi2 <= 0.
    return TestCase{std::string(name),
                    {{"a", a}, {"x0", x0}, {"x1", x0}, {"d", d}, {"b", b}},
                    {p1, p2},
                    {{{"and", L::leaf(p1) && !L::leaf(p2)}, {"or", L::leaf(p1) || !L::leaf(p2)}}},
                    1.0,
                    {{-2.0, 4.0}, {-6.0, 2.0}}};
  }
  if (name == "slabs-A1") {
    const double a = 2.0, b = 1.0, c = 2.0;
    Region f1 = primitive(Slab{'x', a});
    Region f2 = primitive(Slab{'y', b});
    Region f3 = primitive(Slab{'z', c});
    return TestCase{std::string(name),
                    {{"a", a}, {"b", b}, {"c", c}},
                    {f1, f2, f3},
                    {{{"and", L::all_of({L::leaf(f1), L::leaf(f2), L::leaf(f3)})},
                      {"or", L::any_of({L::leaf(f1), L::leaf(f2), L::leaf(f3)})}}},
                    1.0,
                    {{-3.0, 3.0}, {-3.0, 3.0}, {-3.0, 3.0}}};
  }
  if (name == "paraboloid-cylinders-A2") {
    Region f1 = primitive(Paraboloid{Paraboloid::Side::Under, 0.6});
    Region f2 = primitive(Paraboloid{Paraboloid::Side::Above, 0.6});
    Region f3 = primitive(CylinderZ{0.5});
    Region f4 = primitive(CylinderZ{0.3});
    return TestCase{std::string(name),
                    {{"k", 0.6}, {"r_outer", 0.5}, {"r_inner", 0.3}},
                    {f1, f2, f3, f4},
                    {{{"f1_and_f2", L::leaf(f1) && L::leaf(f2)},
                      {"cutout", L::all_of({L::leaf(f1), L::leaf(f2), !L::leaf(f3) || L::leaf(f4)})}}},
                    1.0,
                    {{-1.2, 1.2}, {-1.2, 1.2}, {-1.2, 1.2}}};
  }
  throw Error(Errc::UnknownTestCase, std::string(name));
}

inline ComposedCase testcase(std::string_view name) {
  TestCase spec = testcase_spec(name);
  Region first = compose(spec.compositions[0].second, spec.alpha, spec.name + ":" + spec.compositions[0].first);
  Region second = compose(spec.compositions[1].second, spec.alpha, spec.name + ":" + spec.compositions[1].first);
  return ComposedCase{std::move(first), std::move(second), std::move(spec)};
}

}  // namespace rdesign::geometry
