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

// Composes two disks, prints the result in each text form, then identifies
// the design space of a toy two-input model and classifies a few points.

#include <iostream>
#include <vector>

#include "rdesign/rdesign.hpp"

using namespace rdesign;

int main() {
  const Region a = geometry::primitive(geometry::Circle{1.0, 2.0, 1.5});
  const Region b = geometry::primitive(geometry::Circle{1.0, 1.0, 1.0});
  const Region lens = compose(BoolTree::leaf(a) && BoolTree::leaf(b));

  std::cout << "lens:      " << to_infix(lens.expr()) << "\n";
  std::cout << "with abs:  " << to_infix(lens.expr(), InfixStyle::Abs) << "\n";
  std::cout << "at (1,1.5) " << lens({1.0, 1.5}) << "\n";

  const Box box{{-1.0, 3.0}, {-0.5, 4.0}};
  const ContourSet c = marching_squares(grid_eval(lens, box, 128));
  std::cout << "contour polylines: " << c.polylines.size() << "\n";

  // Toy model with two outputs; the design space is where both reach 1.
  const ds::Model model({"u", "v"}, {"sum", "product"}, [](std::span<const double> p) {
    return std::vector<double>{p[0] + p[1], p[0] * p[1]};
  });
  const std::vector<ds::ConstraintSpec> specs{{"sum", 0, 1.0}, {"product", 1, 0.2}};
  const ds::DSReport report = ds::identify(model, specs, {{0.0, 1.0}, {0.0, 1.0}});

  std::cout << "joint: " << ds::joint_expression(report, TextFormat::Infix, InfixStyle::Abs) << "\n";
  for (const auto& p : std::vector<std::vector<double>>{{0.9, 0.9}, {0.1, 0.2}}) {
    std::cout << "(" << p[0] << ", " << p[1] << ") " << to_string(ds::membership(report, p)) << "\n";
  }
  return report.validation.agree == report.validation.points ? 0 : 1;
}
