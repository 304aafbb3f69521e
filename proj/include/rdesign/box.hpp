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

#include <span>
#include <string>
#include <vector>

#include "rdesign/error.hpp"
#include "rdesign/format.hpp"

namespace rdesign {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double v) const noexcept { return v >= lo && v <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned box, one interval per coordinate.
using Box = std::vector<Interval>;

inline void check_box(const Box& box) {
  for (std::size_t i = 0; i < box.size(); ++i)
    if (!(box[i].lo < box[i].hi))
      throw Error(Errc::BoundsMismatch, "axis " + std::to_string(i) + " needs lo < hi, got [" +
                                            format_real(box[i].lo) + ", " + format_real(box[i].hi) + "]");
}

inline bool box_contains(const Box& box, std::span<const double> point) {
  if (point.size() != box.size()) return false;
  for (std::size_t i = 0; i < box.size(); ++i)
    if (!box[i].contains(point[i])) return false;
  return true;
}

}  // namespace rdesign
