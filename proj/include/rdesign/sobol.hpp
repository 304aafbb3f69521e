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

/// Base-2 Sobol points (Gray-code order, 32-bit direction numbers) and
/// affine scaling into parameter boxes.

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rdesign/box.hpp"
#include "rdesign/detail/sobol_table.hpp"
#include "rdesign/error.hpp"

namespace rdesign {

inline constexpr unsigned kSobolMaxDimension = 16;
inline constexpr std::uint64_t kSobolIndexLimit = std::uint64_t{1} << 32;

struct SampleSet {
  std::size_t dimension = 0;
  std::vector<std::vector<double>> points;
  std::uint64_t skip = 0;
  std::optional<Box> scaled_to;

  std::size_t size() const noexcept { return points.size(); }
};

using DirectionTable = std::vector<detail::DirectionRow>;

inline DirectionTable default_direction_table() {
  return DirectionTable(detail::kJoeKuoRows.begin(), detail::kJoeKuoRows.end());
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Parses the direction-number file format: '#' comments, an optional
/// "d s a m_i" header, then one row per dimension >= 2.
inline DirectionTable parse_direction_table(std::string_view text) {
  DirectionTable rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (line.empty() || line[0] == '#' || line.rfind("d ", 0) == 0) continue;
    std::istringstream row(line);
    detail::DirectionRow r{};
    if (!(row >> r.dim >> r.degree >> r.coeffs) || r.degree == 0 || r.degree > r.m.size())
      throw ParseError(line_offset, "malformed direction row '" + line + "'");
    for (unsigned k = 0; k < r.degree; ++k) {
      if (!(row >> r.m[k])) throw ParseError(line_offset, "missing m value in '" + line + "'");
      if (r.m[k] % 2 == 0 || r.m[k] >= (1u << (k + 1)))
        throw ParseError(line_offset, "m values must be odd and below 2^i in '" + line + "'");
    }
    if (r.dim != rows.size() + 2) throw ParseError(line_offset, "dimensions must be consecutive from 2");
    rows.push_back(r);
  }
  return rows;
}

namespace detail {

// v[k] is the k-th direction number, m_k / 2^(k+1) as a 32-bit fraction.
inline std::array<std::uint32_t, 32> direction_numbers(std::size_t dim, const DirectionTable& table) {
  std::array<std::uint32_t, 32> v{};
  if (dim == 0) {
    for (unsigned k = 0; k < 32; ++k) v[k] = std::uint32_t{1} << (31 - k);
    return v;
  }
  const auto& row = table.at(dim - 1);
  const unsigned s = row.degree;
  for (unsigned k = 0; k < 32; ++k) {
    if (k < s) {
      v[k] = row.m[k] << (31 - k);
    } else {
      std::uint32_t x = v[k - s] ^ (v[k - s] >> s);
      for (unsigned j = 1; j < s; ++j)
        if ((row.coeffs >> (s - 1 - j)) & 1u) x ^= v[k - j];
      v[k] = x;
    }
  }
  return v;
}

}  // namespace detail

/// The first n points after skipping `skip` points of the sequence. Index 0
/// is the origin, so skip = 1 starts at (0.5, ..., 0.5).
inline SampleSet sobol(std::size_t d, std::uint64_t n, std::uint64_t skip = 1,
                       const DirectionTable& table = default_direction_table()) {
  if (d < 1 || d > kSobolMaxDimension || d > table.size() + 1)
    throw Error(Errc::DimensionUnsupported, "dimension " + std::to_string(d) + " (supported: 1.." +
                                                std::to_string(std::min<std::size_t>(kSobolMaxDimension, table.size() + 1)) +
                                                ")");
  if (n < 1) throw Error(Errc::InvalidSpec, "need at least one point");
  if (skip >= kSobolIndexLimit || n > kSobolIndexLimit - skip)
    throw Error(Errc::IndexOverflow, "points beyond index 2^32 requested");

  std::vector<std::array<std::uint32_t, 32>> v(d);
  for (std::size_t j = 0; j < d; ++j) v[j] = detail::direction_numbers(j, table);

  // State at index `skip` from its Gray code.
  std::vector<std::uint32_t> x(d, 0);
  const std::uint64_t gray = skip ^ (skip >> 1);
  for (unsigned b = 0; b < 32; ++b)
    if ((gray >> b) & 1u)
      for (std::size_t j = 0; j < d; ++j) x[j] ^= v[j][b];

  SampleSet out;
  out.dimension = d;
  out.skip = skip;
  out.points.reserve(static_cast<std::size_t>(n));
  constexpr double kScale = 1.0 / 4294967296.0;
  for (std::uint64_t i = skip;; ++i) {
    std::vector<double> p(d);
    for (std::size_t j = 0; j < d; ++j) p[j] = static_cast<double>(x[j]) * kScale;
    out.points.push_back(std::move(p));
    if (out.points.size() == n) break;
    // Moving from index i to i+1 flips the bit at the lowest zero of i.
    unsigned c = 0;
    while ((i >> c) & 1u) ++c;
    for (std::size_t j = 0; j < d; ++j) x[j] ^= v[j][c];
  }
  return out;
}

/// x <- lo + x*(hi-lo) per axis.
inline SampleSet scale(const SampleSet& samples, const Box& bounds) {
  if (bounds.size() != samples.dimension)
    throw Error(Errc::BoundsMismatch, "bounds have " + std::to_string(bounds.size()) + " axes, samples have " +
                                          std::to_string(samples.dimension));
  check_box(bounds);
  SampleSet out = samples;
  for (auto& p : out.points)
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = bounds[j].lo + p[j] * bounds[j].width();
  out.scaled_to = bounds;
  return out;
}

/// Inverse of scale().
inline SampleSet unscale(const SampleSet& samples) {
  if (!samples.scaled_to) return samples;
  const Box& bounds = *samples.scaled_to;
  SampleSet out = samples;
  for (auto& p : out.points)
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = (p[j] - bounds[j].lo) / bounds[j].width();
  out.scaled_to.reset();
  return out;
}

}  // namespace rdesign
