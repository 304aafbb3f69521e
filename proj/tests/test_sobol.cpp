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

#include <fstream>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "rdesign/sobol.hpp"

using namespace rdesign;

namespace {

std::string direction_file() { return oracle::slurp(std::string(RDESIGN_DATA_DIR) + "/sobol_directions.txt"); }

// Point i of the sequence built straight from the bundled file: parse the
// rows, run the direction-number recurrence, XOR the numbers selected by
// the Gray code of i.
std::vector<double> reference_point(std::uint64_t i, std::size_t d) {
  std::istringstream in(direction_file());
  std::string line;
  std::vector<std::vector<std::uint64_t>> dirs;
  std::vector<std::uint64_t> first(32);
  for (int k = 0; k < 32; ++k) first[k] = std::uint64_t{1} << (31 - k);
  dirs.push_back(first);
  while (std::getline(in, line) && dirs.size() < d) {
    if (line.empty() || line[0] == '#' || line[0] == 'd') continue;
    std::istringstream row(line);
    unsigned dim, s, a;
    row >> dim >> s >> a;
    std::vector<std::uint64_t> m(s);
    for (auto& mi : m) row >> mi;
    std::vector<std::uint64_t> v(32);
    for (unsigned k = 0; k < 32; ++k) {
      if (k < s) {
        v[k] = m[k] << (31 - k);
        continue;
      }
      std::uint64_t x = v[k - s] ^ (v[k - s] >> s);
      for (unsigned j = 1; j < s; ++j)
        if ((a >> (s - 1 - j)) & 1u) x ^= v[k - j];
      v[k] = x;
    }
    dirs.push_back(v);
  }
  const std::uint64_t g = i ^ (i >> 1);
  std::vector<double> p(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::uint64_t x = 0;
    for (int b = 0; b < 32; ++b)
      if ((g >> b) & 1u) x ^= dirs[j][static_cast<std::size_t>(b)];
    p[j] = static_cast<double>(x) / 4294967296.0;
  }
  return p;
}

}  // namespace

TEST(Sobol, TwoDimensionalStart) {
  const SampleSet s = sobol(2, 3);
  ASSERT_EQ(s.points.size(), 3u);
  EXPECT_EQ(s.points[0], (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(s.points[1], (std::vector<double>{0.75, 0.25}));
  EXPECT_EQ(s.points[2], (std::vector<double>{0.25, 0.75}));
}

TEST(Sobol, OneDimensionGrayCodeVanDerCorput) {
  const SampleSet s = sobol(1, 4);
  std::vector<double> xs;
  for (const auto& p : s.points) xs.push_back(p[0]);
  EXPECT_EQ(xs, (std::vector<double>{0.5, 0.75, 0.25, 0.375}));
  // The first 2^k points are the radical-inverse values of 1..2^k-1 plus
  // one more, as a set.
  const SampleSet big = sobol(1, 7);
  std::set<double> got, want;
  for (const auto& p : big.points) got.insert(p[0]);
  for (unsigned i = 1; i < 8; ++i) {
    double r = 0.0, f = 0.5;
    for (unsigned k = i; k; k >>= 1, f *= 0.5) r += (k & 1u) * f;
    want.insert(r);
  }
  EXPECT_EQ(got, want);
}

TEST(Sobol, SkipZeroStartsAtOrigin) {
  const SampleSet s = sobol(3, 2, 0);
  EXPECT_EQ(s.points[0], (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_EQ(s.points[1], (std::vector<double>{0.5, 0.5, 0.5}));
  EXPECT_EQ(sobol(3, 1).points[0], (std::vector<double>{0.5, 0.5, 0.5}));
}

TEST(Sobol, MatchesPublishedSixteenDimensionalPoints) {
  const SampleSet s = sobol(16, 1024, 0);
  EXPECT_EQ(s.points[100], (std::vector<double>{0.4140625, 0.2578125, 0.7734375, 0.7265625, 0.8828125, 0.7421875,
                                                0.0234375, 0.4765625, 0.6328125, 0.6953125, 0.4609375, 0.6796875,
                                                0.4765625, 0.8515625, 0.3203125, 0.4921875}));
  EXPECT_EQ(s.points[1023],
            (std::vector<double>{0.0009765625, 0.7529296875, 0.6123046875, 0.1455078125, 0.1865234375, 0.4384765625,
                                 0.1396484375, 0.6181640625, 0.3447265625, 0.8505859375, 0.6787109375, 0.0361328125,
                                 0.1298828125, 0.6650390625, 0.3623046875, 0.4638671875}));
}

TEST(SobolProperty, MatchesDirectConstructionFromFile) {
  for (std::uint64_t skip : {0ull, 1ull, 37ull, 1000ull, 65535ull}) {
    const SampleSet s = sobol(16, 64, skip);
    for (std::size_t k = 0; k < s.points.size(); k += 7) ASSERT_EQ(s.points[k], reference_point(skip + k, 16));
  }
}

TEST(SobolProperty, ElementaryIntervals) {
  for (unsigned k : {2u, 4u, 6u}) {
    const std::size_t n = std::size_t{1} << k;
    const std::size_t side = std::size_t{1} << (k / 2);
    const SampleSet s = sobol(2, n, 0);
    std::set<std::pair<std::size_t, std::size_t>> cells;
    for (const auto& p : s.points)
      cells.insert({static_cast<std::size_t>(p[0] * side), static_cast<std::size_t>(p[1] * side)});
    EXPECT_EQ(cells.size(), n) << k;
  }
}

TEST(SobolProperty, UnitIntervalAndDeterminism) {
  const SampleSet a = sobol(16, 500, 3);
  const SampleSet b = sobol(16, 500, 3);
  EXPECT_EQ(a.points, b.points);
  for (const auto& p : a.points)
    for (double v : p) ASSERT_TRUE(v >= 0.0 && v < 1.0);
}

TEST(Sobol, Errors) {
  for (std::size_t d : {std::size_t{0}, std::size_t{17}}) {
    try {
      sobol(d, 1);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::DimensionUnsupported);
    }
  }
  try {
    sobol(2, 2, (std::uint64_t{1} << 32) - 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IndexOverflow);
  }
  EXPECT_NO_THROW(sobol(2, 1, (std::uint64_t{1} << 32) - 1));
  EXPECT_THROW(sobol(2, 0), Error);
}

TEST(Scale, BoxMappingAndRoundTrip) {
  const Box box{{250.0, 300.0}, {250.0, 300.0}};
  const SampleSet s = scale(sobol(2, 1), box);
  EXPECT_EQ(s.points[0], (std::vector<double>{275.0, 275.0}));
  const SampleSet origin = scale(sobol(2, 1, 0), box);
  EXPECT_EQ(origin.points[0], (std::vector<double>{250.0, 250.0}));
  const SampleSet raw = sobol(2, 200, 5);
  const SampleSet back = unscale(scale(raw, Box{{-3.0, 7.0}, {0.001, 0.002}}));
  for (std::size_t i = 0; i < raw.points.size(); ++i)
    for (std::size_t j = 0; j < 2; ++j) ASSERT_NEAR(back.points[i][j], raw.points[i][j], 1e-15);
  try {
    scale(raw, Box{{0.0, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BoundsMismatch);
  }
  EXPECT_THROW(scale(raw, Box{{0.0, 1.0}, {2.0, 2.0}}), Error);
}

TEST(DirectionTable, BundledFileMatchesCompiledTable) {
  const std::string text = direction_file();
  EXPECT_EQ(fnv1a64(text), detail::kDirectionFileChecksum);
  const DirectionTable parsed = parse_direction_table(text);
  const DirectionTable builtin = default_direction_table();
  ASSERT_EQ(parsed.size(), builtin.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    EXPECT_EQ(parsed[i].dim, builtin[i].dim);
    EXPECT_EQ(parsed[i].degree, builtin[i].degree);
    EXPECT_EQ(parsed[i].coeffs, builtin[i].coeffs);
    EXPECT_EQ(parsed[i].m, builtin[i].m);
  }
  EXPECT_EQ(sobol(16, 50, 1, parsed).points, sobol(16, 50).points);
}

TEST(DirectionTable, MalformedRows) {
  EXPECT_THROW(parse_direction_table("2 1 0 2\n"), ParseError);
  EXPECT_THROW(parse_direction_table("3 1 0 1\n"), ParseError);
  EXPECT_THROW(parse_direction_table("2 2 0 1\n"), ParseError);
  EXPECT_NO_THROW(parse_direction_table("# c\nd s a m_i\n2 1 0 1\n"));
}
