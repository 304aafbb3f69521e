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

/// Sampling regions on regular grids and extracting their zero level set.
///
/// Grid node i on an axis sits at lo + i*(hi-lo)/(n-1). Field values are
/// stored with the first axis fastest: index = ix + nx*(iy + ny*iz).

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rdesign/box.hpp"
#include "rdesign/detail/parallel.hpp"
#include "rdesign/error.hpp"
#include "rdesign/format.hpp"
#include "rdesign/region.hpp"

namespace rdesign {

struct ScalarField {
  Box bounds;
  std::vector<std::size_t> resolution;
  std::vector<double> values;
  std::vector<std::string> names;

  std::size_t dimension() const noexcept { return resolution.size(); }

  double node(std::size_t axis, std::size_t i) const {
    const auto& b = bounds[axis];
    const std::size_t n = resolution[axis];
    if (i + 1 == n) return b.hi;
    return b.lo + static_cast<double>(i) * (b.hi - b.lo) / static_cast<double>(n - 1);
  }

  double spacing(std::size_t axis) const {
    return (bounds[axis].hi - bounds[axis].lo) / static_cast<double>(resolution[axis] - 1);
  }

  double at(std::size_t ix, std::size_t iy) const { return values[ix + resolution[0] * iy]; }
  double at(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return values[ix + resolution[0] * (iy + resolution[1] * iz)];
  }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Polyline {
  std::vector<Point2> points;
  bool closed = false;
};

/// Zero level set as a list of polylines.
struct ContourSet {
  std::vector<Polyline> polylines;
  double iso = 0.0;

  bool empty() const noexcept { return polylines.empty(); }
};

namespace detail {

inline void check_field_shape(const Box& bounds, const std::vector<std::size_t>& resolution) {
  if (bounds.size() != resolution.size())
    throw Error(Errc::DimensionMismatch, "bounds and resolution differ in dimension");
  check_box(bounds);
  for (auto n : resolution)
    if (n < 2) throw Error(Errc::InvalidSpec, "grid resolution must be at least 2 per axis");
}

}  // namespace detail

/// Samples `region` at every grid node. Rows are evaluated concurrently;
/// the result does not depend on the thread count.
inline ScalarField grid_eval(const Region& region, const Box& bounds, const std::vector<std::size_t>& resolution) {
  const std::size_t dim = region.dimension();
  if (dim != bounds.size() || (dim != 2 && dim != 3))
    throw Error(Errc::DimensionMismatch, "region has " + std::to_string(dim) + " variables, grid has " +
                                             std::to_string(bounds.size()) + " axes (2 or 3 supported)");
  detail::check_field_shape(bounds, resolution);
  ScalarField f{bounds, resolution, {}, region.names()};
  std::size_t total = 1;
  for (auto n : resolution) total *= n;
  f.values.assign(total, 0.0);
  const std::size_t nx = resolution[0];
  const std::size_t rows = total / nx;
  detail::parallel_for(rows, [&](std::size_t row) {
    std::array<double, 3> p{};
    const std::size_t iy = row % resolution[1];
    p[1] = f.node(1, iy);
    if (dim == 3) p[2] = f.node(2, row / resolution[1]);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      p[0] = f.node(0, ix);
      f.values[row * nx + ix] = region(std::span<const double>(p.data(), dim));
    }
  });
  return f;
}

inline ScalarField grid_eval(const Region& region, const Box& bounds, std::size_t n_per_axis) {
  return grid_eval(region, bounds, std::vector<std::size_t>(bounds.size(), n_per_axis));
}

/// Fraction of nodes with value >= 0.
inline double inside_fraction(const ScalarField& f) {
  std::size_t inside = 0;
  for (double v : f.values) inside += v >= 0.0 ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(f.values.size());
}

/// Marching squares on a 2D field with linear interpolation along cell
/// edges. A node value of exactly 0 counts as inside. Saddle cells are
/// resolved by the sign of the mean of their four corners.
inline ContourSet marching_squares(const ScalarField& f) {
  if (f.dimension() != 2) throw Error(Errc::DimensionMismatch, "marching squares needs a 2D field");
  const std::size_t nx = f.resolution[0];
  const std::size_t ny = f.resolution[1];

  // Edge ids: horizontal edge from node (i,j) to (i+1,j) is 2*(j*nx+i),
  // vertical edge from (i,j) to (i,j+1) is 2*(j*nx+i)+1.
  auto h_edge = [nx](std::size_t i, std::size_t j) { return 2 * (j * nx + i); };
  auto v_edge = [nx](std::size_t i, std::size_t j) { return 2 * (j * nx + i) + 1; };

  auto crossing = [&](std::size_t edge) {
    const std::size_t base = edge / 2;
    const std::size_t i = base % nx;
    const std::size_t j = base / nx;
    const bool vertical = edge % 2 == 1;
    const std::size_t i2 = vertical ? i : i + 1;
    const std::size_t j2 = vertical ? j + 1 : j;
    const double a = f.at(i, j);
    const double b = f.at(i2, j2);
    const double t = a / (a - b);
    const double x0 = f.node(0, i), y0 = f.node(1, j);
    const double x1 = f.node(0, i2), y1 = f.node(1, j2);
    return Point2{x0 + t * (x1 - x0), y0 + t * (y1 - y0)};
  };

  std::vector<std::array<std::size_t, 2>> segments;
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const double v00 = f.at(i, j), v10 = f.at(i + 1, j), v11 = f.at(i + 1, j + 1), v01 = f.at(i, j + 1);
      const unsigned code = (v00 >= 0.0 ? 1u : 0u) | (v10 >= 0.0 ? 2u : 0u) | (v11 >= 0.0 ? 4u : 0u) |
                            (v01 >= 0.0 ? 8u : 0u);
      if (code == 0 || code == 15) continue;
      const std::size_t bottom = h_edge(i, j), top = h_edge(i, j + 1);
      const std::size_t left = v_edge(i, j), right = v_edge(i + 1, j);
      if (code == 5 || code == 10) {
        const bool center_inside = 0.25 * (v00 + v10 + v11 + v01) >= 0.0;
        // Corners 00 and 11 share the sign in code 5, corners 10 and 01 in 10.
        const bool cut_00_and_11 = (code == 5) != center_inside;
        if (cut_00_and_11) {
          segments.push_back({bottom, left});
          segments.push_back({right, top});
        } else {
          segments.push_back({bottom, right});
          segments.push_back({top, left});
        }
        continue;
      }
      std::array<std::size_t, 2> seg{};
      std::size_t k = 0;
      const bool b0 = code & 1u, b1 = code & 2u, b2 = code & 4u, b3 = code & 8u;
      if (b0 != b1) seg[k++] = bottom;
      if (b1 != b2) seg[k++] = right;
      if (b3 != b2) seg[k++] = top;
      if (b0 != b3) seg[k++] = left;
      segments.push_back(seg);
    }
  }

  // Chain segments through shared edges. Every edge is used by at most the
  // two cells on either side of it.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::array<std::size_t, 2>> users(2 * nx * ny, {kNone, kNone});
  for (std::size_t s = 0; s < segments.size(); ++s)
    for (std::size_t e : segments[s]) (users[e][0] == kNone ? users[e][0] : users[e][1]) = s;

  std::vector<bool> used(segments.size(), false);
  ContourSet out;
  auto walk = [&](std::size_t start_seg, std::size_t start_edge, bool closed) {
    Polyline line;
    line.closed = closed;
    line.points.push_back(crossing(start_edge));
    std::size_t seg = start_seg;
    std::size_t edge = start_edge;
    while (seg != kNone && !used[seg]) {
      used[seg] = true;
      const std::size_t next_edge = segments[seg][0] == edge ? segments[seg][1] : segments[seg][0];
      if (closed && next_edge == start_edge) break;
      line.points.push_back(crossing(next_edge));
      const auto& u = users[next_edge];
      seg = u[0] == seg ? u[1] : u[0];
      edge = next_edge;
    }
    out.polylines.push_back(std::move(line));
  };
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (std::size_t e : segments[s]) {
      if (users[e][1] == kNone) {
        walk(s, e, false);
        break;
      }
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) walk(s, segments[s][0], true);
  return out;
}

/// Field of a 3D region on the plane where its last variable equals `z`.
inline ScalarField slice_field(const Region& region, const Box& xy_bounds, const std::vector<std::size_t>& resolution,
                               double z) {
  if (region.dimension() != 3) throw Error(Errc::DimensionMismatch, "slicing needs a 3D region");
  if (xy_bounds.size() != 2) throw Error(Errc::DimensionMismatch, "slice bounds must be 2D");
  detail::check_field_shape(xy_bounds, resolution);
  ScalarField f{xy_bounds, resolution, {}, {region.names()[0], region.names()[1]}};
  f.values.assign(resolution[0] * resolution[1], 0.0);
  detail::parallel_for(resolution[1], [&](std::size_t iy) {
    std::array<double, 3> p{0.0, f.node(1, iy), z};
    for (std::size_t ix = 0; ix < resolution[0]; ++ix) {
      p[0] = f.node(0, ix);
      f.values[iy * resolution[0] + ix] = region(p);
    }
  });
  return f;
}

struct Slice {
  double z = 0.0;
  ContourSet contours;
};

/// Slice levels are lo + k*(hi-lo)/(n-1) along the third axis; a single
/// slice sits at the middle.
inline std::vector<double> slice_levels(const Interval& axis, std::size_t n_slices) {
  if (n_slices < 1) throw Error(Errc::InvalidSpec, "need at least one slice");
  if (n_slices == 1) return {0.5 * (axis.lo + axis.hi)};
  std::vector<double> z(n_slices);
  for (std::size_t k = 0; k < n_slices; ++k)
    z[k] = k + 1 == n_slices ? axis.hi
                             : axis.lo + static_cast<double>(k) * axis.width() / static_cast<double>(n_slices - 1);
  return z;
}

inline std::vector<Slice> slice_contours_3d(const Region& region, const Box& bounds,
                                            const std::vector<std::size_t>& resolution, std::size_t n_slices) {
  if (region.dimension() != 3 || bounds.size() != 3)
    throw Error(Errc::DimensionMismatch, "slice contours need a 3D region and 3D bounds");
  const Box xy{bounds[0], bounds[1]};
  const std::vector<std::size_t> res{resolution.at(0), resolution.at(1)};
  std::vector<Slice> out;
  for (double z : slice_levels(bounds[2], n_slices)) out.push_back({z, marching_squares(slice_field(region, xy, res, z))});
  return out;
}

// ---------------------------------------------------------------------------
// Output

struct SvgLayer {
  ContourSet contours;
  std::string stroke = "#d62728";
  std::string label;
};

struct SvgStyle {
  int width = 800;
  int height = 800;
  int margin = 60;
  std::string title;
  std::string header_comment;
  std::string x_label = "x";
  std::string y_label = "y";
  std::string shade = "#1f77b4";
  double stroke_width = 1.5;
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// "--" is not allowed inside XML comments.
inline std::string comment_safe(std::string_view s) {
  std::string out(s);
  for (std::size_t p = out.find("--"); p != std::string::npos; p = out.find("--", p)) out.replace(p, 2, "- -");
  return out;
}

}  // namespace detail

/// SVG 1.1 document: frame, axis labels, one <path> per polyline and, when
/// `field` is given, the nodes with value >= 0 shaded as row runs of <rect>.
inline std::string svg_document(const Box& bounds, const std::vector<SvgLayer>& layers, const SvgStyle& style = {},
                                const ScalarField* field = nullptr) {
  if (bounds.size() != 2) throw Error(Errc::DimensionMismatch, "SVG output needs 2D bounds");
  check_box(bounds);
  const double w = style.width - 2.0 * style.margin;
  const double h = style.height - 2.0 * style.margin;
  auto px = [&](double x) { return style.margin + (x - bounds[0].lo) / bounds[0].width() * w; };
  auto py = [&](double y) { return style.height - style.margin - (y - bounds[1].lo) / bounds[1].width() * h; };
  using rdesign::format_fixed;

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!style.header_comment.empty()) s << "<!-- " << detail::comment_safe(style.header_comment) << " -->\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width << "\" height=\""
    << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height << "\" fill=\"white\"/>\n";

  if (field != nullptr) {
    if (field->dimension() != 2) throw Error(Errc::DimensionMismatch, "shading field must be 2D");
    const std::size_t nx = field->resolution[0], ny = field->resolution[1];
    const double hx = 0.5 * field->spacing(0), hy = 0.5 * field->spacing(1);
    auto clamp_x = [&](double x) { return std::clamp(x, bounds[0].lo, bounds[0].hi); };
    auto clamp_y = [&](double y) { return std::clamp(y, bounds[1].lo, bounds[1].hi); };
    s << "<g fill=\"" << style.shade << "\" fill-opacity=\"0.25\" stroke=\"none\">\n";
    for (std::size_t j = 0; j < ny; ++j) {
      std::size_t i = 0;
      while (i < nx) {
        if (field->at(i, j) < 0.0) {
          ++i;
          continue;
        }
        std::size_t k = i;
        while (k + 1 < nx && field->at(k + 1, j) >= 0.0) ++k;
        const double x0 = px(clamp_x(field->node(0, i) - hx)), x1 = px(clamp_x(field->node(0, k) + hx));
        const double y0 = py(clamp_y(field->node(1, j) + hy)), y1 = py(clamp_y(field->node(1, j) - hy));
        s << "<rect x=\"" << format_fixed(x0) << "\" y=\"" << format_fixed(y0) << "\" width=\""
          << format_fixed(x1 - x0) << "\" height=\"" << format_fixed(y1 - y0) << "\"/>\n";
        i = k + 1;
      }
    }
    s << "</g>\n";
  }

  // Frame and axis annotations.
  s << "<rect x=\"" << style.margin << "\" y=\"" << style.margin << "\" width=\"" << format_fixed(w)
    << "\" height=\"" << format_fixed(h) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  s << "<g font-family=\"sans-serif\" font-size=\"14\" fill=\"black\">\n";
  const double bottom = style.height - style.margin;
  s << "<text x=\"" << style.margin << "\" y=\"" << format_fixed(bottom + 20) << "\" text-anchor=\"middle\">"
    << format_real(bounds[0].lo) << "</text>\n";
  s << "<text x=\"" << format_fixed(style.width - style.margin) << "\" y=\"" << format_fixed(bottom + 20)
    << "\" text-anchor=\"middle\">" << format_real(bounds[0].hi) << "</text>\n";
  s << "<text x=\"" << format_fixed(style.margin - 6) << "\" y=\"" << format_fixed(bottom + 5)
    << "\" text-anchor=\"end\">" << format_real(bounds[1].lo) << "</text>\n";
  s << "<text x=\"" << format_fixed(style.margin - 6) << "\" y=\"" << format_fixed(style.margin + 5)
    << "\" text-anchor=\"end\">" << format_real(bounds[1].hi) << "</text>\n";
  s << "<text x=\"" << format_fixed(style.width / 2.0) << "\" y=\"" << format_fixed(bottom + 40)
    << "\" text-anchor=\"middle\">" << detail::xml_escape(style.x_label) << "</text>\n";
  s << "<text x=\"" << format_fixed(style.margin - 30) << "\" y=\"" << format_fixed(style.height / 2.0)
    << "\" text-anchor=\"middle\">" << detail::xml_escape(style.y_label) << "</text>\n";
  if (!style.title.empty())
    s << "<text x=\"" << format_fixed(style.width / 2.0) << "\" y=\"" << format_fixed(style.margin - 20)
      << "\" text-anchor=\"middle\">" << detail::xml_escape(style.title) << "</text>\n";
  double legend_y = style.margin + 18;
  for (const auto& layer : layers) {
    if (layer.label.empty()) continue;
    s << "<text x=\"" << format_fixed(style.width - style.margin - 8) << "\" y=\"" << format_fixed(legend_y)
      << "\" text-anchor=\"end\" fill=\"" << layer.stroke << "\">" << detail::xml_escape(layer.label) << "</text>\n";
    legend_y += 18;
  }
  s << "</g>\n";

  for (const auto& layer : layers) {
    s << "<g fill=\"none\" stroke=\"" << layer.stroke << "\" stroke-width=\"" << format_fixed(style.stroke_width, 2)
      << "\">\n";
    for (const auto& line : layer.contours.polylines) {
      s << "<path d=\"";
      for (std::size_t k = 0; k < line.points.size(); ++k) {
        s << (k == 0 ? "M" : " L") << format_fixed(px(line.points[k].x)) << ',' << format_fixed(py(line.points[k].y));
      }
      if (line.closed) s << " Z";
      s << "\"/>\n";
    }
    s << "</g>\n";
  }
  s << "</svg>\n";
  return s.str();
}

/// One row per node: coordinates then value, full round-trip precision.
inline std::string field_csv(const ScalarField& f, const std::string& header_comment = {}) {
  std::string out;
  if (!header_comment.empty()) out += "# " + header_comment + "\n";
  for (const auto& n : f.names) out += n + ",";
  out += "value\n";
  const std::size_t dim = f.dimension();
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    std::size_t rest = idx;
    for (std::size_t a = 0; a < dim; ++a) {
      out += format_real(f.node(a, rest % f.resolution[a]));
      out += ',';
      rest /= f.resolution[a];
    }
    out += format_real(f.values[idx]);
    out += '\n';
  }
  return out;
}

inline std::string contours_csv(const ContourSet& c, const std::string& header_comment = {}) {
  std::string out;
  if (!header_comment.empty()) out += "# " + header_comment + "\n";
  out += "polyline,closed,x,y\n";
  for (std::size_t k = 0; k < c.polylines.size(); ++k) {
    for (const auto& p : c.polylines[k].points) {
      out += std::to_string(k) + ',' + (c.polylines[k].closed ? "1" : "0") + ',' + format_real(p.x) + ',' +
             format_real(p.y) + '\n';
    }
  }
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads CSV written by field_csv/contours_csv; lines starting with '#'
/// are comments.
inline CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const std::size_t line_start = pos;
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> cells;
    std::size_t c = 0;
    for (;;) {
      const std::size_t comma = line.find(',', c);
      cells.push_back(line.substr(c, comma == std::string_view::npos ? std::string_view::npos : comma - c));
      if (comma == std::string_view::npos) break;
      c = comma + 1;
    }
    if (t.header.empty()) {
      for (auto cell : cells) t.header.emplace_back(cell);
      continue;
    }
    if (cells.size() != t.header.size())
      throw ParseError(line_start, "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                       " cells, header has " + std::to_string(t.header.size()));
    std::vector<double> row;
    for (auto cell : cells) {
      auto v = parse_real(cell);
      if (!v) throw ParseError(line_start, "line " + std::to_string(line_no) + ": not a number '" + std::string(cell) + "'");
      row.push_back(*v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw Error(Errc::IoError, "failed writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace rdesign
