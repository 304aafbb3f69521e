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

// rdesign: R-function demos, design-space identification for the batch
// reactor, membership checks against saved reports, and Sobol sampling.
//
// Exit codes: 0 success (check: inside), 1 I/O, integrator or fit failure,
// 2 bad arguments or malformed input, 3 check: outside, 4 check: boundary.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdesign/rdesign.hpp"

namespace fs = std::filesystem;
using namespace rdesign;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitOutside = 3;
constexpr int kExitBoundary = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::IoError:
    case Errc::IntegratorFailure:
    case Errc::ToleranceNotMet:
    case Errc::RankDeficient:
    case Errc::NegativeSqrtArgument: return kExitFailure;
    default: return kExitUsage;
  }
}

// ---------------------------------------------------------------------------
// Config file: "key = value" lines, '#' comments.

struct RunConfig {
  reactor::KineticParams params;
  Box box = reactor::default_box();
  IntegratorOptions integrator = reactor::default_integrator_options();
  double purity_min = reactor::kPurityThreshold;
  double profit_min = reactor::kProfitThreshold;
  std::size_t n = 64;
  double alpha = 1.0;
  std::size_t grid = 201;
  std::uint64_t skip = 1;
  std::size_t verify_grid = 0;
};

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  std::istringstream in(text);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_config(RunConfig& rc, const std::map<std::string, std::string>& kv, const std::string& path) {
  auto real = [&](const std::string& key, const std::string& text) {
    auto v = parse_real(text);
    if (!v) throw UsageError(path + ": '" + key + "' is not a number");
    return *v;
  };
  auto count = [&](const std::string& key, const std::string& text) {
    const double v = real(key, text);
    if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v)))
      throw UsageError(path + ": '" + key + "' must be a non-negative integer");
    return static_cast<std::uint64_t>(v);
  };
  const std::map<std::string, double*> reals{
      {"E1", &rc.params.E1},         {"E2", &rc.params.E2},           {"k1_0", &rc.params.k1_0},
      {"k2_0", &rc.params.k2_0},     {"R", &rc.params.R},             {"CA0", &rc.params.CA0},
      {"V", &rc.params.V},           {"T_min", &rc.box[0].lo},        {"T_max", &rc.box[0].hi},
      {"t_min", &rc.box[1].lo},      {"t_max", &rc.box[1].hi},        {"tol_rel", &rc.integrator.rtol},
      {"tol_abs", &rc.integrator.atol}, {"purity_min", &rc.purity_min}, {"profit_min", &rc.profit_min},
      {"alpha", &rc.alpha}};
  for (const auto& [key, text] : kv) {
    if (auto it = reals.find(key); it != reals.end()) {
      *it->second = real(key, text);
    } else if (key == "n") {
      rc.n = count(key, text);
    } else if (key == "grid") {
      rc.grid = count(key, text);
    } else if (key == "skip") {
      rc.skip = count(key, text);
    } else if (key == "verify_grid") {
      rc.verify_grid = count(key, text);
    } else {
      throw UsageError(path + ": unknown key '" + key + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// Output helpers

std::string g_invocation;

std::string provenance() { return "rdesign " + std::string(kVersion) + " | " + g_invocation; }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(Errc::IoError, "cannot create output directory '" + dir.string() + "'");
}

void write_out(const fs::path& dir, const std::string& name, const std::string& content) {
  write_text_file((dir / name).string(), content);
  std::cout << "wrote " << (dir / name).string() << "\n";
}

const char* const kPalette[] = {"#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};

// ---------------------------------------------------------------------------
// demo

struct DemoArgs {
  std::string name;
  std::size_t grid = 0;
  std::size_t slices = 1;
  std::optional<double> alpha;
  std::string out = ".";
};

int cmd_demo(const DemoArgs& a) {
  geometry::TestCase spec = geometry::testcase_spec(a.name);
  if (a.alpha) spec.alpha = *a.alpha;
  rdesign::detail::check_alpha(spec.alpha);
  const std::size_t dim = spec.bounds.size();
  const std::size_t grid = a.grid != 0 ? a.grid : (dim == 2 ? 256 : 64);
  if (grid < 2) throw UsageError("--grid must be at least 2");
  if (a.slices < 1) throw UsageError("--slices must be at least 1");
  const fs::path out(a.out);
  ensure_dir(out);

  std::string expr_file = "# " + provenance() + "\n";
  expr_file += "name = " + spec.name + "\n";
  expr_file += "alpha = " + format_real(spec.alpha) + "\n";
  std::string vars;
  for (const auto& v : spec.primitives.front().names()) vars += (vars.empty() ? "" : ",") + v;
  expr_file += "variables = " + vars + "\n";
  for (std::size_t i = 0; i < spec.primitives.size(); ++i)
    expr_file += "primitive" + std::to_string(i + 1) + " = " + to_infix(spec.primitives[i].expr()) + "\n";

  const Box xy{spec.bounds[0], spec.bounds[1]};
  for (const auto& [label, tree] : spec.compositions) {
    const Region r = compose(tree, spec.alpha, spec.name + ":" + label);
    expr_file += label + ".infix = " + to_infix(r.expr(), InfixStyle::Compact) + "\n";
    expr_file += label + ".sqrt = " + to_infix(r.expr(), InfixStyle::Expanded) + "\n";
    if (spec.alpha == 1.0) expr_file += label + ".abs = " + to_infix(r.expr(), InfixStyle::Abs) + "\n";
    expr_file += label + ".tree = " + serialize(r.expr(), TextFormat::Tree) + "\n";

    SvgStyle style;
    style.header_comment = provenance();
    const std::string stem = spec.name + "_" + label;
    if (dim == 2) {
      const ScalarField f = grid_eval(r, spec.bounds, grid);
      std::vector<SvgLayer> layers;
      for (std::size_t i = 0; i < spec.primitives.size(); ++i)
        layers.push_back({marching_squares(grid_eval(spec.primitives[i], spec.bounds, grid)), "#999999",
                          "phi" + std::to_string(i + 1) + " = 0"});
      layers.push_back({marching_squares(f), kPalette[0], label + " = 0"});
      style.title = spec.name + " " + label;
      write_out(out, stem + ".svg", svg_document(spec.bounds, layers, style, &f));
      write_out(out, stem + "_field.csv", field_csv(f, provenance()));
    } else {
      const std::vector<std::size_t> res{grid, grid};
      const auto levels = slice_levels(spec.bounds[2], a.slices);
      std::string csv = "# " + provenance() + "\nx,y,z,value\n";
      for (std::size_t k = 0; k < levels.size(); ++k) {
        const ScalarField f = slice_field(r, xy, res, levels[k]);
        style.title = spec.name + " " + label + " at z = " + format_real(levels[k]);
        char idx[16];
        std::snprintf(idx, sizeof(idx), "%02zu", k);
        write_out(out, stem + "_z" + idx + ".svg",
                  svg_document(xy, {{marching_squares(f), kPalette[0], label + " = 0"}}, style, &f));
        for (std::size_t n = 0; n < f.values.size(); ++n)
          csv += format_real(f.node(0, n % grid)) + "," + format_real(f.node(1, n / grid)) + "," +
                 format_real(levels[k]) + "," + format_real(f.values[n]) + "\n";
      }
      write_out(out, stem + "_field.csv", csv);
    }
  }
  write_out(out, spec.name + "_expressions.txt", expr_file);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// identify

int cmd_identify(const RunConfig& rc, const std::string& outdir) {
  if (rc.n < 5) throw UsageError("--n must be at least 5 (size of the metamodel basis)");
  if (rc.grid < 2) throw UsageError("--grid must be at least 2");
  rdesign::detail::check_alpha(rc.alpha);
  check_box(rc.box);
  rc.params.validate();
  ds::IdentifyOptions opt;
  opt.n_samples = rc.n;
  opt.skip = rc.skip;
  opt.alpha = rc.alpha;
  opt.basis = reactor_basis();
  opt.contour_resolution = rc.grid;
  const ds::Model model = ds::reactor_model(rc.params, rc.integrator);
  const auto constraints = ds::reactor_constraints(rc.purity_min, rc.profit_min);
  const fs::path out(outdir);
  ensure_dir(out);

  const ds::DSReport rep = ds::identify(model, constraints, rc.box, opt);

  std::vector<std::string> files;
  for (const auto& c : rep.constraints) {
    const std::string f = "contour_" + c.spec.name + ".csv";
    write_out(out, f, contours_csv(c.contour, provenance()));
    files.push_back(f);
  }
  write_out(out, "contour_joint.csv", contours_csv(rep.joint_contour, provenance()));
  files.push_back("contour_joint.csv");
  write_out(out, "ds_report.json", ds::save_report(rep, provenance(), files));

  SvgStyle style;
  style.header_comment = provenance();
  style.x_label = "T [K]";
  style.y_label = "t [min]";
  std::vector<SvgLayer> layers;
  for (std::size_t i = 0; i < rep.constraints.size(); ++i) {
    const auto& c = rep.constraints[i];
    layers.push_back({c.contour, kPalette[i % 6],
                      c.spec.name + " = " + format_real(c.spec.threshold) + (c.contour.empty() ? " (no crossing)" : "")});
  }
  style.title = "constraint boundaries";
  write_out(out, "constraints.svg", svg_document(rep.box, layers, style));
  const ScalarField joint = grid_eval(rep.joint, rep.box, rc.grid);
  style.title = "joint design space";
  write_out(out, "joint_ds.svg",
            svg_document(rep.box, {{rep.joint_contour, "#000000", rep.joint_contour.empty() ? "" : "joint = 0"}},
                         style, &joint));

  for (const auto& c : rep.constraints)
    std::cout << c.spec.name << ": R2 train " << format_fixed(c.fit.r_squared, 6) << ", validation "
              << format_fixed(c.validation_r_squared, 6) << ", max residual " << format_real(c.fit.residual_max_abs)
              << "\n";
  std::cout << "validation agreement " << rep.validation.agree << "/" << rep.validation.points << "\n";
  std::size_t inside = 0;
  for (double v : joint.values) inside += v >= 0.0 ? 1 : 0;
  std::cout << "design space covers " << inside << "/" << joint.values.size() << " grid nodes\n";
  if (rc.verify_grid > 0) {
    const auto g = ds::grid_agreement(rep, model, constraints, rc.verify_grid);
    std::cout << "grid agreement " << g.agree << "/" << g.points << " (" << g.unexplained
              << " outside the residual band)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const std::string& report_path, const std::vector<std::string>& coords) {
  std::string text;
  try {
    text = read_text_file(report_path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const ds::DSReport rep = ds::load_report(text);
  if (coords.size() != rep.variables.size())
    throw UsageError("expected " + std::to_string(rep.variables.size()) + " coordinates, got " +
                     std::to_string(coords.size()));
  std::vector<double> u;
  for (const auto& c : coords) {
    auto v = parse_real(c);
    if (!v || !std::isfinite(*v)) throw UsageError("not a number: '" + c + "'");
    u.push_back(*v);
  }
  const Membership m = ds::membership(rep, u);
  std::cout << to_string(m) << " " << format_real(rep.joint(u)) << "\n";
  switch (m) {
    case Membership::Inside: return kExitOk;
    case Membership::Outside: return kExitOutside;
    case Membership::Boundary: return kExitBoundary;
  }
  return kExitFailure;
}

// ---------------------------------------------------------------------------
// sobol

int cmd_sobol(long long d, long long n, long long skip) {
  if (d < 1 || d > static_cast<long long>(kSobolMaxDimension)) throw UsageError("d must be in 1..16");
  if (n < 1) throw UsageError("n must be at least 1");
  if (skip < 0) throw UsageError("--skip must be non-negative");
  const SampleSet s = sobol(static_cast<std::size_t>(d), static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(skip));
  std::string out;
  for (const auto& p : s.points) {
    for (std::size_t j = 0; j < p.size(); ++j) out += (j ? "," : "") + format_real(p[j]);
    out += '\n';
  }
  std::cout << out;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  g_invocation = "rdesign";
  for (int i = 1; i < argc; ++i) g_invocation += std::string(" ") + argv[i];

  CLI::App app{"R-function regions and analytical design-space identification"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo", "Compose a reference scene and write SVG, CSV and expressions");
  demo_cmd->add_option("name", demo.name, "circles-4.1 | parabolas-4.2 | slabs-A1 | paraboloid-cylinders-A2")
      ->required();
  demo_cmd->add_option("--grid", demo.grid, "Nodes per axis (default 256 in 2D, 64 in 3D)");
  demo_cmd->add_option("--slices", demo.slices, "z slices for 3D scenes (default 1, the middle)");
  demo_cmd->add_option("--alpha", demo.alpha, "R-function parameter, -1 < alpha <= 1 (default 1)");
  demo_cmd->add_option("--out", demo.out, "Output directory (default .)");

  RunConfig rc;
  std::string id_out = ".", config_path;
  auto* id_cmd = app.add_subcommand("identify", "Identify the reactor design space from Sobol model runs");
  auto* o_n = id_cmd->add_option("--n", rc.n, "Training runs (default 64, at least 5)");
  auto* o_alpha = id_cmd->add_option("--alpha", rc.alpha, "R-conjunction parameter (default 1)");
  auto* o_grid = id_cmd->add_option("--grid", rc.grid, "Contour grid nodes per axis (default 201)");
  auto* o_skip = id_cmd->add_option("--skip", rc.skip, "Sobol points skipped before training (default 1)");
  auto* o_rtol = id_cmd->add_option("--tol-rel", rc.integrator.rtol, "Integrator relative tolerance (default 1e-8)");
  auto* o_atol = id_cmd->add_option("--tol-abs", rc.integrator.atol, "Integrator absolute tolerance (default 1e-10)");
  auto* o_verify = id_cmd->add_option("--verify-grid", rc.verify_grid,
                                      "Also compare with direct simulation on an N x N grid (default off)");
  id_cmd->add_option("--out", id_out, "Output directory (default .)");
  id_cmd->add_option("--config", config_path, "key = value file; flags given on the command line take precedence");

  std::string report_path;
  std::vector<std::string> coords;
  auto* check_cmd = app.add_subcommand("check", "Classify a point against a saved design-space report");
  check_cmd->add_option("report", report_path, "ds_report.json written by identify")->required();
  check_cmd->add_option("point", coords, "Coordinates in report variable order")->required();
  check_cmd->positionals_at_end();

  long long sd = 0, sn = 0, sskip = 1;
  auto* sobol_cmd = app.add_subcommand("sobol", "Print Sobol points in [0,1)^d as CSV");
  sobol_cmd->add_option("d", sd, "Dimension, 1..16")->required();
  sobol_cmd->add_option("n", sn, "Number of points")->required();
  sobol_cmd->add_option("--skip", sskip, "Points skipped from the start (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*demo_cmd) return cmd_demo(demo);
    if (*id_cmd) {
      if (!config_path.empty()) {
        // Flags override the file, so remember what the command line set.
        const RunConfig flags = rc;
        RunConfig merged;
        apply_config(merged, read_key_values(config_path), config_path);
        if (o_n->count()) merged.n = flags.n;
        if (o_alpha->count()) merged.alpha = flags.alpha;
        if (o_grid->count()) merged.grid = flags.grid;
        if (o_skip->count()) merged.skip = flags.skip;
        if (o_rtol->count()) merged.integrator.rtol = flags.integrator.rtol;
        if (o_atol->count()) merged.integrator.atol = flags.integrator.atol;
        if (o_verify->count()) merged.verify_grid = flags.verify_grid;
        rc = merged;
      }
      return cmd_identify(rc, id_out);
    }
    if (*check_cmd) return cmd_check(report_path, coords);
    if (*sobol_cmd) return cmd_sobol(sd, sn, sskip);
  } catch (const UsageError& e) {
    std::cerr << "rdesign: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "rdesign: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "rdesign: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
