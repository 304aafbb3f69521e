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

/// Design-space identification: fit one polynomial metamodel per quality
/// constraint g_i(u) >= g*_i, form phi_i = fit_i - g*_i, and join the
/// constraints with R-conjunction into a single expression whose
/// non-negative set is the estimated design space.

#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdesign/box.hpp"
#include "rdesign/contour.hpp"
#include "rdesign/detail/parallel.hpp"
#include "rdesign/error.hpp"
#include "rdesign/expr.hpp"
#include "rdesign/format.hpp"
#include "rdesign/polyfit.hpp"
#include "rdesign/reactor.hpp"
#include "rdesign/region.hpp"
#include "rdesign/serialize.hpp"
#include "rdesign/sobol.hpp"

namespace rdesign::ds {

/// An expensive model: one run maps an input point to every output.
class Model {
 public:
  using Fn = std::function<std::vector<double>(std::span<const double>)>;

  Model(std::vector<std::string> inputs, std::vector<std::string> outputs, Fn fn)
      : inputs_(std::move(inputs)), outputs_(std::move(outputs)), fn_(std::move(fn)),
        calls_(std::make_shared<std::atomic<std::size_t>>(0)) {
    if (inputs_.empty() || outputs_.empty()) throw Error(Errc::InvalidSpec, "model needs inputs and outputs");
  }

  std::vector<double> run(std::span<const double> u) const {
    if (u.size() != inputs_.size())
      throw Error(Errc::DimensionMismatch, "model expects " + std::to_string(inputs_.size()) + " inputs");
    calls_->fetch_add(1, std::memory_order_relaxed);
    std::vector<double> out = fn_(u);
    if (out.size() != outputs_.size())
      throw Error(Errc::DimensionMismatch, "model returned " + std::to_string(out.size()) + " outputs");
    return out;
  }

  const std::vector<std::string>& inputs() const noexcept { return inputs_; }
  const std::vector<std::string>& outputs() const noexcept { return outputs_; }
  std::size_t calls() const noexcept { return calls_->load(); }
  void reset_calls() const noexcept { calls_->store(0); }

 private:
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  Fn fn_;
  std::shared_ptr<std::atomic<std::size_t>> calls_;
};

/// output >= threshold. A "<=" constraint is expressed by negating both.
struct ConstraintSpec {
  std::string name;
  std::size_t output = 0;
  double threshold = 0.0;
};

struct IdentifyOptions {
  std::size_t n_samples = 64;
  std::uint64_t skip = 1;
  /// Empty basis selects a full quadratic in the model inputs.
  BasisSpec basis;
  double alpha = 1.0;
  std::size_t n_validation = 256;
  /// 0 selects the smallest multiple of 256 at or after skip + n_samples.
  std::uint64_t validation_skip = 0;
  /// Grid nodes per axis for contour extraction (2D inputs only); 0 skips.
  std::size_t contour_resolution = 201;
  double membership_tol = 1e-9;
};

struct ConstraintResult {
  ConstraintSpec spec;
  std::string output_name;
  FitResult fit;
  Region phi;
  double validation_r_squared = 0.0;
  double validation_residual_max_abs = 0.0;
  ContourSet contour;
};

struct ValidationStats {
  std::size_t points = 0;
  std::size_t agree = 0;
  double agreement() const noexcept { return points == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(points); }
};

struct DSReport {
  std::vector<std::string> variables;
  std::vector<std::string> outputs;
  Box box;
  double alpha = 1.0;
  std::size_t n_samples = 0;
  std::uint64_t skip = 0;
  std::size_t n_validation = 0;
  std::uint64_t validation_skip = 0;
  std::vector<std::vector<double>> training_points;
  std::vector<std::vector<double>> training_outputs;
  std::vector<ConstraintResult> constraints;
  Region joint = Region::over(constant(0.0), {});
  ValidationStats validation;
  ContourSet joint_contour;
  double membership_tol = 1e-9;
};

inline std::uint64_t default_validation_skip(std::uint64_t skip, std::size_t n) {
  const std::uint64_t end = skip + n;
  return (end + 255) / 256 * 256;
}

namespace detail {

inline std::vector<std::vector<double>> run_all(const Model& model, const std::vector<std::vector<double>>& points) {
  std::vector<std::vector<double>> out(points.size());
  rdesign::detail::parallel_for(points.size(), [&](std::size_t i) { out[i] = model.run(points[i]); });
  return out;
}

inline bool directly_inside(const std::vector<double>& outputs, const std::vector<ConstraintSpec>& cs) {
  for (const auto& c : cs)
    if (!(outputs[c.output] >= c.threshold)) return false;
  return true;
}

inline Region joint_region(const std::vector<ConstraintResult>& cs, double alpha) {
  std::vector<BoolTree> leaves;
  for (const auto& c : cs) leaves.push_back(BoolTree::leaf(c.phi));
  return compose(BoolTree::all_of(std::move(leaves)), alpha, "joint design space");
}

inline ContourSet zero_contour(const Region& r, const Box& box, std::size_t res) {
  if (res < 2 || box.size() != 2) return {};
  return marching_squares(grid_eval(r, box, res));
}

}  // namespace detail

inline DSReport identify(const Model& model, const std::vector<ConstraintSpec>& constraints, const Box& box,
                         IdentifyOptions opt = {}) {
  if (constraints.empty()) throw Error(Errc::EmptyConstraintList, "no constraints given");
  check_box(box);
  if (box.size() != model.inputs().size())
    throw Error(Errc::BoundsMismatch, "box has " + std::to_string(box.size()) + " axes, model has " +
                                          std::to_string(model.inputs().size()) + " inputs");
  rdesign::detail::check_alpha(opt.alpha);
  for (const auto& c : constraints) {
    if (c.output >= model.outputs().size()) throw Error(Errc::InvalidSpec, "constraint '" + c.name + "' output index");
    if (!std::isfinite(c.threshold)) throw Error(Errc::InvalidSpec, "constraint '" + c.name + "' threshold not finite");
  }
  if (opt.basis.size() == 0) opt.basis = total_degree_basis(model.inputs(), 2);
  if (opt.basis.names != model.inputs()) throw Error(Errc::InvalidSpec, "basis variables differ from model inputs");
  opt.basis.validate();
  if (opt.n_samples < opt.basis.size())
    throw Error(Errc::InsufficientPoints, std::to_string(opt.n_samples) + " samples for " +
                                              std::to_string(opt.basis.size()) + " basis terms");
  if (opt.validation_skip == 0) opt.validation_skip = default_validation_skip(opt.skip, opt.n_samples);

  DSReport rep;
  rep.variables = model.inputs();
  rep.outputs = model.outputs();
  rep.box = box;
  rep.alpha = opt.alpha;
  rep.n_samples = opt.n_samples;
  rep.skip = opt.skip;
  rep.n_validation = opt.n_validation;
  rep.validation_skip = opt.validation_skip;
  rep.membership_tol = opt.membership_tol;

  rep.training_points = scale(sobol(box.size(), opt.n_samples, opt.skip), box).points;
  rep.training_outputs = detail::run_all(model, rep.training_points);

  std::vector<std::vector<double>> val_points, val_outputs;
  if (opt.n_validation > 0) {
    val_points = scale(sobol(box.size(), opt.n_validation, opt.validation_skip), box).points;
    val_outputs = detail::run_all(model, val_points);
  }

  for (const auto& c : constraints) {
    std::vector<double> y(rep.training_points.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = rep.training_outputs[i][c.output];
    ConstraintResult r{c, model.outputs()[c.output], fit_least_squares(rep.training_points, y, opt.basis),
                       Region::over(constant(0.0), rep.variables), 0.0, 0.0, {}};
    r.phi = Region::over(to_expr(r.fit) - constant(c.threshold), rep.variables, c.name);
    if (!val_points.empty()) {
      std::vector<double> yv(val_points.size()), pv(val_points.size());
      for (std::size_t i = 0; i < val_points.size(); ++i) {
        yv[i] = val_outputs[i][c.output];
        pv[i] = r.fit.predict(val_points[i]);
        r.validation_residual_max_abs = std::max(r.validation_residual_max_abs, std::fabs(yv[i] - pv[i]));
      }
      r.validation_r_squared = r_squared(yv, pv);
    }
    r.contour = detail::zero_contour(r.phi, box, opt.contour_resolution);
    rep.constraints.push_back(std::move(r));
  }
  rep.joint = detail::joint_region(rep.constraints, opt.alpha);
  rep.joint_contour = detail::zero_contour(rep.joint, box, opt.contour_resolution);

  for (std::size_t i = 0; i < val_points.size(); ++i) {
    const bool expr_inside = rep.joint(val_points[i]) >= -rep.membership_tol;
    if (expr_inside == detail::directly_inside(val_outputs[i], constraints)) ++rep.validation.agree;
  }
  rep.validation.points = val_points.size();
  return rep;
}

/// Sign class of the joint expression at u. Never runs the model.
inline Membership membership(const DSReport& report, std::span<const double> u) {
  if (u.size() != report.box.size())
    throw Error(Errc::DimensionMismatch, "expected " + std::to_string(report.box.size()) + " coordinates");
  if (!box_contains(report.box, u)) throw Error(Errc::OutOfBox, "point outside the identification box");
  return sign_class(report.joint, u, report.membership_tol);
}

inline std::string joint_expression(const DSReport& report, TextFormat format = TextFormat::Infix,
                                    InfixStyle style = InfixStyle::Compact) {
  if (format == TextFormat::Tree) return serialize(report.joint.expr(), TextFormat::Tree);
  return to_infix(report.joint.expr(), style);
}

/// Number of 2D plots needed to show a d-dimensional design space:
/// d(d-1)/2 coordinate pairs times 3^(d-2) fixings of the other axes.
inline std::uint64_t plot_count(std::uint64_t d) {
  if (d < 2) throw Error(Errc::DTooSmall, "plot count needs d >= 2");
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  if (d > (std::uint64_t{1} << 32)) throw Error(Errc::IndexOverflow, "plot count overflows 64 bits");
  std::uint64_t n = d * (d - 1) / 2;
  for (std::uint64_t k = 2; k < d; ++k) {
    if (n > kMax / 3) throw Error(Errc::IndexOverflow, "plot count overflows 64 bits");
    n *= 3;
  }
  return n;
}

struct GridAgreement {
  std::size_t points = 0;
  std::size_t agree = 0;
  /// Disagreements where no constraint satisfies |phi_i| <= its max-abs
  /// training residual.
  std::size_t unexplained = 0;
  double rate() const noexcept { return points == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(points); }
};

/// Compares expression membership (joint >= -tol, so boundary counts as
/// inside) with running the model and thresholding directly on an n x n x ... grid over the report box.
inline GridAgreement grid_agreement(const DSReport& report, const Model& model,
                                    const std::vector<ConstraintSpec>& constraints, std::size_t n_per_axis) {
  if (n_per_axis < 2) throw Error(Errc::InvalidSpec, "grid needs at least 2 nodes per axis");
  const std::size_t d = report.box.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= n_per_axis;
  std::vector<std::vector<double>> pts(total, std::vector<double>(d));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t i = rem % n_per_axis;
      rem /= n_per_axis;
      const auto& b = report.box[k];
      pts[idx][k] = i + 1 == n_per_axis ? b.hi : b.lo + static_cast<double>(i) * b.width() / static_cast<double>(n_per_axis - 1);
    }
  }
  const auto outputs = detail::run_all(model, pts);
  GridAgreement g;
  g.points = total;
  for (std::size_t idx = 0; idx < total; ++idx) {
    const bool expr_inside = report.joint(pts[idx]) >= -report.membership_tol;
    if (expr_inside == detail::directly_inside(outputs[idx], constraints)) {
      ++g.agree;
      continue;
    }
    bool explained = false;
    for (const auto& c : report.constraints)
      explained = explained || std::fabs(c.phi(pts[idx])) <= c.fit.residual_max_abs;
    if (!explained) ++g.unexplained;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Reactor wiring

inline Model reactor_model(const reactor::KineticParams& params = {},
                           const IntegratorOptions& integrator = reactor::default_integrator_options()) {
  params.validate();
  return Model({"T", "t"}, {"purity", "profit"}, [params, integrator](std::span<const double> u) {
    const auto c = reactor::cqa_vector({u[0], u[1]}, params, integrator);
    return std::vector<double>{c.purity, c.profit};
  });
}

inline std::vector<ConstraintSpec> reactor_constraints(double purity_min = reactor::kPurityThreshold,
                                                       double profit_min = reactor::kProfitThreshold) {
  return {{"purity", 0, purity_min}, {"profit", 1, profit_min}};
}

// ---------------------------------------------------------------------------
// Persistence

inline constexpr std::string_view kReportFormat = "rdesign-ds-report/1";

/// Report as JSON. Contour polylines are not stored here; callers write
/// them as CSV and list the file names in `contour_files`.
inline nlohmann::json to_json(const DSReport& r, const std::string& provenance = {},
                              const std::vector<std::string>& contour_files = {}) {
  using nlohmann::json;
  json box = json::array();
  for (const auto& iv : r.box) box.push_back({iv.lo, iv.hi});
  json cs = json::array();
  for (const auto& c : r.constraints)
    cs.push_back({{"name", c.spec.name},
                  {"output", c.output_name},
                  {"output_index", c.spec.output},
                  {"threshold", c.spec.threshold},
                  {"fit", to_json(c.fit)},
                  {"phi", to_infix(c.phi.expr())},
                  {"validation", {{"r_squared", c.validation_r_squared},
                                  {"residual_max_abs", c.validation_residual_max_abs}}}});
  json joint = {{"infix", to_infix(r.joint.expr(), InfixStyle::Compact)},
                {"infix_sqrt", to_infix(r.joint.expr(), InfixStyle::Expanded)},
                {"tree", to_tree_json(r.joint.expr())}};
  if (r.alpha == 1.0) joint["infix_abs"] = to_infix(r.joint.expr(), InfixStyle::Abs);
  json training = json::array();
  for (std::size_t i = 0; i < r.training_points.size(); ++i)
    training.push_back({{"u", r.training_points[i]}, {"outputs", r.training_outputs[i]}});
  return {{"format", kReportFormat},
          {"generator", provenance},
          {"variables", r.variables},
          {"outputs", r.outputs},
          {"box", box},
          {"alpha", r.alpha},
          {"membership_tol", r.membership_tol},
          {"sampling", {{"n", r.n_samples}, {"skip", r.skip}, {"validation_n", r.n_validation},
                        {"validation_skip", r.validation_skip}}},
          {"constraints", cs},
          {"joint", joint},
          {"validation", {{"points", r.validation.points}, {"agree", r.validation.agree},
                          {"agreement", r.validation.agreement()}}},
          {"training", training},
          {"contour_files", contour_files}};
}

inline std::string save_report(const DSReport& r, const std::string& provenance = {},
                               const std::vector<std::string>& contour_files = {}) {
  return to_json(r, provenance, contour_files).dump(2) + "\n";
}

/// Rebuilds phi_i and the joint region from the stored coefficients and
/// checks them against the stored joint tree.
inline DSReport load_report(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, "report is not valid JSON");
  }
  try {
    if (j.at("format").get<std::string>() != kReportFormat) throw ParseError(0, "unknown report format");
    DSReport r;
    r.variables = j.at("variables").get<std::vector<std::string>>();
    r.outputs = j.at("outputs").get<std::vector<std::string>>();
    for (const auto& b : j.at("box")) r.box.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    check_box(r.box);
    if (r.box.size() != r.variables.size()) throw ParseError(0, "box and variable list differ in size");
    r.alpha = j.at("alpha").get<double>();
    r.membership_tol = j.at("membership_tol").get<double>();
    const auto& s = j.at("sampling");
    r.n_samples = s.at("n").get<std::size_t>();
    r.skip = s.at("skip").get<std::uint64_t>();
    r.n_validation = s.at("validation_n").get<std::size_t>();
    r.validation_skip = s.at("validation_skip").get<std::uint64_t>();
    for (const auto& c : j.at("constraints")) {
      ConstraintResult cr{{c.at("name").get<std::string>(), c.at("output_index").get<std::size_t>(),
                           c.at("threshold").get<double>()},
                          c.at("output").get<std::string>(),
                          fit_from_json(c.at("fit")),
                          Region::over(constant(0.0), r.variables),
                          c.at("validation").at("r_squared").get<double>(),
                          c.at("validation").at("residual_max_abs").get<double>(),
                          {}};
      if (cr.fit.basis.names != r.variables) throw ParseError(0, "fit variables differ from report variables");
      cr.phi = Region::over(to_expr(cr.fit) - constant(cr.spec.threshold), r.variables, cr.spec.name);
      r.constraints.push_back(std::move(cr));
    }
    if (r.constraints.empty()) throw ParseError(0, "report has no constraints");
    r.joint = detail::joint_region(r.constraints, r.alpha);
    if (!structurally_equal(r.joint.expr(), from_tree_json(j.at("joint").at("tree"))))
      throw ParseError(0, "stored joint expression does not match the stored coefficients");
    r.validation.points = j.at("validation").at("points").get<std::size_t>();
    r.validation.agree = j.at("validation").at("agree").get<std::size_t>();
    for (const auto& t : j.at("training")) {
      r.training_points.push_back(t.at("u").get<std::vector<double>>());
      r.training_outputs.push_back(t.at("outputs").get<std::vector<double>>());
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed report: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, std::string("invalid report: ") + e.what());
  }
}

}  // namespace rdesign::ds
