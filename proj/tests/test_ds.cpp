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

#include <algorithm>

#include "oracles.hpp"
#include "rdesign/ds.hpp"

using namespace rdesign;
using namespace rdesign::ds;

namespace {

const Box kBox{{250.0, 300.0}, {250.0, 300.0}};

Model synthetic() {
  return Model({"T", "t"}, {"g1", "g2"},
               [](std::span<const double> u) { return std::vector<double>{u[0] + u[1], u[0] * u[1]}; });
}

const std::vector<ConstraintSpec> kSynthetic{{"g1", 0, 550.0}, {"g2", 1, 75625.0}};

IdentifyOptions reactor_options() {
  IdentifyOptions o;
  o.basis = reactor_basis();
  return o;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST(Identify, SyntheticPolynomialsRecoveredExactly) {
  const Model m = synthetic();
  const DSReport r = identify(m, kSynthetic, kBox, reactor_options());
  ASSERT_EQ(r.constraints.size(), 2u);
  const std::vector<double> c1{0, 1, 0, 1, 0}, c2{0, 0, 0, 0, 1};
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_NEAR(r.constraints[0].fit.coefficients[j], c1[j], 1e-8);
    EXPECT_NEAR(r.constraints[1].fit.coefficients[j], c2[j], 1e-8);
  }
  EXPECT_EQ(r.validation.agree, r.validation.points);
  EXPECT_EQ(r.validation.points, 256u);
  EXPECT_EQ(r.validation_skip, 256u);
  // Brute-force thresholding on a 101 x 101 grid.
  std::size_t agree = 0;
  for (std::size_t i = 0; i < 101; ++i)
    for (std::size_t j = 0; j < 101; ++j) {
      const std::vector<double> u{oracle::node(250, 300, i, 101), oracle::node(250, 300, j, 101)};
      const bool direct = u[0] + u[1] >= 550.0 && u[0] * u[1] >= 75625.0;
      agree += (membership(r, u) != Membership::Outside) == direct ? 1 : 0;
    }
  EXPECT_EQ(agree, 101u * 101u);
  const GridAgreement g = grid_agreement(r, m, kSynthetic, 101);
  EXPECT_EQ(g.agree, g.points);
}

TEST(Identify, PhiAndJointStructure) {
  const DSReport r = identify(synthetic(), kSynthetic, kBox, reactor_options());
  for (const auto& c : r.constraints)
    EXPECT_TRUE(structurally_equal(c.phi.expr(), to_expr(c.fit) - constant(c.spec.threshold)));
  EXPECT_TRUE(structurally_equal(
      r.joint.expr(), compose(BoolTree::leaf(r.constraints[0].phi) && BoolTree::leaf(r.constraints[1].phi)).expr()));
}

TEST(Identify, SingleConstraintJointIsPhi) {
  const DSReport r = identify(synthetic(), {kSynthetic[0]}, kBox, reactor_options());
  EXPECT_TRUE(structurally_equal(r.joint.expr(), r.constraints[0].phi.expr()));
  for (const auto& p : scale(sobol(2, 50, 9), kBox).points) EXPECT_EQ(r.joint(p), r.constraints[0].phi(p));
  EXPECT_EQ(joint_expression(r), to_infix(r.constraints[0].phi.expr()));
}

TEST(Membership, SyntheticExamplesAndNoModelCalls) {
  const Model m = synthetic();
  const DSReport r = identify(m, kSynthetic, kBox, reactor_options());
  const std::size_t calls = m.calls();
  EXPECT_EQ(calls, 64u + 256u);
  EXPECT_EQ(membership(r, std::vector<double>{300.0, 300.0}), Membership::Inside);
  EXPECT_EQ(membership(r, std::vector<double>{250.0, 250.0}), Membership::Outside);
  EXPECT_EQ(m.calls(), calls);
  try {
    membership(r, std::vector<double>{200.0, 275.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OutOfBox);
  }
  EXPECT_THROW(membership(r, std::vector<double>{275.0}), Error);
}

TEST(Membership, BoundaryOfSingleConstraint) {
  const DSReport r = identify(synthetic(), {kSynthetic[0]}, kBox, reactor_options());
  EXPECT_EQ(membership(r, std::vector<double>{275.0, 275.0}), Membership::Boundary);
  EXPECT_EQ(membership(r, std::vector<double>{260.0, 290.0}), Membership::Boundary);
}

TEST(Membership, BoundaryOfFirstConstraintWithSecondPositive) {
  // g1 = T + t = 550 at (260, 290) while g2 = 75400 < 75625; use a lower g2
  // threshold so the second constraint is satisfied there.
  const std::vector<ConstraintSpec> cs{{"g1", 0, 550.0}, {"g2", 1, 70000.0}};
  const DSReport r = identify(synthetic(), cs, kBox, reactor_options());
  EXPECT_EQ(membership(r, std::vector<double>{260.0, 290.0}), Membership::Boundary);
}

TEST(DSProperty, JointSignIsMinOfConstraintSigns) {
  const Model m = reactor_model();
  auto vals = identify(m, reactor_constraints(), kBox, reactor_options());
  const std::vector<ConstraintSpec> cs{{"g1", 0, 552.0}, {"g2", 1, 74000.0}};
  const DSReport r = identify(synthetic(), cs, kBox, reactor_options());
  for (const DSReport* rep : std::vector<const DSReport*>{&vals, &r}) {
    for (std::size_t i = 0; i < 60; ++i)
      for (std::size_t j = 0; j < 60; ++j) {
        const std::vector<double> u{oracle::node(250, 300, i, 60), oracle::node(250, 300, j, 60)};
        double want = 1.0;
        for (const auto& c : rep->constraints) want = std::min(want, oracle::sign_or_zero(c.phi(u), 0.0));
        ASSERT_EQ(oracle::sign_or_zero(rep->joint(u), 0.0), want);
      }
  }
}

TEST(DSProperty, ConstraintOrderDoesNotChangeSigns) {
  const std::vector<ConstraintSpec> fwd{{"g1", 0, 552.0}, {"g2", 1, 74000.0}};
  const std::vector<ConstraintSpec> rev{fwd[1], fwd[0]};
  const DSReport a = identify(synthetic(), fwd, kBox, reactor_options());
  const DSReport b = identify(synthetic(), rev, kBox, reactor_options());
  EXPECT_FALSE(structurally_equal(a.joint.expr(), b.joint.expr()));
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = 0; j < 50; ++j) {
      const std::vector<double> u{oracle::node(250, 300, i, 50), oracle::node(250, 300, j, 50)};
      ASSERT_EQ(oracle::sign_or_zero(a.joint(u), 0.0), oracle::sign_or_zero(b.joint(u), 0.0));
    }
}

TEST(Identify, ReactorMetamodelQuality) {
  const Model m = reactor_model();
  const DSReport r = identify(m, reactor_constraints(), kBox, reactor_options());
  for (const auto& c : r.constraints) {
    EXPECT_GE(c.fit.r_squared, 0.99) << c.spec.name;
    EXPECT_GE(c.validation_r_squared, 0.99) << c.spec.name;
  }
  EXPECT_EQ(count_kind(r.joint.expr(), NodeKind::RAnd), 1u);
  const std::string abs_form = joint_expression(r, TextFormat::Infix, InfixStyle::Abs);
  const std::string sqrt_form = joint_expression(r, TextFormat::Infix, InfixStyle::Expanded);
  EXPECT_EQ(count_kind(parse(abs_form, TextFormat::Infix), NodeKind::Abs), 1u);
  EXPECT_EQ(count_kind(parse(sqrt_form, TextFormat::Infix), NodeKind::Sqrt), 1u);
  for (const auto& p : scale(sobol(2, 100, 3), kBox).points) {
    for (const std::string& s : {abs_form, sqrt_form, joint_expression(r)})
      ASSERT_NEAR(eval(parse(s, TextFormat::Infix), r.variables, p), r.joint(p), 1e-12 * (1.0 + std::fabs(r.joint(p))));
    ASSERT_EQ(eval(parse(joint_expression(r, TextFormat::Tree), TextFormat::Tree), r.variables, p), r.joint(p));
  }
}

// With the published thresholds the region is empty under the adopted
// kinetics; thresholds at the medians of the simulated outputs give a
// region that cuts through the box. Purity is rescaled to parts per 1e10
// so that its metamodel values sit well above the 1e-9 boundary band.
TEST(Identify, ReactorMedianThresholdsAgreeWithSimulation) {
  const Model base = reactor_model();
  const Model m({"T", "t"}, {"purity_e10", "profit"}, [&](std::span<const double> u) {
    auto v = base.run(u);
    v[0] *= 1e10;
    return v;
  });
  std::vector<double> pur, prof;
  for (const auto& p : scale(sobol(2, 64, 4096), kBox).points) {
    const auto v = m.run(p);
    pur.push_back(v[0]);
    prof.push_back(v[1]);
  }
  const std::vector<ConstraintSpec> cs{{"purity", 0, median(pur)}, {"profit", 1, median(prof)}};
  const DSReport r = identify(m, cs, kBox, reactor_options());
  const GridAgreement g = grid_agreement(r, m, cs, 40);
  EXPECT_GE(g.rate(), 0.98);
  EXPECT_EQ(g.unexplained, 0u);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 40; ++j)
      inside += r.joint(std::vector<double>{oracle::node(250, 300, i, 40), oracle::node(250, 300, j, 40)}) >= 0.0;
  EXPECT_GT(inside, 100u);
  EXPECT_LT(inside, 1500u);
  EXPECT_FALSE(r.joint_contour.empty());
  EXPECT_FALSE(r.constraints[0].contour.empty());
}

TEST(Identify, Errors) {
  try {
    identify(synthetic(), {}, kBox, reactor_options());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyConstraintList);
  }
  IdentifyOptions few = reactor_options();
  few.n_samples = 4;
  try {
    identify(synthetic(), kSynthetic, kBox, few);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InsufficientPoints);
  }
  IdentifyOptions bad_alpha = reactor_options();
  bad_alpha.alpha = -1.0;
  EXPECT_THROW(identify(synthetic(), kSynthetic, kBox, bad_alpha), Error);
  EXPECT_THROW(identify(synthetic(), {{"x", 5, 0.0}}, kBox, reactor_options()), Error);
  EXPECT_THROW(identify(synthetic(), kSynthetic, Box{{0.0, 1.0}}, reactor_options()), Error);
}

TEST(Identify, DefaultBasisIsFullQuadratic) {
  const DSReport r = identify(synthetic(), kSynthetic, kBox);
  EXPECT_EQ(r.constraints[0].fit.basis.size(), 6u);
  EXPECT_EQ(r.validation.agree, r.validation.points);
}

TEST(Identify, NonUnitAlphaKeepsValidationAgreement) {
  IdentifyOptions o = reactor_options();
  o.alpha = 0.0;
  const std::vector<ConstraintSpec> cs{{"g1", 0, 552.0}, {"g2", 1, 74000.0}};
  const DSReport r = identify(synthetic(), cs, kBox, o);
  EXPECT_GE(r.validation.agreement(), 0.99);
  EXPECT_EQ(r.joint.expr().alpha(), 0.0);
}

TEST(Identify, ValidationSkip) {
  EXPECT_EQ(default_validation_skip(1, 64), 256u);
  EXPECT_EQ(default_validation_skip(0, 256), 256u);
  EXPECT_EQ(default_validation_skip(200, 100), 512u);
}

TEST(PlotCount, Values) {
  EXPECT_EQ(plot_count(2), 1u);
  EXPECT_EQ(plot_count(3), 9u);
  EXPECT_EQ(plot_count(4), 54u);
  EXPECT_EQ(plot_count(5), 270u);
  for (std::uint64_t d : {0u, 1u}) {
    try {
      plot_count(d);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::DTooSmall);
    }
  }
  EXPECT_THROW(plot_count(60), Error);
}

TEST(Report, SaveLoadRoundTrip) {
  const DSReport r = identify(synthetic(), kSynthetic, kBox, reactor_options());
  const std::string text = save_report(r, "test", {"a.csv"});
  const DSReport back = load_report(text);
  EXPECT_TRUE(structurally_equal(back.joint.expr(), r.joint.expr()));
  EXPECT_EQ(back.box.size(), 2u);
  EXPECT_EQ(back.validation.agree, r.validation.agree);
  EXPECT_EQ(save_report(back, "test", {"a.csv"}), text);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j.at("joint").at("infix_abs").get<std::string>().find("rand"), std::string::npos);
  EXPECT_EQ(j.at("contour_files")[0], "a.csv");
}

TEST(Report, TamperedCoefficientsRejected) {
  const DSReport r = identify(synthetic(), kSynthetic, kBox, reactor_options());
  auto j = nlohmann::json::parse(save_report(r));
  j["constraints"][0]["fit"]["terms"][1]["coefficient"] = 2.0;
  EXPECT_THROW(load_report(j.dump()), ParseError);
  EXPECT_THROW(load_report("{"), ParseError);
  EXPECT_THROW(load_report("{\"format\":\"other\"}"), ParseError);
  auto k = nlohmann::json::parse(save_report(r));
  k["box"][0] = {300.0, 250.0};
  EXPECT_THROW(load_report(k.dump()), ParseError);
}
