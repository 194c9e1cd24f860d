#include <gtest/gtest.h>

#include "gen.hpp"
#include "ppext/extension.hpp"

using namespace ppext;

namespace {

const CantorParams kTwo = CantorParams::parse("2", "1/4");

const ExtensionOperator& small_op() {
  static const ExtensionOperator op(jet_exp(), OperatorConfig{kTwo, 63, 2, 2, 4});
  return op;
}

}  // namespace

TEST(Blocks, DeltaLevel) {
  EXPECT_EQ(delta_level(0), 0);
  EXPECT_EQ(delta_level(1), 0);
  EXPECT_EQ(delta_level(2), 1);
  EXPECT_EQ(delta_level(3), 1);
  EXPECT_EQ(delta_level(4), 2);
  EXPECT_EQ(delta_level(255), 7);
  EXPECT_EQ(delta_level(256), 8);
}

TEST(Operator, InterpolatesAtEveryNode) {
  const ExtensionOperator& op = small_op();
  for (std::size_t k = 1; k <= op.nodes().size(); ++k) {
    ExtensionResult r = op.eval(Locus::at(op.nodes()[k]), 0);
    BigReal fx = exp(eval_point(op.nodes()[k], op.levels(), 192));
    EXPECT_TRUE(relatively_close(r.values[0], fx, 0x1p-64)) << k;
  }
}

TEST(Operator, MatchesTheJetOnTheSet) {
  const ExtensionOperator& op = small_op();
  for (const PointExpr& x : grid(op.levels(), 4)) {
    ExtensionResult r = op.eval(Locus::at(x), 2);
    BigReal xv = eval_point(x, op.levels(), 192);
    for (int j = 0; j <= 2; ++j) {
      EXPECT_TRUE(relatively_close(r.values[j], exp(xv), 1e-8)) << x.to_string() << " j=" << j;
    }
    EXPECT_TRUE(r.converged);
  }
}

TEST(Operator, VanishesOutsideTheWidestCollar) {
  const ExtensionOperator& op = small_op();
  gen::for_all(50, 61, [&](gen::Gen& g) {
    // the N = 0 term carries u_{ell_0}, whose collars reach -1 and 2
    Rational x = g.rational_in(Rational(-2), Rational(-101, 100));
    ExtensionResult r = op.eval(Locus::of(BigReal::from_rational(x, 192)), 2);
    for (const BigReal& v : r.values) EXPECT_TRUE(v.is_zero());
  });
}

TEST(Operator, SmoothAcrossACollar) {
  // derivative against a central difference just outside 1
  const ExtensionOperator& op = small_op();
  BigReal h = ldexp(BigReal(1, 192), -40);
  BigReal off = BigReal::from_rational(Rational(1, 10), 192);
  Locus x{PointExpr::level(0), off};
  ExtensionResult r = op.eval(x, 1);
  BigReal up = op.eval(Locus{PointExpr::level(0), off + h}, 0).values[0];
  BigReal dn = op.eval(Locus{PointExpr::level(0), off - h}, 0).values[0];
  EXPECT_TRUE(relatively_close(r.values[1], (up - dn) / (h * 2), 1e-15));
}

TEST(Operator, SupTableIsCached) {
  const ExtensionOperator& op = small_op();
  const auto& a = op.term_sups(1);
  const auto& b = op.term_sups(1);
  EXPECT_EQ(&a, &b);
  EXPECT_EQ(a.size(), 64u);
}

TEST(TermDecay, SmallOperatorPasses) {
  for (int p : {0, 1}) {
    Report r = verify_term_decay(small_op(), p);
    EXPECT_TRUE(r.pass()) << p;
    for (const Check& c : r.checks) {
      if (c.asserted) EXPECT_TRUE(c.pass) << c.label;
    }
  }
}

TEST(TermDecay, Hypotheses) {
  OperatorConfig cfg{CantorParams::parse("5/2", "1/4"), 15, 1, 2, 4};
  EXPECT_THROW(verify_term_decay(jet_exp(), 1, cfg), HypothesisError);
}

TEST(Seom, RatiosFinite) {
  Report r = verify_seom(kTwo, 1, 2, 16, 4);
  EXPECT_TRUE(r.pass());
}

TEST(Violation, Order) {
  EXPECT_EQ(violation_order(CantorParams::parse("3", "1/4")), 4);
  EXPECT_EQ(violation_order(CantorParams::parse("5/2", "1/4")), 6);
  // (2*4 - 3)/(4 - 2) = 5/2
  EXPECT_EQ(violation_order(CantorParams::parse("4", "1/4")), 4);
}

TEST(Violation, RatioGrows) {
  Report r = violation_demo(CantorParams::parse("3", "1/4"), 4, 5, {3});
  bool saw_growth_row = false;
  for (const Check& c : r.checks) {
    EXPECT_FALSE(c.asserted);
    if (c.label.find("grows") != std::string::npos) {
      saw_growth_row = true;
      EXPECT_TRUE(c.pass) << c.label;
    }
  }
  EXPECT_TRUE(saw_growth_row);
  EXPECT_THROW(violation_demo(kTwo, 4, 5, {3}), HypothesisError);
}

TEST(IntervalDemo, ImpliedConstant) {
  Report r = interval_demo(Rational(1, 10000), Rational(1, 50), 2000);
  EXPECT_TRUE(r.pass());
  BigReal c = BigReal::parse(r.parameter("implied_C"), 128);
  EXPECT_TRUE(relatively_close(c, BigReal(50, 128), 0.01));
}

TEST(IntervalDemo, NoConstraintWhenTheCutoffCannotVanish) {
  Report r = interval_demo(Rational(1, 2), Rational(3, 4));
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_FALSE(r.checks[0].asserted);
  EXPECT_THROW(interval_demo(Rational(0), Rational(1, 2)), ParameterError);
}
