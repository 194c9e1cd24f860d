#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "ppext/cutoff.hpp"

using namespace ppext;

namespace {

const CantorParams kTwo = CantorParams::parse("2", "1/4");

BigReal D(double v, Bits w = 256) { return BigReal::from_double(v, w); }

}  // namespace

TEST(Phi, PiecesAndMidpoint) {
  EXPECT_EQ(phi(D(-0.5), 128), BigReal(1, 128));
  EXPECT_EQ(phi(D(0.0), 128), BigReal(1, 128));
  EXPECT_TRUE(phi(D(1.0), 128).is_zero());
  EXPECT_TRUE(phi(D(1.5), 128).is_zero());
  // phi(1/2) = exp(-2 e^-2)
  double want = std::exp(-2.0 * std::exp(-2.0));
  EXPECT_NEAR(phi(D(0.5), 128).to_double(), want, 1e-15);
  EXPECT_GT(phi(D(0.5), 128), D(0.5));
}

TEST(Phi, DecreasingOnTheUnitInterval) {
  gen::for_all(200, 41, [](gen::Gen& g) {
    double a = static_cast<double>(g.integer(1, 9999)) / 10000.0;
    double b = static_cast<double>(g.integer(1, 9999)) / 10000.0;
    if (a > b) std::swap(a, b);
    EXPECT_GE(phi(D(a), 128), phi(D(b), 128));
    EXPECT_LE(phi_deriv(1, D(a), 128).sign(), 0);
  });
}

TEST(Phi, FirstDerivativeClosedForm) {
  // phi = exp(g), g = e^(-1/x)/(x-1): phi' = phi * (e^(-1/x)/(x^2 (x-1)) - e^(-1/x)/(x-1)^2)
  gen::for_all(100, 42, [](gen::Gen& g) {
    BigReal x = BigReal::from_rational(Rational(g.integer(1, 999), 1000), 256);
    BigReal one(1, 256);
    BigReal e = exp(-(one / x));
    BigReal gp = e / (x * x * (x - one)) - e / ((x - one) * (x - one));
    BigReal want = phi(x, 256) * gp;
    EXPECT_TRUE(relatively_close(phi_deriv(1, x, 256), want, 1e-60));
  });
}

TEST(Phi, RecursionAgainstFiniteDifferences) {
  std::vector<double> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(0.02 + 0.96 * i / 99.0);
  for (int k = 1; k <= 6; ++k) {
    RecursionCheck r = verify_phi_recursion(k, pts, 1e-4);
    EXPECT_EQ(r.samples, 100u);
    EXPECT_LT(r.max_rel_error, 1e-4) << "k=" << k;
  }
}

TEST(QPoly, FirstPolynomialAndValueAtOne) {
  EXPECT_EQ(q_poly(0), BiPoly::term(1, 1, 0) + BiPoly::term(-1, 0, 0) + BiPoly::term(-1, 2, 0));
  for (int k = 0; k <= 8; ++k) {
    BigReal want = exp(BigReal(-k, 256));
    if (k % 2 == 0) want = -want;
    EXPECT_TRUE(relatively_close(q_value(k, BigReal(1, 256), 256), want, 1e-60)) << k;
  }
}

TEST(BiPoly, DerivativesAreLinearAndLeibniz) {
  gen::for_all(100, 43, [](gen::Gen& g) {
    auto rnd = [&] {
      BiPoly p;
      for (int i = 0; i < 4; ++i) {
        p = p + BiPoly::term(g.integer(-5, 5), static_cast<int>(g.integer(0, 4)),
                             static_cast<int>(g.integer(0, 3)));
      }
      return p;
    };
    BiPoly a = rnd(), b = rnd();
    EXPECT_EQ((a + b).d_x(), a.d_x() + b.d_x());
    EXPECT_EQ((a * b).d_x(), a.d_x() * b + a * b.d_x());
    EXPECT_EQ((a * b).d_t(), a.d_t() * b + a * b.d_t());
  });
}

TEST(Cutoff, OneOnTheSetAndInTheUnitRange) {
  LevelData L = build_levels(kTwo, 8);
  for (int s : {1, 2, 3}) {
    CutoffFn u(L, L.length(s));
    for (const PointExpr& x : grid(L, 6)) {
      EXPECT_EQ(u.eval(Locus::at(x), 0, 128)[0], BigReal(1, 128));
    }
    gen::for_all(2000, 44 + s, [&](gen::Gen& g) {
      Rational x = g.rational_in(Rational(-2), Rational(2));
      BigReal v = u.eval(Locus::of(BigReal::from_rational(x, 256)), 0, 128)[0];
      EXPECT_GE(v, BigReal(0, 64));
      EXPECT_LE(v, BigReal(1, 64));
      if (x < -L.length(s).to_double() || x > 1 + L.length(s).to_double()) {
        EXPECT_TRUE(v.is_zero());
      }
    });
  }
}

TEST(Cutoff, NarrowGapsAreFilled) {
  LevelData L = build_levels(kTwo, 8);
  // delta = ell_1: the level-1 gap h_1 = 1/8 < 2 delta is covered
  CutoffFn u(L, L.length(1));
  Locus mid{PointExpr::level(2), BigReal::from_rational(Rational(1, 32), 128)};
  EXPECT_EQ(u.eval(mid, 0, 128)[0], BigReal(1, 128));
  // the level-0 gap h_0 = 1/2 >= 2 delta has a zero stretch in the middle
  Locus half = Locus::of(BigReal::from_rational(Rational(1, 2), 128));
  EXPECT_TRUE(u.eval(half, 0, 128)[0].is_zero());
}

TEST(Cutoff, ScalingConstantsStableAcrossDelta) {
  LevelData L = build_levels(kTwo, 7);
  std::vector<std::vector<BigReal>> c;
  for (int s : {1, 2, 3}) c.push_back(cutoff_scaling_constants(CutoffFn(L, L.length(s)), 4, 32));
  for (int j = 0; j <= 4; ++j) {
    for (std::size_t a = 1; a < c.size(); ++a) {
      BigReal r = c[a][j] / c[0][j];
      EXPECT_LE(r, BigReal(2, 64)) << "j=" << j;
      EXPECT_GE(r, BigReal::from_rational(Rational(1, 2), 64)) << "j=" << j;
    }
  }
}

TEST(Cutoff, DerivativesMatchFiniteDifferencesInACollar) {
  LevelData L = build_levels(kTwo, 7);
  CutoffFn u(L, L.length(2));
  // left collar of the level-0 gap starts at ell_1
  BigReal h = ldexp(BigReal(1, 512), -60);
  for (int i = 1; i < 8; ++i) {
    BigReal off = L.length(2).rounded(512) * i / 8;
    PolyEvalResult r = u.eval(Locus{PointExpr::level(1), off}, 2, 512);
    BigReal up = u.eval(Locus{PointExpr::level(1), off + h}, 0, 512)[0];
    BigReal dn = u.eval(Locus{PointExpr::level(1), off - h}, 0, 512)[0];
    BigReal fd = (up - dn) / (h * 2);
    EXPECT_TRUE(relatively_close(r[1], fd, 1e-30)) << i;
  }
}

TEST(Theta, ConstantsSatisfyTheirInequality) {
  EXPECT_THROW(theta_constants(3), ParameterError);
  for (int k : {2, 4, 6}) {
    ThetaConstants t = theta_constants(k);
    EXPECT_TRUE(t.at1_pass) << k;
    EXPECT_TRUE(t.eta_verified) << k;
    EXPECT_GT(t.theta, BigReal(0, 64));
    EXPECT_LT(t.theta, BigReal(1, 64));
  }
}
