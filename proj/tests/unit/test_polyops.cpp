#include <gtest/gtest.h>

#include "gen.hpp"
#include "ppext/polyops.hpp"

using namespace ppext;

namespace {

const CantorParams kTwo = CantorParams::parse("2", "1/4");

using Poly = std::vector<Rational>;  // ascending coefficients

Poly from_roots(const std::vector<Rational>& roots) {
  Poly p{1};
  for (const Rational& r : roots) {
    Poly q(p.size() + 1, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];
      q[i] -= r * p[i];
    }
    p = q;
  }
  return p;
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
  return d.empty() ? Poly{0} : d;
}

Rational horner(const Poly& p, const Rational& x) {
  Rational v = 0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

Rational ell_exact(int j) {
  if (j == 0) return 1;
  mpz_class den = 1;
  den <<= (1UL << j);
  return Rational(1) / Rational(den);
}

Rational value_exact(const PointExpr& x) {
  Rational v = 0;
  for (const auto& [j, c] : x.terms()) v += Rational(c) * ell_exact(j);
  return v;
}

bool close(const BigReal& got, const Rational& want, double rel) {
  BigReal w = BigReal::from_rational(want, 512);
  if (want == 0) return abs(got) < ldexp(BigReal(1, 64), -400);
  return relatively_close(got, w, rel);
}

}  // namespace

TEST(ProductJet, DerivativesMatchExpandedPolynomial) {
  gen::for_all(150, 31, [](gen::Gen& g) {
    int n = static_cast<int>(g.integer(0, 12));
    std::vector<Rational> roots;
    for (int i = 0; i < n; ++i) roots.push_back(g.rational(40, 17));
    Rational x = g.rational(40, 13);
    int p_max = static_cast<int>(g.integer(0, 6));
    std::vector<BigReal> broots;
    for (const Rational& r : roots) broots.push_back(BigReal::from_rational(r, 400));
    PolyEvalResult got = product_derivs(broots, BigReal::from_rational(x, 400), p_max, 400);
    Poly P = from_roots(roots);
    for (int j = 0; j <= p_max; ++j) {
      EXPECT_TRUE(close(got[j], horner(P, x), 1e-100)) << "j=" << j << " n=" << n;
      P = derivative(P);
    }
  });
}

TEST(ProductJet, EmptyProductIsOne) {
  ProductJet jet(3, 128);
  EXPECT_EQ(jet.result()[0], BigReal(1, 128));
  EXPECT_TRUE(jet.result()[1].is_zero());
  jet.multiply(BigReal(5, 128));
  EXPECT_EQ(jet.result()[0], BigReal(5, 128));
  EXPECT_EQ(jet.result()[1], BigReal(1, 128));
  EXPECT_TRUE(jet.result()[2].is_zero());
}

TEST(OmegaEval, ExactAtRationalPoints) {
  LevelData L = build_levels(kTwo, 8);
  NodeSeq Z = enumerate_nodes(40, L);
  std::vector<Rational> roots;
  for (const PointExpr& x : Z.points) roots.push_back(value_exact(x));
  gen::for_all(60, 32, [&](gen::Gen& g) {
    std::size_t n = static_cast<std::size_t>(g.integer(0, 40));
    PointExpr at = PointExpr::from_terms({{static_cast<int>(g.integer(0, 8)), g.integer(-3, 3)},
                                          {static_cast<int>(g.integer(0, 8)), g.integer(-3, 3)}});
    PolyEvalResult r = omega_eval(n, Z, Locus::at(at), 3, L, 256);
    Poly P = from_roots(std::vector<Rational>(roots.begin(), roots.begin() + n));
    Rational x = value_exact(at);
    for (int j = 0; j <= 3; ++j) {
      EXPECT_TRUE(close(r[j], horner(P, x), 1e-60)) << "n=" << n << " j=" << j;
      P = derivative(P);
    }
  });
}

TEST(DividedDifferences, MatchTheClassicTableOnPolynomials) {
  // exact Newton table for a random degree-14 polynomial on 17 nodes
  gen::for_all(5, 33, [](gen::Gen& g) {
    std::vector<Rational> c;
    for (int i = 0; i <= 14; ++i) c.push_back(g.rational(9, 7));
    JetFn f = jet_polynomial(c);
    NodeSeq Z = enumerate_nodes(17);
    std::vector<Rational> x, t;
    for (const PointExpr& p : Z.points) {
      x.push_back(value_exact(p));
      t.push_back(horner(c, x.back()));
    }
    std::vector<Rational> xi{t[0]};
    for (std::size_t order = 1; order < x.size(); ++order) {
      for (std::size_t i = x.size() - 1; i >= order; --i) {
        t[i] = (t[i] - t[i - 1]) / (x[i] - x[i - order]);
      }
      xi.push_back(t[order]);
    }
    std::vector<DividedDiff> got = divided_differences(f, kTwo, 16);
    for (std::size_t n = 0; n <= 16; ++n) {
      EXPECT_TRUE(close(got[n].value, xi[n], 1e-15) || (xi[n] == 0 && got[n].value.is_zero()))
          << "n=" << n << " got " << got[n].value.to_string() << " want " << xi[n].get_d();
    }
    EXPECT_EQ(xi[14], c[14]);
  });
}

TEST(DividedDifferences, ExpIsSandwichedByFactorials) {
  // xi_n(exp) = exp(c)/n! with c in the hull [0, 1]
  for (const char* alpha : {"2", "5/2"}) {
    CantorParams p = CantorParams::parse(alpha, "1/4");
    std::vector<DividedDiff> xi = divided_differences(jet_exp(), p, 40);
    for (int n = 0; n <= 40; ++n) {
      BigReal lo = BigReal(1, 256) / factorial(n, 256);
      BigReal hi = const_e(256) / factorial(n, 256);
      EXPECT_GE(xi[n].value, lo) << alpha << " n=" << n;
      EXPECT_LE(xi[n].value, hi) << alpha << " n=" << n;
    }
  }
}

TEST(NewtonSeries, InterpolatesAtTheNodes) {
  NewtonSeries S(jet_exp(), kTwo, 32);
  LevelData L = build_levels(kTwo, 7);
  NodeSeq Z = enumerate_nodes(33, L);
  for (int N : {0, 1, 5, 16, 32}) {
    for (int k = 1; k <= N + 1; ++k) {
      BigReal fx = exp(eval_point(Z[k], L, 256));
      BigReal s = S.partial_sum(N, Z, Locus::at(Z[k]), 0, L, 256)[0];
      EXPECT_TRUE(relatively_close(s, fx, 1e-60)) << "N=" << N << " k=" << k;
    }
  }
}

TEST(NewtonSeries, ReproducesPolynomialsExactlyPastTheirDegree) {
  JetFn f = jet_polynomial({Rational(1), Rational(-2), Rational(0), Rational(3, 2)});
  NewtonSeries S(f, kTwo, 10);
  for (int n = 4; n <= 10; ++n) EXPECT_TRUE(S.xi(n).is_zero()) << n;
  EXPECT_TRUE(relatively_close(S.xi(3), BigReal::from_rational(Rational(3, 2), 64), 1e-18));
}

TEST(Lebesgue, OneNodeAndLowerBound) {
  LevelData L = build_levels(kTwo, 6);
  NodeSeq Z = enumerate_nodes(20, L);
  std::vector<PointExpr> Y = grid(L, 6);
  EXPECT_EQ(lebesgue_constant(Z.prefix(1), Y, L), BigReal(1, 64));
  for (std::size_t n = 1; n <= 20; ++n) {
    EXPECT_GE(lebesgue_constant(Z.prefix(n), Y, L), BigReal(1, 64)) << n;
  }
}

TEST(GridTable, DifferencesAreExactForAlphaTwo) {
  LevelData L = build_levels(kTwo, 6);
  NodeSeq Z = enumerate_nodes(30, L);
  GridTable T(L, Z, 6, 256);
  ASSERT_EQ(T.grid_size(), std::size_t{128});
  gen::for_all(200, 34, [&](gen::Gen& g) {
    std::size_t gi = static_cast<std::size_t>(g.integer(0, 127));
    std::size_t i = static_cast<std::size_t>(g.integer(1, 30));
    Rational want = value_exact(to_point(T.address(gi))) - value_exact(Z[i]);
    EXPECT_TRUE(close(T.diff(gi, i), want, 1e-70) || (want == 0 && T.diff(gi, i).is_zero()));
  });
  for (std::size_t k = 1; k <= 30; ++k) {
    EXPECT_TRUE(T.node_diff(k, k).is_zero());
    EXPECT_EQ(T.node_at(T.node_position(k)), k);
    EXPECT_EQ(to_point(T.address(T.node_position(k))), Z[k]);
  }
}
