#include <gtest/gtest.h>

#include "gen.hpp"
#include "ppext/cantor.hpp"
#include "ppext/numerics.hpp"

using namespace ppext;

namespace {

BigReal R(const Rational& q, Bits w = 300) { return BigReal::from_rational(q, w); }

bool near_rel(const BigReal& got, const Rational& want, long bits) {
  BigReal w = R(want, got.width() + 64);
  if (want == 0) return got.is_zero();
  return abs(got - w) <= ldexp(abs(w), -bits);
}

}  // namespace

TEST(ParseRational, DecimalsAreExact) {
  EXPECT_EQ(parse_rational("1e-4"), Rational(1, 10000));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-1.5e2"), Rational(-150));
  EXPECT_EQ(parse_rational("0.02"), Rational(1, 50));
  EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
  EXPECT_EQ(parse_rational("5/2"), Rational(5, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
}

TEST(ParseRational, RejectsGarbage) {
  for (const char* bad : {"", "abc", "1/0", "1e", "1.2.3", "1/x", "--1"}) {
    EXPECT_THROW(parse_rational(bad), ParameterError) << bad;
  }
}

TEST(ParseRational, RoundTripsThroughItsString) {
  gen::for_all(200, 1, [](gen::Gen& g) {
    Rational q = g.rational(100000, 100000);
    EXPECT_EQ(parse_rational(rational_string(q)), q);
  });
}

TEST(BigReal, ArithmeticMatchesExactRationals) {
  gen::for_all(300, 2, [](gen::Gen& g) {
    Rational a = g.rational(1000, 997), b = g.rational(1000, 991);
    if (b == 0) b = 1;
    EXPECT_TRUE(near_rel(R(a) + R(b), a + b, 290) || a + b == 0);
    EXPECT_TRUE(near_rel(R(a) * R(b), a * b, 290));
    EXPECT_TRUE(near_rel(R(a) / R(b), a / b, 290));
    EXPECT_TRUE(near_rel(R(a) * 7L - R(b) / 3L, a * 7 - b / 3, 280) || a * 7 - b / 3 == 0);
  });
}

TEST(BigReal, OrderingAgreesWithRationals) {
  gen::for_all(300, 3, [](gen::Gen& g) {
    Rational a = g.rational(50, 50), b = g.rational(50, 50);
    EXPECT_EQ(R(a) < R(b), a < b);
    EXPECT_EQ(R(a) == R(b), a == b);
  });
}

TEST(BigReal, IntegerPowersAndSpecialValues) {
  EXPECT_EQ(pow(BigReal(2, 128), -3), R(Rational(1, 8), 128));
  EXPECT_EQ(pow(BigReal(3, 128), 5), BigReal(243, 128));
  EXPECT_EQ(factorial(20, 128), BigReal::from_mpz(mpz_class("2432902008176640000"), 128));
  EXPECT_EQ(binomial(10, 3, 64), BigReal(120, 64));
  EXPECT_EQ(ldexp(BigReal(3, 64), -2), R(Rational(3, 4), 64));
  // e and pi against long literals
  EXPECT_TRUE(relatively_close(const_e(256), BigReal::parse("2.71828182845904523536028747135266249775724709369995", 256), 1e-45));
  EXPECT_TRUE(relatively_close(const_pi(256), BigReal::parse("3.14159265358979323846264338327950288419716939937510", 256), 1e-45));
}

TEST(BigReal, WidthFollowsTheWiderOperand) {
  BigReal a(1, 100), b(1, 300);
  EXPECT_EQ((a + b).width(), 300);
  a += b;
  EXPECT_EQ(a.width(), 100);
}

TEST(BigReal, Log2AbsOfZeroIsMinusInfinity) {
  EXPECT_TRUE(std::isinf(BigReal(0, 64).log2_abs()));
  EXPECT_DOUBLE_EQ(BigReal(8, 64).log2_abs(), 3.0);
}

TEST(LogMag, CompareAgreesWithRealizedValues) {
  // alpha = 2: exponents are integers and ell1^e is an exact rational
  CantorParams params = CantorParams::parse("2", "1/4");
  gen::for_all(300, 4, [&](gen::Gen& g) {
    LogMag a{Rational(g.integer(0, 40)), g.coin() ? 1 : -1};
    LogMag b{Rational(g.integer(0, 40)), g.coin() ? 1 : -1};
    auto realize = [](const LogMag& m) -> Rational {
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 4, m.exponent.get_num().get_ui());
      return Rational(m.sign, 1) / Rational(den);
    };
    Rational ra = realize(a), rb = realize(b);
    auto want = ra < rb ? std::strong_ordering::less
                        : (ra == rb ? std::strong_ordering::equal : std::strong_ordering::greater);
    EXPECT_EQ(compare(a, b), want);
    EXPECT_EQ(logmag_to_bigreal(a, params, 256), R(ra, 256));
  });
}

TEST(LogMag, ProductAddsExponents) {
  LogMag a{Rational(3, 2), -1}, b{Rational(5, 4), -1};
  LogMag c = a * b;
  EXPECT_EQ(c.exponent, Rational(11, 4));
  EXPECT_EQ(c.sign, 1);
  EXPECT_EQ((c / b).exponent, a.exponent);
}

TEST(RequiredBits, ExactFormula) {
  CantorParams p = CantorParams::parse("2", "1/4");
  // 2^3 * log2(4) + 128
  EXPECT_EQ(required_bits(p, 3), 144);
  EXPECT_EQ(required_bits(p, 3, 0), 16);
}

TEST(Adaptive, ResolvesCancellation) {
  auto f = [](Bits w) {
    BigReal one(1, w);
    BigReal v = (one + ldexp(one, -300)) - one;
    return Estimate{v, BigReal(2, w)};
  };
  AdaptiveResult r = adaptive_eval(f, 1e-30);
  EXPECT_EQ(r.value, ldexp(BigReal(1, 64), -300));
  EXPECT_GT(r.width, 300);
}

TEST(Adaptive, GivesUpOnNoise) {
  // the value changes with every width
  auto f = [](Bits w) { return Estimate{BigReal(w, 64), BigReal(0, 64)}; };
  AdaptiveOptions o;
  o.max_rounds = 3;
  EXPECT_THROW(adaptive_eval(f, 1e-10, o), UnstableComputationError);
}
