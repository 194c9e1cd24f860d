#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <gmpxx.h>
#include <string>
#include <string_view>
#include <vector>

#include "ppext/errors.hpp"

namespace ppext {

using Bits = long;
using Rational = mpq_class;

inline constexpr Bits kMinWidth = 64;
// Width for quantities that are only needed to relative accuracy
// (products of exact point differences, ratios, bounds).
inline constexpr Bits kWorkingWidth = 192;
inline constexpr Bits kDefaultHeadroom = 128;
// Hard ceiling on any requested width.
inline constexpr Bits kMaxWidth = Bits{1} << 24;

// MPFR-backed binary float with an explicit mantissa width. Binary
// operators round to the wider of the two operand widths; compound
// assignment keeps the width of the left operand.
class BigReal {
 public:
  BigReal() : BigReal(kMinWidth) {}
  explicit BigReal(Bits width);
  BigReal(long value, Bits width);
  ~BigReal();

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;

  static BigReal from_double(double value, Bits width);
  static BigReal from_rational(const Rational& q, Bits width);
  static BigReal from_mpz(const mpz_class& z, Bits width);
  // Decimal or "p/q" string, rounded once to width.
  static BigReal parse(std::string_view text, Bits width);

  Bits width() const { return mpfr_get_prec(v_); }
  BigReal rounded(Bits width) const;

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // log2|x| as a double; -inf for zero.
  double log2_abs() const;
  // Scientific notation with the given number of significant digits.
  std::string to_string(int digits = 20) const;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);
  BigReal& operator*=(long o);
  BigReal& operator/=(long o);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, long b);
  friend BigReal operator*(long a, const BigReal& b) { return b * a; }
  friend BigReal operator/(const BigReal& a, long b);
  friend BigReal operator-(const BigReal& a);

  friend bool operator==(const BigReal& a, const BigReal& b) {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);

 private:
  mpfr_t v_;
};

BigReal abs(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log2(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal pow(const BigReal& x, const BigReal& y);
BigReal pow(const BigReal& x, long n);
BigReal ldexp(const BigReal& x, long e);
BigReal max(const BigReal& a, const BigReal& b);
BigReal min(const BigReal& a, const BigReal& b);
BigReal const_e(Bits width);
BigReal const_pi(Bits width);
BigReal factorial(long n, Bits width);
BigReal binomial(long n, long k, Bits width);
// |a - b| <= rel * max(|a|, |b|)
bool relatively_close(const BigReal& a, const BigReal& b, double rel);

// Exact rational from "p/q", an integer, or a decimal literal such as
// "0.25" or "1e-4" (converted exactly, never through a binary float).
Rational parse_rational(std::string_view text);
std::string rational_string(const Rational& q);

// Magnitude ell1^exponent with a sign. A larger exponent means a smaller
// magnitude. Exponents are exact rationals (alpha is rational).
struct LogMag {
  Rational exponent = 0;
  int sign = 1;

  static LogMag one() { return {}; }
  static LogMag zero() { return {Rational(0), 0}; }

  friend LogMag operator*(const LogMag& a, const LogMag& b) {
    return {a.exponent + b.exponent, a.sign * b.sign};
  }
  friend LogMag operator/(const LogMag& a, const LogMag& b);
};

// Orders by signed realized value.
std::strong_ordering compare(const LogMag& a, const LogMag& b);

struct CantorParams;

BigReal logmag_to_bigreal(const LogMag& m, const CantorParams& params,
                          Bits width);

// ceil(alpha^depth * log2(1/ell1)) + headroom
Bits required_bits(const CantorParams& params, int depth,
                   Bits headroom = kDefaultHeadroom);

struct Estimate {
  BigReal value;
  // Sum of absolute summands behind value; drives the noise floor. Zero
  // means "use |value|".
  BigReal scale;
};

struct AdaptiveOptions {
  Bits initial_width = 256;
  int max_rounds = 9;
  // Results below scale * 2^-(width - noise_guard) count as exact zeros.
  Bits noise_guard = 16;
};

struct AdaptiveResult {
  BigReal value;
  Bits width = 0;
};

struct AdaptiveVectorResult {
  std::vector<BigReal> values;
  Bits width = 0;
};

// Doubles the width until two successive results agree to rel_tol.
AdaptiveResult adaptive_eval(const std::function<Estimate(Bits)>& computation,
                             double rel_tol, const AdaptiveOptions& options = {});

AdaptiveVectorResult adaptive_eval_all(
    const std::function<std::vector<Estimate>(Bits)>& computation,
    double rel_tol, const AdaptiveOptions& options = {});

}  // namespace ppext
