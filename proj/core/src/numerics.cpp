#include "ppext/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "ppext/params.hpp"

namespace ppext {
namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

// MPFR keeps the exponent range per thread; widen it once so products of
// many tiny lengths never underflow.
void ensure_exponent_range() {
  thread_local bool done = false;
  if (!done) {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
    done = true;
  }
}

Bits clamp_width(Bits w) {
  if (w > kMaxWidth) {
    throw PrecisionBudgetError("precision budget exceeded: " +
                               std::to_string(w) + " bits requested");
  }
  return std::max(w, kMinWidth);
}

Bits wider(const BigReal& a, const BigReal& b) {
  return std::max(a.width(), b.width());
}

}  // namespace

BigReal::BigReal(Bits width) {
  ensure_exponent_range();
  mpfr_init2(v_, clamp_width(width));
  mpfr_set_zero(v_, 1);
}

BigReal::BigReal(long value, Bits width) : BigReal(width) {
  mpfr_set_si(v_, value, kRnd);
}

BigReal::~BigReal() {
  if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(v_, other.width());
  mpfr_set(v_, other.v_, kRnd);
}

BigReal::BigReal(BigReal&& other) noexcept {
  std::memcpy(v_, other.v_, sizeof(mpfr_t));
  other.v_->_mpfr_d = nullptr;
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this == &other) return *this;
  if (v_->_mpfr_d == nullptr) {
    mpfr_init2(v_, other.width());
  } else if (width() != other.width()) {
    mpfr_set_prec(v_, other.width());
  }
  mpfr_set(v_, other.v_, kRnd);
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this == &other) return *this;
  if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
  std::memcpy(v_, other.v_, sizeof(mpfr_t));
  other.v_->_mpfr_d = nullptr;
  return *this;
}

BigReal BigReal::from_double(double value, Bits width) {
  BigReal r(width);
  mpfr_set_d(r.v_, value, kRnd);
  return r;
}

BigReal BigReal::from_rational(const Rational& q, Bits width) {
  BigReal r(width);
  mpfr_set_q(r.v_, q.get_mpq_t(), kRnd);
  return r;
}

BigReal BigReal::from_mpz(const mpz_class& z, Bits width) {
  BigReal r(width);
  mpfr_set_z(r.v_, z.get_mpz_t(), kRnd);
  return r;
}

BigReal BigReal::parse(std::string_view text, Bits width) {
  return from_rational(parse_rational(text), width);
}

BigReal BigReal::rounded(Bits w) const {
  BigReal r(w);
  mpfr_set(r.v_, v_, kRnd);
  return r;
}

double BigReal::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, v_, kRnd);
  return std::log2(std::fabs(m)) + static_cast<double>(e);
}

std::string BigReal::to_string(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
  if (is_zero()) return "0";
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits),
                           v_, kRnd);
  std::string mant(raw);
  mpfr_free_str(raw);
  std::string out;
  if (mant[0] == '-') {
    out = "-";
    mant.erase(0, 1);
  }
  out += mant.substr(0, 1);
  std::string frac = mant.substr(1);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) out += "." + frac;
  long e = static_cast<long>(exp10) - 1;
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

BigReal& BigReal::operator+=(const BigReal& o) {
  mpfr_add(v_, v_, o.v_, kRnd);
  return *this;
}
BigReal& BigReal::operator-=(const BigReal& o) {
  mpfr_sub(v_, v_, o.v_, kRnd);
  return *this;
}
BigReal& BigReal::operator*=(const BigReal& o) {
  mpfr_mul(v_, v_, o.v_, kRnd);
  return *this;
}
BigReal& BigReal::operator/=(const BigReal& o) {
  mpfr_div(v_, v_, o.v_, kRnd);
  return *this;
}
BigReal& BigReal::operator*=(long o) {
  mpfr_mul_si(v_, v_, o, kRnd);
  return *this;
}
BigReal& BigReal::operator/=(long o) {
  mpfr_div_si(v_, v_, o, kRnd);
  return *this;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(wider(a, b));
  mpfr_add(r.v_, a.v_, b.v_, kRnd);
  return r;
}
BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(wider(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, kRnd);
  return r;
}
BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(wider(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, kRnd);
  return r;
}
BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r(wider(a, b));
  mpfr_div(r.v_, a.v_, b.v_, kRnd);
  return r;
}
BigReal operator*(const BigReal& a, long b) {
  BigReal r(a.width());
  mpfr_mul_si(r.v_, a.v_, b, kRnd);
  return r;
}
BigReal operator/(const BigReal& a, long b) {
  BigReal r(a.width());
  mpfr_div_si(r.v_, a.v_, b, kRnd);
  return r;
}
BigReal operator-(const BigReal& a) {
  BigReal r(a.width());
  mpfr_neg(r.v_, a.v_, kRnd);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

BigReal abs(const BigReal& x) {
  BigReal r(x.width());
  mpfr_abs(r.get(), x.get(), kRnd);
  return r;
}

BigReal exp(const BigReal& x) {
  BigReal r(x.width());
  mpfr_exp(r.get(), x.get(), kRnd);
  return r;
}

BigReal log(const BigReal& x) {
  BigReal r(x.width());
  mpfr_log(r.get(), x.get(), kRnd);
  return r;
}

BigReal log2(const BigReal& x) {
  BigReal r(x.width());
  mpfr_log2(r.get(), x.get(), kRnd);
  return r;
}

BigReal sqrt(const BigReal& x) {
  BigReal r(x.width());
  mpfr_sqrt(r.get(), x.get(), kRnd);
  return r;
}

BigReal pow(const BigReal& x, const BigReal& y) {
  BigReal r(wider(x, y));
  mpfr_pow(r.get(), x.get(), y.get(), kRnd);
  return r;
}

BigReal pow(const BigReal& x, long n) {
  BigReal r(x.width());
  mpfr_pow_si(r.get(), x.get(), n, kRnd);
  return r;
}

BigReal ldexp(const BigReal& x, long e) {
  BigReal r(x.width());
  mpfr_mul_2si(r.get(), x.get(), e, kRnd);
  return r;
}

BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }
BigReal min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }

BigReal const_e(Bits width) {
  BigReal one(1, width);
  return exp(one);
}

BigReal const_pi(Bits width) {
  BigReal r(width);
  mpfr_const_pi(r.get(), kRnd);
  return r;
}

BigReal factorial(long n, Bits width) {
  if (n < 0) throw RangeError("factorial of a negative integer");
  BigReal r(width);
  mpfr_fac_ui(r.get(), static_cast<unsigned long>(n), kRnd);
  return r;
}

BigReal binomial(long n, long k, Bits width) {
  if (k < 0 || k > n) return BigReal(width);
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return BigReal::from_mpz(c, width);
}

bool relatively_close(const BigReal& a, const BigReal& b, double rel) {
  BigReal diff = abs(a - b);
  BigReal ref = max(abs(a), abs(b));
  if (ref.is_zero()) return diff.is_zero();
  return diff <= ref * BigReal::from_double(rel, ref.width());
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&]() -> Rational {
    throw ParameterError("cannot parse rational '" + s + "'");
  };
  if (s.empty()) return fail();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0 ||
        den.set_str(s.substr(slash + 1), 10) != 0 || den == 0) {
      return fail();
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  std::string mant = s;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    try {
      size_t used = 0;
      exp10 = std::stol(s.substr(e + 1), &used);
      if (used != s.size() - e - 1) return fail();
    } catch (const std::exception&) {
      return fail();
    }
  }
  bool negative = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    negative = mant[0] == '-';
    mant.erase(0, 1);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (char c : mant) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits += c;
      if (seen_point) ++frac_digits;
    } else {
      return fail();
    }
  }
  if (digits.empty()) return fail();
  mpz_class num(digits, 10);
  if (negative) num = -num;
  long shift = exp10 - frac_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  Rational q = shift >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  q.canonicalize();
  return q;
}

std::string rational_string(const Rational& q) { return q.get_str(10); }

LogMag operator/(const LogMag& a, const LogMag& b) {
  if (b.sign == 0) throw RangeError("division by a zero LogMag");
  return {a.exponent - b.exponent, a.sign * b.sign};
}

std::strong_ordering compare(const LogMag& a, const LogMag& b) {
  if (a.sign != b.sign) return a.sign <=> b.sign;
  if (a.sign == 0) return std::strong_ordering::equal;
  int c = cmp(a.exponent, b.exponent);
  // Larger exponent = smaller magnitude.
  if (a.sign < 0) c = -c;
  if (c > 0) return std::strong_ordering::less;
  if (c < 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

BigReal logmag_to_bigreal(const LogMag& m, const CantorParams& params,
                          Bits width) {
  if (m.sign == 0) return BigReal(width);
  double log2_ell1 = std::log2(params.ell1.get_d());
  double log2_mag = m.exponent.get_d() * log2_ell1;
  if (log2_mag < static_cast<double>(mpfr_get_emin_min()) + 64 ||
      log2_mag > static_cast<double>(mpfr_get_emax_max()) - 64) {
    throw RangeError("underflow beyond representable range");
  }
  BigReal base = BigReal::from_rational(params.ell1, width + 64);
  BigReal r(width + 64);
  if (m.exponent.get_den() == 1) {
    mpfr_pow_z(r.get(), base.get(), m.exponent.get_num_mpz_t(), kRnd);
  } else {
    BigReal e = BigReal::from_rational(m.exponent, width + 128);
    mpfr_pow(r.get(), base.get(), e.get(), kRnd);
  }
  if (m.sign < 0) r = -r;
  return r.rounded(width);
}

Bits required_bits(const CantorParams& params, int depth, Bits headroom) {
  if (depth < 0) throw RangeError("depth must be nonnegative");
  Rational alpha_pow = 1;
  for (int i = 0; i < depth; ++i) alpha_pow *= params.alpha;
  // log2(1/ell1) to 256 bits; the exact product is then ceiled.
  BigReal inv = BigReal::from_rational(1 / params.ell1, 256);
  BigReal lg = log2(inv);
  BigReal prod = lg * BigReal::from_rational(alpha_pow, 256);
  if (prod.log2_abs() > 62.0) {
    throw PrecisionBudgetError("precision budget exceeded at depth " +
                               std::to_string(depth));
  }
  BigReal c(256);
  mpfr_ceil(c.get(), prod.get());
  long bits = mpfr_get_si(c.get(), kRnd) + headroom;
  if (bits > kMaxWidth) {
    throw PrecisionBudgetError("precision budget exceeded: depth " +
                               std::to_string(depth) + " needs " +
                               std::to_string(bits) + " bits");
  }
  return bits;
}

namespace {

bool below_noise(const Estimate& e, Bits width, Bits guard) {
  if (e.value.is_zero()) return true;
  const BigReal& scale = e.scale.is_zero() ? e.value : e.scale;
  BigReal floor = ldexp(abs(scale), -(width - guard));
  return abs(e.value) <= floor;
}

// 0: not converged, 1: converged to the value, 2: converged to zero.
int agreement(const Estimate& prev, Bits prev_width, const Estimate& cur,
              Bits cur_width, double rel_tol, Bits guard) {
  if (below_noise(prev, prev_width, guard) && below_noise(cur, cur_width, guard)) {
    return 2;
  }
  return relatively_close(prev.value, cur.value, rel_tol) ? 1 : 0;
}

}  // namespace

AdaptiveResult adaptive_eval(const std::function<Estimate(Bits)>& computation,
                             double rel_tol, const AdaptiveOptions& options) {
  AdaptiveVectorResult r = adaptive_eval_all(
      [&](Bits w) { return std::vector<Estimate>{computation(w)}; }, rel_tol,
      options);
  return {std::move(r.values.front()), r.width};
}

AdaptiveVectorResult adaptive_eval_all(
    const std::function<std::vector<Estimate>(Bits)>& computation,
    double rel_tol, const AdaptiveOptions& options) {
  if (!(rel_tol > 0)) throw ParameterError("rel_tol must be positive");
  Bits width = std::max(options.initial_width, kMinWidth);
  std::vector<Estimate> prev = computation(width);
  Bits prev_width = width;
  for (int round = 1; round < options.max_rounds; ++round) {
    width *= 2;
    if (width > kMaxWidth) break;
    std::vector<Estimate> cur = computation(width);
    if (cur.size() != prev.size()) {
      throw ParameterError("adaptive computation changed its output length");
    }
    bool all = true;
    size_t worst = 0;
    std::vector<BigReal> out;
    out.reserve(cur.size());
    for (size_t i = 0; i < cur.size(); ++i) {
      int verdict = agreement(prev[i], prev_width, cur[i], width, rel_tol,
                              options.noise_guard);
      if (verdict == 0) {
        all = false;
        worst = i;
        break;
      }
      out.push_back(verdict == 2 ? BigReal(width) : cur[i].value);
    }
    if (all) return {std::move(out), width};
    if (round + 1 == options.max_rounds || width * 2 > kMaxWidth) {
      throw UnstableComputationError(
          "unstable computation at component " + std::to_string(worst) +
              " after " + std::to_string(width) + " bits",
          prev[worst].value.to_string(), cur[worst].value.to_string());
    }
    prev = std::move(cur);
    prev_width = width;
  }
  throw UnstableComputationError("unstable computation: no escalation room",
                                 prev.empty() ? "" : prev[0].value.to_string(),
                                 "");
}

}  // namespace ppext
