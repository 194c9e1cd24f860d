#include "ppext/cantor.hpp"

#include <climits>
#include <algorithm>
#include <map>

namespace ppext {

std::string describe(Constraint c) {
  switch (c) {
    case Constraint::kEll1AtMostQuarter: return "ell1 <= 1/4";
    case Constraint::kEll1AtMostThird: return "ell1 <= 1/3";
    case Constraint::kAlphaIsTwo: return "alpha = 2";
    case Constraint::kAlphaAtLeastTwo: return "alpha >= 2";
    case Constraint::kAlphaAboveTwo: return "alpha > 2";
  }
  return "?";
}

CantorParams CantorParams::parse(std::string_view alpha, std::string_view ell1) {
  CantorParams p{parse_rational(alpha), parse_rational(ell1), {}};
  p.validate();
  return p;
}

void CantorParams::validate() const {
  if (alpha <= 1) {
    throw ParameterError("alpha must exceed 1, got " + alpha_string());
  }
  if (ell1 <= 0 || ell1 >= Rational(1, 2)) {
    throw ParameterError("ell1 must lie in (0, 1/2), got " + ell1_string());
  }
  // 2 ell1^(alpha-1) < 1  <=>  (alpha-1) log2(1/ell1) > 1
  BigReal lhs = BigReal::from_rational(alpha - 1, 256) *
                log2(BigReal::from_rational(1 / ell1, 256));
  if (lhs <= BigReal(1, 256)) {
    throw ParameterError("2*ell1^(alpha-1) < 1 fails for alpha=" +
                         alpha_string() + ", ell1=" + ell1_string());
  }
}

bool CantorParams::satisfies(Constraint c) const {
  switch (c) {
    case Constraint::kEll1AtMostQuarter: return ell1 <= Rational(1, 4);
    case Constraint::kEll1AtMostThird: return ell1 <= Rational(1, 3);
    case Constraint::kAlphaIsTwo: return alpha == 2;
    case Constraint::kAlphaAtLeastTwo: return alpha >= 2;
    case Constraint::kAlphaAboveTwo: return alpha > 2;
  }
  return false;
}

void CantorParams::require(const std::string& statement) const {
  for (Constraint c : constraint_profile) {
    if (!satisfies(c)) {
      throw HypothesisError(statement + " requires " + describe(c) +
                            " (alpha=" + alpha_string() +
                            ", ell1=" + ell1_string() + ")");
    }
  }
}

Rational level_exponent(const CantorParams& params, int j) {
  if (j <= 0) return 0;
  Rational e = 1;
  for (int i = 1; i < j; ++i) e *= params.alpha;
  return e;
}

LevelData::LevelData(const CantorParams& params, int depth, Bits width)
    : params_(params), depth_(depth), width_(std::max(width, kMinWidth)) {
  if (depth < 0) throw RangeError("depth must be nonnegative");
  params_.validate();
  lengths_.reserve(depth + 1);
  length_logs_.reserve(depth + 1);
  for (int s = 0; s <= depth; ++s) {
    LogMag m{level_exponent(params_, s), 1};
    lengths_.push_back(s == 0 ? BigReal(1, width_)
                              : logmag_to_bigreal(m, params_, width_));
    length_logs_.push_back(m);
  }
  for (int s = 0; s < depth; ++s) {
    BigReal h = lengths_[s] - ldexp(lengths_[s + 1], 1);
    if (h.sign() <= 0) throw ParameterError("nonpositive gap at level " + std::to_string(s));
    gaps_.push_back(std::move(h));
  }
}

const BigReal& LevelData::length(int s) const {
  if (s < 0 || s > depth_) {
    throw RangeError("level " + std::to_string(s) + " outside 0.." +
                     std::to_string(depth_));
  }
  return lengths_[s];
}

const LogMag& LevelData::length_log(int s) const {
  if (s < 0 || s > depth_) throw RangeError("level out of range");
  return length_logs_[s];
}

const BigReal& LevelData::gap(int s) const {
  if (s < 0 || s >= depth_) {
    throw RangeError("gap level " + std::to_string(s) + " outside 0.." +
                     std::to_string(depth_ - 1));
  }
  return gaps_[s];
}

std::vector<BigReal> LevelData::gap_ratios() const {
  std::vector<BigReal> out;
  for (int s = 0; s < depth_; ++s) out.push_back(gaps_[s] / lengths_[s]);
  return out;
}

bool LevelData::gap_ratios_nondecreasing() const {
  auto r = gap_ratios();
  for (size_t i = 1; i < r.size(); ++i) {
    if (r[i] < r[i - 1]) return false;
  }
  return true;
}

LevelData build_levels(const CantorParams& params, int depth, Bits width) {
  if (width == 0) width = required_bits(params, depth);
  return LevelData(params, depth, width);
}

PointExpr PointExpr::level(int j, long coeff) {
  PointExpr p;
  if (j < 0) throw RangeError("negative level");
  if (coeff != 0) p.terms_.push_back({j, coeff});
  return p;
}

PointExpr PointExpr::from_terms(std::vector<Term> terms) {
  std::map<int, long> acc;
  for (auto [j, c] : terms) {
    if (j < 0) throw RangeError("negative level");
    acc[j] += c;
  }
  PointExpr p;
  for (auto [j, c] : acc) {
    if (c != 0) p.terms_.push_back({j, c});
  }
  return p;
}

long PointExpr::coeff(int j) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{j, LONG_MIN});
  return it != terms_.end() && it->first == j ? it->second : 0;
}

namespace {

std::vector<PointExpr::Term> merge_terms(const std::vector<PointExpr::Term>& a,
                                         const std::vector<PointExpr::Term>& b,
                                         long sign) {
  std::vector<PointExpr::Term> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, k = 0;
  while (i < a.size() || k < b.size()) {
    if (k == b.size() || (i < a.size() && a[i].first < b[k].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[k].first < a[i].first) {
      out.push_back({b[k].first, sign * b[k].second});
      ++k;
    } else {
      long c = a[i].second + sign * b[k].second;
      if (c != 0) out.push_back({a[i].first, c});
      ++i;
      ++k;
    }
  }
  return out;
}

}  // namespace

PointExpr& PointExpr::operator+=(const PointExpr& o) {
  terms_ = merge_terms(terms_, o.terms_, 1);
  return *this;
}

PointExpr& PointExpr::operator-=(const PointExpr& o) {
  terms_ = merge_terms(terms_, o.terms_, -1);
  return *this;
}

PointExpr operator-(const PointExpr& a) {
  PointExpr r = a;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

std::string PointExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto [j, c] : terms_) {
    long mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    if (j == 0) {
      out += std::to_string(mag);
    } else {
      if (mag != 1) out += std::to_string(mag) + "*";
      out += "l" + std::to_string(j);
    }
  }
  return out;
}

BigReal eval_point(const PointExpr& x, const LevelData& levels, Bits width) {
  if (x.is_zero()) return BigReal(width);
  if (x.max_level() > levels.depth()) {
    throw RangeError("point uses level " + std::to_string(x.max_level()) +
                     " beyond depth " + std::to_string(levels.depth()));
  }
  std::vector<BigReal> parts;
  parts.reserve(x.terms().size());
  for (auto [j, c] : x.terms()) {
    parts.push_back(levels.length(j).rounded(levels.width() + 64) * c);
  }
  std::vector<mpfr_ptr> ptrs;
  for (auto& p : parts) ptrs.push_back(p.get());
  BigReal out(width);
  mpfr_sum(out.get(), ptrs.data(), ptrs.size(), MPFR_RNDN);
  return out;
}

BigReal eval_point(const PointExpr& x, const LevelData& levels) {
  return eval_point(x, levels, levels.width());
}

int sign_of(const PointExpr& x, const LevelData& levels) {
  if (x.is_zero()) return 0;
  BigReal v = eval_point(x, levels);
  BigReal scale(levels.width());
  for (auto [j, c] : x.terms()) scale += abs(levels.length(j) * c);
  if (abs(v) <= ldexp(scale, -(levels.width() - 32))) return 0;
  return v.sign();
}

std::uint64_t Address::index_at(int L) const {
  if (L >= level) {
    int d = L - level;
    return side == Side::kLeft ? ((index - 1) << d) + 1 : index << d;
  }
  return ((index - 1) >> (level - L)) + 1;
}

BasicInterval basic_interval(std::uint64_t j, int s) {
  if (s < 0 || s > 62) throw RangeError("level out of range");
  if (j < 1 || j > (std::uint64_t{1} << s)) {
    throw RangeError("interval index " + std::to_string(j) + " outside 1..2^" +
                     std::to_string(s));
  }
  std::vector<PointExpr::Term> terms;
  std::uint64_t bits = j - 1;
  for (int i = 1; i <= s; ++i) {
    if ((bits >> (s - i)) & 1U) {
      terms.push_back({i - 1, 1});
      terms.push_back({i, -1});
    }
  }
  BasicInterval I;
  I.j = j;
  I.s = s;
  I.a = PointExpr::from_terms(terms);
  I.b = I.a + PointExpr::level(s);
  return I;
}

BasicInterval basic_interval(std::uint64_t j, int s, const LevelData& levels) {
  if (s > levels.depth()) throw RangeError("level beyond depth");
  return basic_interval(j, s);
}

PointExpr to_point(const Address& a) {
  BasicInterval I = basic_interval(a.index, a.level);
  return a.side == Side::kLeft ? I.a : I.b;
}

std::vector<Address> grid_addresses(int depth) {
  if (depth < 0 || depth > 40) throw RangeError("grid depth out of range");
  std::vector<Address> out;
  std::uint64_t n = std::uint64_t{1} << depth;
  out.reserve(2 * n);
  for (std::uint64_t j = 1; j <= n; ++j) {
    out.push_back({depth, j, Side::kLeft});
    out.push_back({depth, j, Side::kRight});
  }
  return out;
}

std::vector<PointExpr> grid(const LevelData& levels, int depth) {
  if (depth > levels.depth()) throw RangeError("grid depth beyond levels");
  std::vector<PointExpr> out;
  for (const Address& a : grid_addresses(depth)) out.push_back(to_point(a));
  return out;
}

std::vector<ChainLink> locate_chain(const PointExpr& x, const LevelData& levels,
                                    int s) {
  if (s > levels.depth()) throw RangeError("chain level beyond depth");
  if (sign_of(x, levels) < 0 || sign_of(x - PointExpr::level(0), levels) > 0) {
    throw NotInSetError("point " + x.to_string() + " outside [0,1]");
  }
  std::vector<ChainLink> chain{{1, 0}};
  PointExpr a;  // left endpoint of the current interval
  std::uint64_t j = 1;
  for (int i = 1; i <= s; ++i) {
    PointExpr left_end = a + PointExpr::level(i);
    PointExpr right_start = a + PointExpr::level(i - 1) - PointExpr::level(i);
    if (sign_of(x - left_end, levels) <= 0) {
      j = 2 * j - 1;
    } else if (sign_of(x - right_start, levels) >= 0) {
      j = 2 * j;
      a = right_start;
    } else {
      throw NotInSetError("point " + x.to_string() + " lies in a gap of level " +
                          std::to_string(i - 1));
    }
    chain.push_back({j, i});
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

BigReal Locus::value(const LevelData& levels, Bits width) const {
  BigReal v = eval_point(anchor, levels, std::max(width, offset.width()));
  v += offset;
  return v.rounded(width);
}

BigReal difference(const Locus& x, const PointExpr& p, const LevelData& levels,
                   Bits width) {
  BigReal d = eval_point(x.anchor - p, levels, width + 64);
  d += x.offset;
  return d.rounded(width);
}

}  // namespace ppext
