#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ppext/numerics.hpp"
#include "ppext/params.hpp"

namespace ppext {

// Lengths ell_0..ell_D and gaps h_0..h_{D-1} of the set, realized at a
// fixed width.
class LevelData {
 public:
  LevelData(const CantorParams& params, int depth, Bits width);

  const CantorParams& params() const { return params_; }
  int depth() const { return depth_; }
  Bits width() const { return width_; }

  const BigReal& length(int s) const;
  const LogMag& length_log(int s) const;
  const BigReal& gap(int s) const;
  const BigReal& h0() const { return gap(0); }

  // h_s / ell_s for s < depth.
  std::vector<BigReal> gap_ratios() const;
  bool gap_ratios_nondecreasing() const;

 private:
  CantorParams params_;
  int depth_;
  Bits width_;
  std::vector<BigReal> lengths_;
  std::vector<LogMag> length_logs_;
  std::vector<BigReal> gaps_;
};

// width == 0 selects required_bits(params, depth).
LevelData build_levels(const CantorParams& params, int depth, Bits width = 0);

// Exponent of ell_j in base ell1: alpha^(j-1), and 0 for j = 0.
Rational level_exponent(const CantorParams& params, int j);

// Integer combination sum c_j * ell_j in canonical form (sorted by level,
// no zero coefficients).
class PointExpr {
 public:
  using Term = std::pair<int, long>;

  PointExpr() = default;
  static PointExpr level(int j, long coeff = 1);
  static PointExpr from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int max_level() const { return terms_.empty() ? -1 : terms_.back().first; }
  long coeff(int j) const;

  PointExpr& operator+=(const PointExpr& o);
  PointExpr& operator-=(const PointExpr& o);
  friend PointExpr operator+(PointExpr a, const PointExpr& b) { return a += b; }
  friend PointExpr operator-(PointExpr a, const PointExpr& b) { return a -= b; }
  friend PointExpr operator-(const PointExpr& a);
  friend bool operator==(const PointExpr& a, const PointExpr& b) = default;
  friend auto operator<=>(const PointExpr& a, const PointExpr& b) {
    return a.terms_ <=> b.terms_;
  }

  // e.g. "1 - l1 + l2"
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

// Correctly rounded sum c_j * ell_j at width (exact ell_j up to the
// width of levels).
BigReal eval_point(const PointExpr& x, const LevelData& levels, Bits width);
BigReal eval_point(const PointExpr& x, const LevelData& levels);
// Sign of the realized value; exact for canonical zeros and decided with a
// relative noise floor otherwise.
int sign_of(const PointExpr& x, const LevelData& levels);

enum class Side : std::uint8_t { kLeft, kRight };

// A point of Y_level: the left or right endpoint of I_{index, level}.
struct Address {
  int level = 0;
  std::uint64_t index = 1;
  Side side = Side::kLeft;

  // Index of the basic interval of level L that contains the point.
  std::uint64_t index_at(int L) const;
  friend bool operator==(const Address&, const Address&) = default;
};

PointExpr to_point(const Address& a);

struct BasicInterval {
  std::uint64_t j = 1;
  int s = 0;
  PointExpr a;
  PointExpr b;
};

BasicInterval basic_interval(std::uint64_t j, int s);
BasicInterval basic_interval(std::uint64_t j, int s, const LevelData& levels);

// The 2^(depth+1) endpoints of Y_depth in ascending order.
std::vector<PointExpr> grid(const LevelData& levels, int depth);
std::vector<Address> grid_addresses(int depth);

struct ChainLink {
  std::uint64_t index;
  int level;
  friend bool operator==(const ChainLink&, const ChainLink&) = default;
};

// Chain I_{j,s} in I_{j1,s-1} in ... in [0,1] containing x, listed from level
// s down to level 0. Throws NotInSetError if x misses E_s.
std::vector<ChainLink> locate_chain(const PointExpr& x, const LevelData& levels,
                                    int s);

// Point given as an exact anchor plus a real offset, so that differences
// with nodes keep full relative accuracy.
struct Locus {
  PointExpr anchor;
  BigReal offset{kMinWidth};

  static Locus at(PointExpr p) { return {std::move(p), BigReal(kMinWidth)}; }
  static Locus of(BigReal x) { return {PointExpr(), std::move(x)}; }
  BigReal value(const LevelData& levels, Bits width) const;
};

// x - p at width.
BigReal difference(const Locus& x, const PointExpr& p, const LevelData& levels,
                   Bits width);

}  // namespace ppext
