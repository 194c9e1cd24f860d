#pragma once

#include <string>
#include <vector>

#include "ppext/cantor.hpp"
#include "ppext/polyops.hpp"
#include "ppext/report.hpp"

namespace ppext {

// Integer polynomial sum c[i][j] x^i t^j.
class BiPoly {
 public:
  BiPoly() = default;
  static BiPoly term(long c, int i, int j);

  mpz_class coeff(int i, int j) const;
  int degree_x() const;
  int degree_t() const;
  bool is_zero() const;
  BigReal eval(const BigReal& x, const BigReal& t) const;

  BiPoly d_x() const;
  BiPoly d_t() const;
  friend BiPoly operator+(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend bool operator==(const BiPoly& a, const BiPoly& b);

 private:
  void trim();
  std::vector<std::vector<mpz_class>> c_;  // c_[i][j]
};

// Q_k in phi^(k+1) = phi * tau * (x - x^2)^(-2(k+1)) * Q_k(x, tau), tau = exp(-1/x).
// Q_0 = x - 1 - x^2 and
// Q_k = (Q_0 tau + r_k) Q_{k-1} + (x-x^2)^2 dQ_{k-1}/dx + (1-x)^2 tau dQ_{k-1}/dtau,
// r_k = (1-x)^2 + 2k x(1-x)(2x-1).
const BiPoly& q_poly(int k);

BigReal tau(const BigReal& x, Bits width);
// Q_k(x, tau(x)); at x = 1 this is (-1)^(k+1) e^(-k).
BigReal q_value(int k, const BigReal& x, Bits width);

// phi = 1 for x <= 0, 0 for x >= 1, exp(tau(x)/(x-1)) between.
BigReal phi(const BigReal& x, Bits width);
// phi^(k)(x) through Q_{k-1}. The recursion is checked against finite
// differences the first time each order is used.
BigReal phi_deriv(int k, const BigReal& x, Bits width);
// Central finite difference of order k with step h, evaluated at width.
// Uses the 5-point stencil for k = 2.
BigReal phi_deriv_fd(int k, const BigReal& x, const BigReal& h, Bits width);

struct RecursionCheck {
  int k = 0;
  double max_rel_error = 0;
  std::size_t samples = 0;
};

// Compares phi_deriv(k) with phi_deriv_fd at the given points (512-bit
// differences, h = 1e-8). Throws RecursionVerificationError above rel_tol.
RecursionCheck verify_phi_recursion(int k, const std::vector<double>& points,
                                    double rel_tol = 1e-4);

// Gap-adapted cutoff u_delta on [-2, 2]: 1 on K, mirrored bumps in the
// collars of every gap of length >= 2 delta and outside [0, 1], 1 across
// narrower gaps, 0 elsewhere.
class CutoffFn {
 public:
  CutoffFn(const LevelData& levels, BigReal delta);

  const BigReal& delta() const { return delta_; }
  const LevelData& levels() const { return levels_; }

  enum class Region { kCovered, kLeftCollar, kRightCollar, kZero };
  struct Where {
    Region region = Region::kCovered;
    int gap_level = -1;  // -1 for the outer collars
    // collar variable in (0, 1): (x - a)/delta on a left collar,
    // (b - x)/delta on a right collar
    BigReal t;
  };
  Where locate(const Locus& x, Bits width) const;

  // u^(j)(x), j = 0..j_max
  PolyEvalResult eval(const Locus& x, int j_max, Bits width) const;

  // Collars of gaps with length >= 2 delta at levels < depth, as (a, b)
  // pairs of the gap endpoints, plus the outer collars at 0 and 1.
  struct Gap {
    int level;
    PointExpr a;
    PointExpr b;
  };
  std::vector<Gap> wide_gaps() const;

 private:
  LevelData levels_;
  BigReal delta_;
  int last_wide_level_;  // gaps of levels 0..last_wide_level_ have length >= 2 delta
};

// Max over collar samples of |u^(j)| delta^j for j = 0..j_max.
std::vector<BigReal> cutoff_scaling_constants(const CutoffFn& u, int j_max,
                                              int samples_per_collar = 64);

struct ThetaConstants {
  int k = 0;
  BigReal eta_k;
  BigReal eta_km1;
  BigReal theta;
  BigReal A;
  BigReal at1_lhs;
  BigReal at1_rhs;
  bool at1_pass = false;
  // the defining property of eta was confirmed on a fine sample
  bool eta_verified = false;
  std::vector<std::string> notes;
};

// Smallest eta with |Q_k(tau(x)) - Q_k(tau(1))| <= 1/(2e^k) on [eta, 1].
BigReal eta_constant(int k, Bits width, bool* verified = nullptr,
                     std::vector<std::string>* notes = nullptr);
ThetaConstants theta_constants(int k, Bits width = 256);
Report theta_report(int k, Bits width = 256);

}  // namespace ppext
