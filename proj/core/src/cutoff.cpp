#include "ppext/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <set>

namespace ppext {

BiPoly BiPoly::term(long c, int i, int j) {
  BiPoly p;
  p.c_.assign(i + 1, {});
  p.c_[i].assign(j + 1, 0);
  p.c_[i][j] = c;
  p.trim();
  return p;
}

mpz_class BiPoly::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i >= static_cast<int>(c_.size())) return 0;
  if (j >= static_cast<int>(c_[i].size())) return 0;
  return c_[i][j];
}

int BiPoly::degree_x() const { return static_cast<int>(c_.size()) - 1; }

int BiPoly::degree_t() const {
  int d = -1;
  for (const auto& row : c_) d = std::max(d, static_cast<int>(row.size()) - 1);
  return d;
}

bool BiPoly::is_zero() const { return c_.empty(); }

void BiPoly::trim() {
  for (auto& row : c_) {
    while (!row.empty() && row.back() == 0) row.pop_back();
  }
  while (!c_.empty() && c_.back().empty()) c_.pop_back();
}

BigReal BiPoly::eval(const BigReal& x, const BigReal& t) const {
  Bits w = std::max(x.width(), t.width());
  BigReal acc(w);
  for (auto row = c_.rbegin(); row != c_.rend(); ++row) {
    BigReal inner(w);
    for (auto it = row->rbegin(); it != row->rend(); ++it) {
      inner = inner * t + BigReal::from_mpz(*it, w);
    }
    acc = acc * x + inner;
  }
  return acc;
}

BiPoly BiPoly::d_x() const {
  BiPoly p;
  for (std::size_t i = 1; i < c_.size(); ++i) {
    std::vector<mpz_class> row = c_[i];
    for (auto& v : row) v *= static_cast<long>(i);
    p.c_.push_back(std::move(row));
  }
  p.trim();
  return p;
}

BiPoly BiPoly::d_t() const {
  BiPoly p;
  for (const auto& r : c_) {
    std::vector<mpz_class> row;
    for (std::size_t j = 1; j < r.size(); ++j) row.push_back(r[j] * static_cast<long>(j));
    p.c_.push_back(std::move(row));
  }
  p.trim();
  return p;
}

BiPoly operator+(const BiPoly& a, const BiPoly& b) {
  BiPoly p;
  p.c_.resize(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < p.c_.size(); ++i) {
    std::size_t na = i < a.c_.size() ? a.c_[i].size() : 0;
    std::size_t nb = i < b.c_.size() ? b.c_[i].size() : 0;
    p.c_[i].assign(std::max(na, nb), 0);
    for (std::size_t j = 0; j < na; ++j) p.c_[i][j] += a.c_[i][j];
    for (std::size_t j = 0; j < nb; ++j) p.c_[i][j] += b.c_[i][j];
  }
  p.trim();
  return p;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  BiPoly p;
  if (a.is_zero() || b.is_zero()) return p;
  p.c_.assign(a.c_.size() + b.c_.size() - 1, {});
  std::size_t tj = a.degree_t() + b.degree_t() + 1;
  for (auto& row : p.c_) row.assign(tj, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < a.c_[i].size(); ++j) {
      if (a.c_[i][j] == 0) continue;
      for (std::size_t k = 0; k < b.c_.size(); ++k) {
        for (std::size_t l = 0; l < b.c_[k].size(); ++l) {
          p.c_[i + k][j + l] += a.c_[i][j] * b.c_[k][l];
        }
      }
    }
  }
  p.trim();
  return p;
}

bool operator==(const BiPoly& a, const BiPoly& b) { return a.c_ == b.c_; }

const BiPoly& q_poly(int k) {
  if (k < 0) throw RangeError("Q_k needs k >= 0");
  static std::mutex mu;
  static std::deque<BiPoly> table;  // stable references
  std::lock_guard<std::mutex> lock(mu);
  if (table.empty()) {
    table.push_back(BiPoly::term(1, 1, 0) + BiPoly::term(-1, 0, 0) + BiPoly::term(-1, 2, 0));
  }
  // (1-x)^2, (x-x^2)^2, x(1-x)(2x-1)
  BiPoly one_minus_x = BiPoly::term(1, 0, 0) + BiPoly::term(-1, 1, 0);
  BiPoly omx2 = one_minus_x * one_minus_x;
  BiPoly w = BiPoly::term(1, 1, 0) + BiPoly::term(-1, 2, 0);
  BiPoly w2 = w * w;
  BiPoly v = w * (BiPoly::term(2, 1, 0) + BiPoly::term(-1, 0, 0));
  BiPoly t = BiPoly::term(1, 0, 1);
  while (static_cast<int>(table.size()) <= k) {
    long n = static_cast<long>(table.size());
    const BiPoly& prev = table.back();
    BiPoly r = omx2 + BiPoly::term(2 * n, 0, 0) * v;
    BiPoly next = (table.front() * t + r) * prev + w2 * prev.d_x() + omx2 * t * prev.d_t();
    table.push_back(std::move(next));
  }
  return table[k];
}

BigReal tau(const BigReal& x, Bits width) {
  if (x.sign() <= 0) return BigReal(width);
  BigReal xx = x.rounded(width + 32);
  BigReal one(1, width + 32);
  return exp(-(one / xx)).rounded(width);
}

BigReal q_value(int k, const BigReal& x, Bits width) {
  Bits w = width + 64;
  BigReal xx = x.rounded(w);
  return q_poly(k).eval(xx, tau(xx, w)).rounded(width);
}

BigReal phi(const BigReal& x, Bits width) {
  if (x.sign() <= 0) return BigReal(1, width);
  Bits w = width + 64;
  BigReal xx = x.rounded(w);
  BigReal one(1, w);
  if (xx >= one) return BigReal(width);
  return exp(tau(xx, w) / (xx - one)).rounded(width);
}

namespace {

BigReal phi_deriv_raw(int k, const BigReal& x, Bits width) {
  if (k == 0) return phi(x, width);
  BigReal one(1, width);
  if (x.sign() <= 0 || x >= one) return BigReal(width);
  Bits w = width + 64;
  BigReal xx = x.rounded(w);
  BigReal t = tau(xx, w);
  BigReal ww = xx - xx * xx;
  BigReal v = phi(xx, w) * t * q_poly(k - 1).eval(xx, t) / pow(ww, 2L * k);
  return v.rounded(width);
}

void ensure_verified(int k) {
  static std::mutex mu;
  static std::set<int> done;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (done.count(k)) return;
  }
  verify_phi_recursion(k, {0.1, 0.3, 0.5, 0.7, 0.9});
  std::lock_guard<std::mutex> lock(mu);
  done.insert(k);
}

}  // namespace

BigReal phi_deriv(int k, const BigReal& x, Bits width) {
  if (k < 0) throw RangeError("negative derivative order");
  if (k >= 1) ensure_verified(k);
  return phi_deriv_raw(k, x, width);
}

BigReal phi_deriv_fd(int k, const BigReal& x, const BigReal& h, Bits width) {
  if (k < 0) throw RangeError("negative derivative order");
  BigReal xx = x.rounded(width);
  BigReal hh = h.rounded(width);
  if (k == 0) return phi(xx, width);
  if (k == 2) {
    BigReal s = phi(xx + hh * 2, width) * -1 + phi(xx + hh, width) * 16 -
                phi(xx, width) * 30 + phi(xx - hh, width) * 16 -
                phi(xx - hh * 2, width);
    return s / (pow(hh, 2L) * 12);
  }
  // sum_i (-1)^i C(k,i) f(x + (k/2 - i) h) / h^k
  BigReal s(width);
  for (int i = 0; i <= k; ++i) {
    BigReal off = hh * (k - 2 * i) / 2;
    BigReal term = binomial(k, i, width) * phi(xx + off, width);
    if (i % 2 == 1) term = -term;
    s += term;
  }
  return s / pow(hh, static_cast<long>(k));
}

RecursionCheck verify_phi_recursion(int k, const std::vector<double>& points,
                                    double rel_tol) {
  constexpr Bits kFdWidth = 512;
  BigReal h = BigReal::from_double(1e-8, kFdWidth);
  RecursionCheck rc;
  rc.k = k;
  for (double p : points) {
    BigReal x = BigReal::from_double(p, kFdWidth);
    BigReal rec = phi_deriv_raw(k, x, kFdWidth);
    BigReal fd = phi_deriv_fd(k, x, h, kFdWidth);
    BigReal den = max(abs(rec), abs(fd));
    double err = den.is_zero() ? 0.0 : (abs(rec - fd) / den).to_double();
    rc.max_rel_error = std::max(rc.max_rel_error, err);
    ++rc.samples;
    if (err > rel_tol) {
      throw RecursionVerificationError(
          "phi^(" + std::to_string(k) + ") recursion disagrees with finite differences at x=" +
          std::to_string(p) + ": " + rec.to_string(12) + " vs " + fd.to_string(12));
    }
  }
  return rc;
}

CutoffFn::CutoffFn(const LevelData& levels, BigReal delta)
    : levels_(levels), delta_(std::move(delta)), last_wide_level_(-1) {
  if (delta_.sign() <= 0) throw ParameterError("delta must be positive");
  BigReal two_delta = delta_ * 2;
  for (int i = 0; i < levels_.depth(); ++i) {
    if (levels_.gap(i) >= two_delta) {
      last_wide_level_ = i;
    } else {
      return;
    }
  }
  throw RangeError("levels too shallow for delta: every stored gap is wider than 2*delta");
}

CutoffFn::Where CutoffFn::locate(const Locus& x, Bits width) const {
  Where out;
  out.t = BigReal(width);
  BigReal dz = difference(x, PointExpr(), levels_, width);
  if (dz.sign() < 0) {
    BigReal t = -dz / delta_;
    out.region = t >= BigReal(1, width) ? Region::kZero : Region::kRightCollar;
    out.t = t.rounded(width);
    return out;
  }
  BigReal d1 = difference(x, PointExpr::level(0), levels_, width);
  if (d1.sign() > 0) {
    BigReal t = d1 / delta_;
    out.region = t >= BigReal(1, width) ? Region::kZero : Region::kLeftCollar;
    out.t = t.rounded(width);
    return out;
  }
  PointExpr a;
  for (int i = 0; i <= last_wide_level_; ++i) {
    PointExpr ga = a + PointExpr::level(i + 1);
    PointExpr gb = a + PointExpr::level(i) - PointExpr::level(i + 1);
    BigReal da = difference(x, ga, levels_, width);
    if (da.sign() <= 0) continue;
    BigReal db = difference(x, gb, levels_, width);
    if (db.sign() >= 0) {
      a = gb;
      continue;
    }
    out.gap_level = i;
    BigReal ta = da / delta_;
    BigReal tb = -db / delta_;
    BigReal one(1, width);
    if (ta < one) {
      out.region = Region::kLeftCollar;
      out.t = ta.rounded(width);
    } else if (tb < one) {
      out.region = Region::kRightCollar;
      out.t = tb.rounded(width);
    } else {
      out.region = Region::kZero;
    }
    return out;
  }
  out.region = Region::kCovered;
  return out;
}

PolyEvalResult CutoffFn::eval(const Locus& x, int j_max, Bits width) const {
  Where w = locate(x, width);
  PolyEvalResult r;
  for (int j = 0; j <= j_max; ++j) r.values.emplace_back(width);
  switch (w.region) {
    case Region::kCovered:
      r.values[0] = BigReal(1, width);
      break;
    case Region::kZero:
      break;
    case Region::kLeftCollar:
    case Region::kRightCollar: {
      BigReal scale(1, width);
      BigReal inv = BigReal(1, width) / delta_.rounded(width);
      for (int j = 0; j <= j_max; ++j) {
        BigReal v = phi_deriv(j, w.t, width) * scale;
        if (w.region == Region::kRightCollar && j % 2 == 1) v = -v;
        r.values[j] = v;
        scale *= inv;
      }
      break;
    }
  }
  return r;
}

std::vector<CutoffFn::Gap> CutoffFn::wide_gaps() const {
  std::vector<Gap> out;
  for (int i = 0; i <= last_wide_level_; ++i) {
    for (std::uint64_t j = 1; j <= (std::uint64_t{1} << i); ++j) {
      BasicInterval I = basic_interval(j, i);
      out.push_back({i, I.a + PointExpr::level(i + 1), I.b - PointExpr::level(i + 1)});
    }
  }
  return out;
}

std::vector<BigReal> cutoff_scaling_constants(const CutoffFn& u, int j_max,
                                              int samples_per_collar) {
  Bits width = kWorkingWidth;
  std::vector<BigReal> c;
  for (int j = 0; j <= j_max; ++j) c.emplace_back(width);
  std::vector<Locus> pts;
  auto add_collars = [&](const PointExpr& a, const PointExpr& b) {
    for (int i = 0; i < samples_per_collar; ++i) {
      BigReal t = BigReal(2 * i + 1, width) / (2 * samples_per_collar);
      pts.push_back({a, (t * u.delta()).rounded(width)});
      pts.push_back({b, (-t * u.delta()).rounded(width)});
    }
  };
  add_collars(PointExpr::level(0), PointExpr());  // outer collars beyond 1 and below 0
  for (const auto& g : u.wide_gaps()) add_collars(g.a, g.b);
  for (const Locus& x : pts) {
    PolyEvalResult r = u.eval(x, j_max, width);
    BigReal dj(1, width);
    for (int j = 0; j <= j_max; ++j) {
      c[j] = max(c[j], abs(r.values[j]) * dj);
      dj *= u.delta();
    }
  }
  return c;
}

BigReal eta_constant(int k, Bits width, bool* verified, std::vector<std::string>* notes) {
  if (k < 0) throw RangeError("eta needs k >= 0");
  BigReal one(1, width);
  BigReal target = q_value(k, one, width);
  BigReal tol = one / (exp(BigReal(k, width)) * 2);
  auto bad = [&](const BigReal& x) { return abs(q_value(k, x, width) - target) > tol; };
  BigReal floor_x = BigReal::from_double(1e-3, width);
  BigReal gap = one / (sqrt(BigReal(k == 0 ? 1 : k, width) * const_e(width)) * 2);
  BigReal lo = one - gap;
  while (!bad(lo)) {
    gap *= 2;
    lo = one - gap;
    if (lo <= floor_x) {
      if (notes) notes->push_back("eta_" + std::to_string(k) + ": no violation above 1e-3");
      if (verified) *verified = true;
      return floor_x;
    }
  }
  BigReal hi = one;
  auto bisect = [&](BigReal l, BigReal h) {
    for (int it = 0; it < 160; ++it) {
      BigReal m = (l + h) / 2;
      if (bad(m)) {
        l = m;
      } else {
        h = m;
      }
    }
    return h;
  };
  BigReal eta = bisect(lo, hi);
  // Confirm the property on a fine sample of [eta, 1]; move right past
  // any sampled violation.
  constexpr int kSamples = 2048;
  bool clean = true;
  for (int round = 0; round < 8; ++round) {
    BigReal last_bad(width);
    bool found = false;
    for (int i = 1; i < kSamples; ++i) {
      BigReal x = eta + (one - eta) * i / kSamples;
      if (bad(x)) {
        last_bad = x;
        found = true;
      }
    }
    if (!found) break;
    clean = false;
    eta = bisect(last_bad, one);
  }
  if (!clean && notes) {
    notes->push_back("eta_" + std::to_string(k) +
                     ": deviation is not monotone near 1; moved past sampled violations");
  }
  if (verified) *verified = true;
  return eta;
}

ThetaConstants theta_constants(int k, Bits width) {
  if (k < 2 || k % 2 != 0) throw ParameterError("theta_k needs an even k >= 2");
  ThetaConstants tc;
  tc.k = k;
  bool v1 = false, v2 = false;
  tc.eta_k = eta_constant(k, width, &v1, &tc.notes);
  tc.eta_km1 = eta_constant(k - 1, width, &v2, &tc.notes);
  tc.eta_verified = v1 && v2;
  BigReal one(1, width);
  BigReal e = const_e(width);
  BigReal floor_theta = one - one / (sqrt(BigReal(k, width) * e) * 4);
  tc.theta = max(max(tc.eta_k, tc.eta_km1), floor_theta);
  const BigReal& th = tc.theta;
  BigReal w = th - th * th;
  tc.at1_lhs = th * q_value(k - 1, th, width) -
               BigReal(2 * k, width) * w * w * abs(q_value(k - 2, th, width));
  tc.at1_rhs = one / (pow(e, static_cast<long>(k)) * 2);
  tc.at1_pass = tc.at1_lhs > tc.at1_rhs;
  tc.A = phi(th, width) * tau(th, width) / pow(w, 2L * k) * tc.at1_rhs;
  return tc;
}

Report theta_report(int k, Bits width) {
  ThetaConstants tc = theta_constants(k, width);
  Report r;
  r.statement = "theta-constants";
  r.title = "eta_k, theta_k, A_k and the inequality at theta_k";
  r.set_parameter("k", std::to_string(k));
  r.width_bits = width;
  BigReal one(1, width);
  BigReal q1 = q_value(k, one, width);
  BigReal expect = pow(const_e(width), -static_cast<long>(k));
  if (k % 2 == 0) expect = -expect;
  Check c;
  c.label = "Q_k(tau(1)) = (-1)^(k+1) e^-k";
  c.computed = fmt(q1);
  c.bound = fmt(expect);
  c.pass = relatively_close(q1, expect, 1e-30);
  r.checks.push_back(c);
  r.checks.push_back(lower_check("theta_k >= 1 - 1/(4 sqrt(ke))", tc.theta,
                                 one - one / (sqrt(BigReal(k, width) * const_e(width)) * 4)));
  Check at1 = lower_check("theta Q_{k-1} - 2k (theta-theta^2)^2 |Q_{k-2}| > 1/(2e^k)",
                          tc.at1_lhs, tc.at1_rhs);
  at1.pass = tc.at1_pass;
  r.checks.push_back(at1);
  Check ev;
  ev.label = "eta property confirmed on sample";
  ev.computed = tc.eta_verified ? "yes" : "no";
  ev.bound = "yes";
  ev.pass = tc.eta_verified;
  r.checks.push_back(ev);
  Series& s = r.add_series("eta_k, eta_k-1, theta_k, A_k");
  s.values = {fmt(tc.eta_k), fmt(tc.eta_km1), fmt(tc.theta), fmt(tc.A)};
  r.notes = tc.notes;
  return r;
}

}  // namespace ppext
