#include "ppext/approx.hpp"

#include <algorithm>
#include <cmath>

namespace ppext {
namespace {

constexpr Bits W = kWorkingWidth;

void stamp(Report& r, const CantorParams& params) {
  r.set_parameter("alpha", params.alpha_string());
  r.set_parameter("ell1", params.ell1_string());
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

}  // namespace

int tail_grid_depth(int n_max, int depth_offset) {
  return top_level(static_cast<std::uint64_t>(std::max(n_max, 1)) + 1) + depth_offset;
}

std::vector<BigReal> omega_grid_max(const CantorParams& params, int n_max, int depth) {
  if (n_max < 0) throw RangeError("negative n_max");
  std::size_t n = static_cast<std::size_t>(std::max(n_max, 1));
  LevelData levels = build_levels(params, depth);
  NodeSeq Z = enumerate_nodes(n);
  GridTable T(levels, Z, depth, W);
  std::vector<BigReal> P(T.grid_size(), BigReal(1, W));
  std::vector<BigReal> out;
  out.emplace_back(1, W);
  for (int k = 1; k <= n_max; ++k) {
    BigReal best(W);
    for (std::size_t g = 0; g < T.grid_size(); ++g) {
      mpfr_mul(P[g].get(), P[g].get(), T.diff(g, k).get(), MPFR_RNDN);
      mpfr_abs(P[g].get(), P[g].get(), MPFR_RNDN);
      if (P[g] > best) best = P[g];
    }
    out.push_back(best);
  }
  return out;
}

TailEstimate en_tail_upper(const NewtonSeries& series, const std::vector<BigReal>& omega_max,
                           int N, int n_tail) {
  if (N < 0 || n_tail < 1) throw RangeError("tail needs N >= 0 and n_tail >= 1");
  int top = N + n_tail;
  if (top > series.n_max() || top >= static_cast<int>(omega_max.size())) {
    throw RangeError("tail window beyond the cached terms");
  }
  TailEstimate t;
  t.N = N;
  t.n_tail = n_tail;
  t.value = BigReal(W);
  BigReal first(W);
  for (int n = N + 1; n <= top; ++n) {
    BigReal term = abs(series.xi(n)).rounded(W) * omega_max[n];
    if (n == N + 1) first = term;
    t.value += term;
    t.last_term = term;
  }
  if (n_tail >= 2 && !first.is_zero() && t.last_term >= first) {
    throw TailNotConvergedError("tail not converged for " + series.id() + " at N=" +
                                std::to_string(N) + ": last term " + fmt(t.last_term) +
                                " >= first " + fmt(first));
  }
  t.truncation_flag =
      !t.value.is_zero() && t.last_term >= ldexp(t.value, -32);
  return t;
}

TailEstimate en_tail_upper(const JetFn& f, const CantorParams& params, int N, int n_tail,
                           int depth_offset) {
  params.validate();
  int top = N + n_tail;
  NewtonSeries series(f, params, top);
  auto om = omega_grid_max(params, top, tail_grid_depth(top, depth_offset));
  return en_tail_upper(series, om, N, n_tail);
}

ExchangeResult en_grid_exchange(const std::vector<BigReal>& x, const std::vector<BigReal>& fx,
                                int N, int max_iterations) {
  if (N < 0) throw RangeError("negative degree");
  std::size_t G = x.size();
  std::size_t m = static_cast<std::size_t>(N) + 2;
  if (fx.size() != G) throw RangeError("grid and values differ in length");
  if (G < m) throw RangeError("grid needs at least N+2 points");
  for (std::size_t g = 1; g < G; ++g) {
    if (!(x[g - 1] < x[g])) throw RangeError("grid must be strictly increasing");
  }
  Bits width = x.front().width();
  if (max_iterations <= 0) max_iterations = 100 * static_cast<int>(m);
  BigReal scale(width);
  for (const BigReal& v : fx) scale = max(scale, abs(v));
  BigReal floor = ldexp(scale, -(width - 16));
  BigReal tol = ldexp(BigReal(1, width), -40);

  std::vector<std::size_t> ref(m);
  for (std::size_t i = 0; i < m; ++i) ref[i] = (i * (G - 1)) / (m - 1);

  std::vector<BigReal> w(m), gv(m), e(G);
  for (int it = 1; it <= max_iterations; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      BigReal prod(1, width);
      for (std::size_t j = 0; j < m; ++j) {
        if (j != i) prod *= x[ref[i]] - x[ref[j]];
      }
      w[i] = BigReal(1, width) / prod;
    }
    BigReal num(width), den(width);
    for (std::size_t i = 0; i < m; ++i) {
      num += w[i] * fx[ref[i]];
      if (i % 2 == 0) den += w[i];
      else den -= w[i];
    }
    BigReal E = num / den;
    for (std::size_t i = 0; i < m; ++i) gv[i] = i % 2 == 0 ? fx[ref[i]] - E : fx[ref[i]] + E;
    // errors f - p over the grid, p by the barycentric formula on the reference
    for (std::size_t g = 0; g < G; ++g) {
      auto hit = std::find(ref.begin(), ref.end(), g);
      if (hit != ref.end()) {
        std::size_t i = hit - ref.begin();
        e[g] = i % 2 == 0 ? E : -E;
        continue;
      }
      BigReal a(width), b(width);
      for (std::size_t i = 0; i < m; ++i) {
        BigReal c = w[i] / (x[g] - x[ref[i]]);
        a += c * gv[i];
        b += c;
      }
      e[g] = fx[g] - a / b;
    }
    std::size_t gs = 0;
    for (std::size_t g = 1; g < G; ++g) {
      if (abs(e[g]) > abs(e[gs])) gs = g;
    }
    BigReal absE = abs(E);
    if (abs(e[gs]) <= absE * (BigReal(1, width) + tol) + floor) {
      return {absE, it, ref};
    }
    int sg = e[gs].sign();
    auto sign_at = [&](std::size_t i) { return e[ref[i]].sign(); };
    if (gs < ref.front()) {
      if (sg == sign_at(0)) {
        ref.front() = gs;
      } else {
        ref.pop_back();
        ref.insert(ref.begin(), gs);
      }
    } else if (gs > ref.back()) {
      if (sg == sign_at(m - 1)) {
        ref.back() = gs;
      } else {
        ref.erase(ref.begin());
        ref.push_back(gs);
      }
    } else {
      std::size_t i = 0;
      while (!(ref[i] < gs && gs < ref[i + 1])) ++i;
      if (sg == sign_at(i)) ref[i] = gs;
      else ref[i + 1] = gs;
    }
  }
  throw ExchangeError("exchange did not settle within " + std::to_string(max_iterations) +
                      " iterations");
}

ExchangeResult en_grid_exchange(const JetFn& f, int N, const std::vector<PointExpr>& grid,
                                const LevelData& levels, Bits width) {
  std::vector<BigReal> x, fx;
  x.reserve(grid.size());
  for (const PointExpr& p : grid) {
    x.push_back(eval_point(p, levels, width));
    fx.push_back(f(x.back()));
  }
  return en_grid_exchange(x, fx, N);
}

ExchangeResult en_grid_exchange(const JetFn& f, const CantorParams& params, int N,
                                int depth_offset) {
  params.validate();
  int depth = tail_grid_depth(N, depth_offset);
  LevelData levels = build_levels(params, depth);
  // the barycentric weights span about N+2 point spacings
  Bits width = std::max<Bits>(256, 2 * levels.width());
  return en_grid_exchange(f, N, grid(levels, depth), levels, width);
}

BigReal whitney_norm(const JetFn& f, int q, NormMode mode, const CantorParams& params,
                     int depth) {
  if (q < 0) throw RangeError("negative Whitney order");
  if (mode == NormMode::kAnalytic) {
    BigReal lo(0, W), hi(1, W);
    BigReal best(W);
    for (int k = 0; k <= q; ++k) best = max(best, f.bound(k, lo, hi).rounded(W));
    return best + const_e(W) * f.bound(q + 1, lo, hi).rounded(W);
  }
  if (q > 16) throw RangeError("empirical Whitney norm needs q <= 16");
  params.validate();
  LevelData levels = build_levels(params, depth);
  Bits width = (q + 2) * required_bits(params, depth);
  std::vector<PointExpr> pts = grid(levels, depth);
  std::size_t G = pts.size();
  std::vector<BigReal> x;
  std::vector<std::vector<BigReal>> D(G);
  BigReal sup_part(width);
  for (std::size_t g = 0; g < G; ++g) {
    x.push_back(eval_point(pts[g], levels, width));
    for (int k = 0; k <= q; ++k) {
      D[g].push_back(f.deriv(k, x.back()));
      sup_part = max(sup_part, abs(D[g].back()));
    }
  }
  BigReal rem_part(width);
  for (std::size_t a = 0; a < G; ++a) {
    for (std::size_t b = 0; b < G; ++b) {
      if (a == b) continue;
      BigReal h = x[a] - x[b];
      BigReal ah = abs(h);
      // Taylor expansion of f^(k) at y = x[b] evaluated at x = x[a]
      for (int k = 0; k <= q; ++k) {
        BigReal t = D[b][q];
        for (int i = q - 1; i >= k; --i) {
          t = D[b][i] + t * h / static_cast<long>(i + 1 - k);
        }
        BigReal r = abs(D[a][k] - t) * pow(ah, static_cast<long>(k - q));
        rem_part = max(rem_part, r);
      }
    }
  }
  return (sup_part + rem_part).rounded(W);
}

Report verify_jackson(const JetFn& f, const CantorParams& params, int w,
                      const std::vector<int>& n_list, int n_tail) {
  CantorParams p = params;
  p.constraint_profile = {Constraint::kAlphaAtLeastTwo, Constraint::kEll1AtMostQuarter};
  p.validate();
  p.require("the Jackson-type estimate");
  if (w < 0 || w > 20) throw RangeError("w out of range");
  if (n_list.empty()) throw RangeError("empty N list");
  long q = 1L << w;
  long q1 = (1L << (w + 8)) + 1;
  Report r;
  r.statement = "jackson";
  r.title = "E_N(f) <= C_q rho_1 ... rho_q ||f||_{q1}";
  stamp(r, params);
  r.set_parameter("f", f.id());
  r.set_parameter("w", std::to_string(w));
  r.set_parameter("q", std::to_string(q));
  r.set_parameter("q1", std::to_string(q1));
  r.set_parameter("N", join(n_list));
  r.set_parameter("n_tail", std::to_string(n_tail));
  r.width_bits = W;
  int n_top = *std::max_element(n_list.begin(), n_list.end());
  int top = n_top + n_tail;
  int depth = tail_grid_depth(top);
  r.grid_depth = depth;
  NewtonSeries series(f, params, top);
  auto om = omega_grid_max(params, top, depth);
  BigReal norm = whitney_norm(f, static_cast<int>(q1), NormMode::kAnalytic, params);
  r.set_parameter("norm_q1", fmt(norm));
  Series& ratios = r.add_series("ratio");
  std::optional<BigReal> prev;
  bool any_flag = false;
  for (int N : n_list) {
    if (N + 1 <= q) throw RangeError("N+1 must exceed q");
    TailEstimate t = en_tail_upper(series, om, N, n_tail);
    any_flag = any_flag || t.truncation_flag;
    BigReal rho = logmag_to_bigreal(p_smallest(lambda_profile(N + 1).rho, q, params),
                                    params, W);
    BigReal ratio = t.value / (rho * norm);
    ratios.values.push_back(fmt(ratio));
    int s = top_level(static_cast<std::uint64_t>(N) + 1);
    std::string lbl = "N=" + std::to_string(N);
    if (w >= s - 8) lbl += " (outside stated hypothesis w < s-8)";
    Check fin;
    fin.label = lbl + " ratio finite";
    fin.computed = fmt(ratio);
    fin.bound = "finite";
    fin.pass = ratio.is_finite();
    fin.n = N;
    fin.q = q;
    r.checks.push_back(fin);
    if (prev) {
      Check mono = upper_check(lbl + " ratio non-increasing", ratio, *prev);
      mono.n = N;
      mono.q = q;
      r.checks.push_back(mono);
    }
    prev = ratio;
  }
  if (any_flag) r.notes.push_back("tail truncation flag raised for some N");
  r.notes.push_back("E_N upper is the truncated tail sum over grid maxima of |omega_n|");
  return r;
}

Report verify_mf_jt(const JetFn& f, const CantorParams& params, int p, int w,
                    const std::vector<int>& n_list, int n_tail) {
  CantorParams cp = params;
  cp.constraint_profile = {Constraint::kAlphaIsTwo, Constraint::kEll1AtMostThird};
  cp.validate();
  cp.require("the Markov-factor/Jackson product estimate");
  if (w < 0 || w > 20) throw RangeError("w out of range");
  long r_ord = 1L << w;
  long r1 = 1L << (w + 10);
  if (p < 1 || r_ord <= p) throw RangeError("needs 1 <= p < r = 2^w");
  if (n_list.empty()) throw RangeError("empty N list");
  Report r;
  r.statement = "mf-jt";
  r.title = "M_N^(p) E_{N-1}(f) <= rho_{p+1} ... rho_r ||f||_{r1}";
  stamp(r, params);
  r.set_parameter("f", f.id());
  r.set_parameter("p", std::to_string(p));
  r.set_parameter("w", std::to_string(w));
  r.set_parameter("r", std::to_string(r_ord));
  r.set_parameter("r1", std::to_string(r1));
  r.set_parameter("N", join(n_list));
  r.width_bits = W;
  int n_top = *std::max_element(n_list.begin(), n_list.end());
  int top = n_top + n_tail;
  int depth = tail_grid_depth(top);
  r.grid_depth = depth;
  NewtonSeries series(f, params, top);
  auto om = omega_grid_max(params, top, depth);
  BigReal norm = whitney_norm(f, static_cast<int>(r1), NormMode::kAnalytic, params);
  LevelData levels = build_levels(params, 1);
  BigReal h0 = levels.h0().rounded(W);
  std::vector<Check> rows;
  for (int N : n_list) {
    if (N < 1 || N + 1 <= r_ord) throw RangeError("N+1 must exceed r");
    RhoProfile rho = lambda_profile(static_cast<std::uint64_t>(N) + 1).rho;
    BigReal rho_p = logmag_to_bigreal(p_smallest(rho, p, params), params, W);
    BigReal markov = pow(h0, -static_cast<long>(N)) * static_cast<long>(N + 1) *
                     pow(BigReal(N, W), static_cast<long>(p)) / rho_p;
    TailEstimate t = en_tail_upper(series, om, N - 1, n_tail);
    BigReal lhs = markov * t.value;
    BigReal rhs = logmag_to_bigreal(p_smallest(rho, r_ord, params) / p_smallest(rho, p, params),
                                    params, W) *
                  norm;
    Check c = upper_check("N=" + std::to_string(N), lhs, rhs);
    c.n = N;
    c.p = p;
    c.q = r_ord;
    rows.push_back(c);
  }
  // N0: first N from which every later row passes
  std::size_t start = rows.size();
  while (start > 0 && rows[start - 1].pass) --start;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i < start) {
      rows[i].asserted = false;
      rows[i].label += " (before threshold)";
    }
    r.checks.push_back(rows[i]);
  }
  Check th;
  th.label = "threshold N0 reached within the list";
  th.pass = start < rows.size();
  th.computed = th.pass ? std::to_string(n_list[start]) : "none";
  th.bound = std::to_string(n_list.back());
  r.checks.push_back(th);
  r.set_parameter("N0", th.computed);
  r.notes.push_back("M_N^(p) replaced by its upper bound h0^-N (N+1) N^p/(rho_1 ... rho_p)");
  return r;
}

}  // namespace ppext
