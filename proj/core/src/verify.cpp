#include "ppext/verify.hpp"

#include <algorithm>
#include <map>

namespace ppext {
namespace {

constexpr Bits W = kWorkingWidth;

void stamp(Report& r, const CantorParams& params) {
  r.set_parameter("alpha", params.alpha_string());
  r.set_parameter("ell1", params.ell1_string());
}

BigReal realize(const Rational& exponent, const CantorParams& params, Bits width = W) {
  return logmag_to_bigreal(LogMag{exponent, 1}, params, width);
}

// Total exponent of prod l_j^{d_j}.
Rational total_exponent(const DegreeVector& d, const CantorParams& params) {
  Rational t = 0;
  for (std::size_t j = 1; j < d.degrees.size(); ++j) {
    t += Rational(d.degrees[j]) * level_exponent(params, static_cast<int>(j));
  }
  return t;
}

std::uint64_t sibling(std::uint64_t idx) { return idx % 2 == 1 ? idx + 1 : idx - 1; }

const char* kGridNote =
    "grid maxima over Y_{s+d} are lower estimates of the sup over K";

}  // namespace

GridSweepReports grid_sweep(const CantorParams& params, const GridSweepOptions& opt) {
  params.validate();
  if (opt.n_min < 0 || opt.n_max < opt.n_min) throw RangeError("empty degree range");
  if (opt.depth_offset < 0) throw RangeError("negative grid depth offset");
  std::size_t m_max = static_cast<std::size_t>(opt.n_max) + 1;
  std::size_t total = m_max + 1;  // x_{N+2} for the pi bounds
  int depth = top_level(total) + opt.depth_offset;
  LevelData levels = build_levels(params, depth);
  NodeSeq Z = enumerate_nodes(total);
  GridTable T(levels, Z, depth, W);
  std::size_t G = T.grid_size();

  GridSweepReports out;
  for (Report* r : {&out.pi, &out.lemma, &out.lebesgue}) {
    stamp(*r, params);
    r->width_bits = W;
    r->set_parameter("N", std::to_string(opt.n_min) + ".." + std::to_string(opt.n_max));
    r->set_parameter("grid", "Y_{s+" + std::to_string(opt.depth_offset) + "}");
    r->notes.push_back(kGridNote);
  }
  out.pi.statement = "pi-bounds";
  out.pi.title = "product bounds for omega_{N+1} and a_k(x_k)";
  out.lemma.statement = "lemma-max";
  out.lemma.title = "max_K |a_k| <= h0^-N |a_k(x_k)|";
  out.lebesgue.statement = "lebesgue-bound";
  out.lebesgue.title = "Lambda_{N+1} <= h0^-N (N+1)";

  int Lmax = top_level(m_max);
  std::vector<Rational> e(Lmax + 1);
  for (int L = 0; L <= Lmax; ++L) e[L] = level_exponent(params, L);
  std::vector<std::vector<std::uint64_t>> idx(m_max, std::vector<std::uint64_t>(Lmax + 1));
  for (std::size_t i = 0; i < m_max; ++i) {
    for (int L = 0; L <= Lmax; ++L) idx[i][L] = Z.meta[i].address.index_at(L);
  }
  std::vector<std::vector<long>> cnt(Lmax + 1);
  for (int L = 0; L <= Lmax; ++L) cnt[L].assign((std::size_t{1} << L) + 1, 0);

  BigReal h0 = levels.h0().rounded(W);
  std::vector<BigReal> P(G, BigReal(1, W));
  std::vector<std::size_t> hosted(G, 0);
  std::vector<BigReal> invD(G * m_max, BigReal(W));
  std::vector<BigReal> A, invA, maxA;
  std::map<int, std::vector<std::size_t>> grids;
  BigReal v(W), lam(W), tmp(W);

  for (std::size_t m = 1; m <= m_max; ++m) {
    for (std::size_t g = 0; g < G; ++g) {
      const BigReal& d = T.diff(g, m);
      if (d.is_zero()) {
        hosted[g] = m;
      } else {
        mpfr_mul(P[g].get(), P[g].get(), d.get(), MPFR_RNDN);
        mpfr_abs(P[g].get(), P[g].get(), MPFR_RNDN);
        mpfr_ui_div(invD[g * m_max + m - 1].get(), 1, d.get(), MPFR_RNDN);
        mpfr_abs(invD[g * m_max + m - 1].get(), invD[g * m_max + m - 1].get(), MPFR_RNDN);
      }
    }
    for (std::size_t k = 1; k < m; ++k) A[k - 1] *= abs(T.node_diff(k, m));
    BigReal own(1, W);
    for (std::size_t i = 1; i < m; ++i) own *= abs(T.node_diff(m, i));
    A.push_back(own);
    invA.emplace_back(W);
    maxA.emplace_back(W);
    for (int L = 0; L <= Lmax; ++L) ++cnt[L][idx[m - 1][L]];

    long N = static_cast<long>(m) - 1;
    if (N < opt.n_min) continue;
    int s = top_level(m);
    int d = s + opt.depth_offset;
    auto git = grids.find(d);
    if (git == grids.end()) git = grids.emplace(d, T.points_of_type(d)).first;
    const std::vector<std::size_t>& grid = git->second;

    for (std::size_t k = 0; k < m; ++k) {
      mpfr_ui_div(invA[k].get(), 1, A[k].get(), MPFR_RNDN);
      mpfr_set_zero(maxA[k].get(), 1);
    }
    BigReal lam_max(W), omega_max(W);
    for (std::size_t g : grid) {
      std::size_t j = hosted[g];
      if (j != 0 && j <= m) {
        if (mpfr_cmp(P[g].get(), maxA[j - 1].get()) > 0) mpfr_set(maxA[j - 1].get(), P[g].get(), MPFR_RNDN);
        mpfr_mul(lam.get(), P[g].get(), invA[j - 1].get(), MPFR_RNDN);
      } else {
        if (mpfr_cmp(P[g].get(), omega_max.get()) > 0) mpfr_set(omega_max.get(), P[g].get(), MPFR_RNDN);
        mpfr_set_zero(lam.get(), 1);
        const BigReal* inv = &invD[g * m_max];
        for (std::size_t k = 0; k < m; ++k) {
          mpfr_mul(v.get(), P[g].get(), inv[k].get(), MPFR_RNDN);
          if (mpfr_cmp(v.get(), maxA[k].get()) > 0) mpfr_set(maxA[k].get(), v.get(), MPFR_RNDN);
          mpfr_mul(tmp.get(), v.get(), invA[k].get(), MPFR_RNDN);
          mpfr_add(lam.get(), lam.get(), tmp.get(), MPFR_RNDN);
        }
      }
      if (mpfr_cmp(lam.get(), lam_max.get()) > 0) mpfr_set(lam_max.get(), lam.get(), MPFR_RNDN);
    }
    BigReal h0_negN = pow(h0, -N);
    std::string nl = "N=" + std::to_string(N);

    if (opt.lemma) {
      BigReal worst(W);
      std::size_t worst_k = 1;
      for (std::size_t k = 0; k < m; ++k) {
        BigReal r = maxA[k] * invA[k];
        if (r > worst) {
          worst = r;
          worst_k = k + 1;
        }
      }
      Check c = upper_check(nl + " worst k=" + std::to_string(worst_k), worst, h0_negN);
      c.n = N;
      out.lemma.checks.push_back(c);
      out.lemma.grid_depth = std::max(out.lemma.grid_depth, d);
    }
    if (opt.lebesgue) {
      Check c = upper_check(nl, lam_max, h0_negN * static_cast<long>(m));
      c.n = N;
      out.lebesgue.checks.push_back(c);
      out.lebesgue.grid_depth = std::max(out.lebesgue.grid_depth, d);
    }
    if (opt.pi) {
      out.pi.grid_depth = std::max(out.pi.grid_depth, d);
      BigReal prod_lambda = realize(total_exponent(lambda_degrees(m), params), params);
      Check c1 = upper_check(nl + " (i) grid max |omega_{N+1}| <= prod rho", omega_max, prod_lambda);
      c1.n = N;
      out.pi.checks.push_back(c1);
      const BigReal& next = P[T.node_position(m + 1)];
      Check c2 = lower_check(nl + " (ii) |omega_{N+1}(x_{N+2})| >= h0^(N+1) prod l^lambda", next,
                             pow(h0, static_cast<long>(m)) * prod_lambda);
      c2.n = N;
      out.pi.checks.push_back(c2);
      Check c3 = upper_check(nl + " (ii) |omega_{N+1}(x_{N+2})| <= prod l^lambda", next, prod_lambda);
      c3.n = N;
      out.pi.checks.push_back(c3);
      // (iii) with mu from the chain of each x_k
      BigReal lo_ratio(W), hi_ratio(W);
      bool first = true;
      for (std::size_t k = 1; k <= m; ++k) {
        const auto& xi = idx[k - 1];
        Rational E = 0;
        for (int n = 0; n < s; ++n) E += Rational(cnt[n + 1][sibling(xi[n + 1])]) * e[n];
        E += Rational(cnt[s][xi[s]] - 1) * e[s];
        BigReal ratio = A[k - 1] / realize(E, params);
        if (first || ratio < lo_ratio) lo_ratio = ratio;
        if (first || ratio > hi_ratio) hi_ratio = ratio;
        first = false;
      }
      Check c4 = lower_check(nl + " (iii) min_k |a_k(x_k)|/prod l^mu >= h0^N", lo_ratio, pow(h0, N));
      c4.n = N;
      out.pi.checks.push_back(c4);
      Check c5 = upper_check(nl + " (iii) max_k |a_k(x_k)|/prod l^mu <= 1", hi_ratio, BigReal(1, W));
      c5.n = N;
      out.pi.checks.push_back(c5);
    }
  }
  return out;
}

Report verify_pi_bounds(const CantorParams& params, long n_min, long n_max, int depth_offset) {
  return grid_sweep(params, {n_min, n_max, depth_offset, true, false, false}).pi;
}

Report verify_lemma_max(const CantorParams& params, long n_min, long n_max, int depth_offset) {
  return grid_sweep(params, {n_min, n_max, depth_offset, false, true, false}).lemma;
}

Report verify_lebesgue(const CantorParams& params, long n_min, long n_max, int depth_offset) {
  return grid_sweep(params, {n_min, n_max, depth_offset, false, false, true}).lebesgue;
}

Report verify_markov(const CantorParams& params, int s_min, int s_max,
                     const std::vector<int>& p_list, int depth_offset) {
  params.validate();
  if (s_min < 0 || s_max < s_min) throw RangeError("empty level range");
  Report r;
  r.statement = "markov-factor";
  r.title = "h0^(N-p)/(rho_1..rho_p) <= |omega_N^(p)(0)|/|omega_N|_K <= h0^-N (N+1) N^p/(rho_1..rho_p)";
  stamp(r, params);
  r.width_bits = W;
  r.notes.push_back("R uses the concrete polynomial omega_N, so it is a lower estimate of M_N^(p)");
  r.notes.push_back(kGridNote);
  int depth = s_max + depth_offset;
  LevelData levels = build_levels(params, depth);
  BigReal h0 = levels.h0().rounded(W);
  for (int s = s_min; s <= s_max; ++s) {
    std::size_t N = std::size_t{1} << s;
    NodeSeq Z = enumerate_nodes(N);
    int d = s + depth_offset;
    GridTable T(levels, Z, d, W);
    BigReal gmax(W);
    for (std::size_t g = 0; g < T.grid_size(); ++g) {
      BigReal prod(1, W);
      for (std::size_t i = 1; i <= N; ++i) prod *= T.diff(g, i);
      gmax = max(gmax, abs(prod));
    }
    if (gmax.is_zero()) throw RangeError("grid max of |omega_N| vanished");
    int p_top = 0;
    for (int p : p_list) p_top = std::max(p_top, p);
    ProductJet jet(p_top, W);
    for (std::size_t i = 0; i < N; ++i) jet.multiply(-eval_point(Z.points[i], levels, W));
    RhoProfile rho = lambda_profile(N + 1).rho;
    for (int p : p_list) {
      if (p < 1 || static_cast<std::size_t>(p) >= N) continue;
      BigReal R = abs(jet.result().values[p]) / gmax;
      BigReal rho_p = logmag_to_bigreal(p_smallest(rho, p, params), params, W);
      BigReal lower = pow(h0, static_cast<long>(N) - p) / rho_p;
      BigReal upper = pow(h0, -static_cast<long>(N)) * static_cast<long>(N + 1) *
                      pow(BigReal(static_cast<long>(N), W), static_cast<long>(p)) / rho_p;
      std::string lbl = "N=" + std::to_string(N) + " p=" + std::to_string(p);
      Check lo = lower_check(lbl + " lower", R, lower);
      Check hi = upper_check(lbl + " upper", R, upper);
      for (Check* c : {&lo, &hi}) {
        c->n = static_cast<long>(N);
        c->p = p;
        r.checks.push_back(*c);
      }
    }
    r.grid_depth = std::max(r.grid_depth, d);
  }
  return r;
}

NotLejaConstants not_leja_constants(const CantorParams& params) {
  Rational l1 = params.ell1;
  Rational l2 = l1 * l1;  // alpha = 2
  NotLejaConstants c;
  c.sigma = (1 - l1) / (1 - 2 * l1) * (1 - 2 * l1 + l2) / (1 - l1) * (1 - l2) /
            (1 + l1 - 2 * l2);
  c.sigma1 = (1 + c.sigma) / 2;
  c.M = 2 / (l1 * (1 - l2));
  return c;
}

Report verify_not_leja(const CantorParams& params, int s_min, int s_max, int r) {
  CantorParams p = params;
  p.constraint_profile = {Constraint::kAlphaIsTwo, Constraint::kEll1AtMostQuarter};
  p.validate();
  p.require("the non-Leja example");
  if (s_min < 4 || s_max < s_min) throw RangeError("the non-Leja example needs s >= 4");
  Report rep;
  rep.statement = "not-leja";
  rep.title = "|a_k(x_k)|/|a_k(y)| < M sigma1^(2^(s-2)) and |omega_{2^s+2}(x_{2^s+3})| < |omega_{2^s+2}(y)|";
  stamp(rep, params);
  rep.width_bits = W;
  NotLejaConstants c = not_leja_constants(params);
  rep.set_parameter("sigma", rational_string(c.sigma));
  rep.set_parameter("sigma1", rational_string(c.sigma1));
  rep.set_parameter("M", rational_string(c.M));
  rep.set_parameter("r", std::to_string(r));
  {
    Check sc = upper_check("sigma < 1", BigReal::from_rational(c.sigma, W), BigReal(1, W));
    rep.checks.push_back(sc);
  }
  LevelData levels = build_levels(params, s_max + 1);
  long first_bound = -1, first_nonleja = -1, first_power = -1;
  for (int s = s_min; s <= s_max; ++s) {
    std::size_t N = (std::size_t{1} << s) + 2;
    NodeSeq Z = enumerate_nodes(N + 1);
    PointExpr xk = Z[N + 1];
    PointExpr y = PointExpr::level(2) - PointExpr::level(s);
    BigReal ax(1, W), ay(1, W);
    for (std::size_t j = 1; j <= N; ++j) {
      ax *= difference(Locus::at(xk), Z[j], levels, W);
      ay *= difference(Locus::at(y), Z[j], levels, W);
    }
    ax = abs(ax);
    ay = abs(ay);
    BigReal ratio = ax / ay;
    BigReal bound = BigReal::from_rational(c.M, W) *
                    pow(BigReal::from_rational(c.sigma1, W), std::int64_t{1} << (s - 2));
    std::string lbl = "s=" + std::to_string(s);
    Check c1 = upper_check(lbl + " ratio < M sigma1^(2^(s-2))", ratio, bound);
    c1.pass = ratio < bound;
    c1.n = static_cast<long>(N);
    rep.checks.push_back(c1);
    Check c2 = upper_check(lbl + " |omega_N(x_{N+1})| < |omega_N(y)|", ax, ay);
    c2.pass = ax < ay;
    c2.n = static_cast<long>(N);
    rep.checks.push_back(c2);
    BigReal lhs = pow(BigReal(static_cast<long>(N), W), static_cast<long>(r)) * ax;
    Check c3 = upper_check(lbl + " N^r |a_k(x_k)| < |a_k(y)|", lhs, ay);
    c3.pass = lhs < ay;
    c3.asserted = false;
    c3.n = static_cast<long>(N);
    rep.checks.push_back(c3);
    if (c1.pass && first_bound < 0) first_bound = s;
    if (c2.pass && first_nonleja < 0) first_nonleja = s;
    if (c3.pass && first_power < 0) first_power = s;
  }
  auto first_note = [&](const std::string& what, long s) {
    rep.notes.push_back(s < 0 ? what + " not reached in range"
                              : what + " first holds at s=" + std::to_string(s));
  };
  first_note("ratio < M sigma1^(2^(s-2))", first_bound);
  first_note("|omega_N(x_{N+1})| < |omega_N(y)|", first_nonleja);
  first_note("N^r |a_k(x_k)| < |a_k(y)|", first_power);
  return rep;
}

Report verify_leja_trend(const CantorParams& params, long n_max, int depth_offset) {
  params.validate();
  if (n_max < 1) throw RangeError("n_max must be positive");
  Report rep;
  rep.statement = "leja-trend";
  rep.title = "x_{n+1} maximizes |omega_n| on the grid";
  stamp(rep, params);
  rep.width_bits = W;
  std::size_t total = static_cast<std::size_t>(n_max) + 1;
  int depth = top_level(total) + depth_offset;
  rep.grid_depth = depth;
  LevelData levels = build_levels(params, depth);
  NodeSeq Z = enumerate_nodes(total);
  GridTable T(levels, Z, depth, W);
  std::vector<BigReal> P(T.grid_size(), BigReal(1, W));
  std::vector<char> zero(T.grid_size(), 0);
  BigReal slack = BigReal(1, W) + ldexp(BigReal(1, W), -(W - 40));
  long violations = 0;
  std::string first;
  for (long n = 1; n <= n_max; ++n) {
    for (std::size_t g = 0; g < T.grid_size(); ++g) {
      const BigReal& d = T.diff(g, n);
      if (d.is_zero()) zero[g] = 1;
      else P[g] *= abs(d);
    }
    BigReal gmax(W);
    std::size_t arg = 0;
    for (std::size_t g = 0; g < T.grid_size(); ++g) {
      if (!zero[g] && P[g] > gmax) {
        gmax = P[g];
        arg = g;
      }
    }
    const BigReal& at_next = P[T.node_position(n + 1)];
    BigReal ratio = gmax / at_next;
    bool ok = ratio <= slack;
    std::string lbl = "n=" + std::to_string(n);
    if (!ok) lbl += " grid argmax " + to_point(T.address(arg)).to_string();
    Check c = upper_check(lbl, ratio, BigReal(1, W));
    c.pass = ok;
    c.asserted = false;
    c.n = n;
    rep.checks.push_back(c);
    if (!c.pass) {
      if (violations == 0) first = std::to_string(n);
      ++violations;
    }
  }
  rep.notes.push_back(kGridNote);
  rep.notes.push_back(violations == 0 ? "no violations"
                                      : std::to_string(violations) +
                                            " violations, first at n=" + first);
  return rep;
}

Report verify_qqq(const CantorParams& params, const std::vector<long>& n_list,
                  const std::vector<int>& w_list) {
  params.validate();
  Report rep;
  rep.statement = "qqq-lower";
  rep.title = "|omega_{N+1}^(q)(0)| >= h0^(N+1-q) rho_q ... rho_{N+1}";
  stamp(rep, params);
  rep.width_bits = W;
  long n_top = 1;
  for (long n : n_list) n_top = std::max(n_top, n);
  int depth = std::max(1, node_type(static_cast<std::uint64_t>(n_top) + 1));
  LevelData levels = build_levels(params, depth);
  BigReal h0 = levels.h0().rounded(W);
  for (long N : n_list) {
    std::size_t m = static_cast<std::size_t>(N) + 1;
    NodeSeq Z = enumerate_nodes(m);
    RhoProfile rho = lambda_profile(m).rho;
    for (int w : w_list) {
      long q = (1L << w) + 1;
      if (q >= static_cast<long>(m)) continue;
      ProductJet jet(static_cast<int>(q), W);
      for (std::size_t i = 0; i < m; ++i) jet.multiply(-eval_point(Z.points[i], levels, W));
      BigReal lhs = abs(jet.result().values[q]);
      BigReal rhs = pow(h0, static_cast<long>(m) - q) *
                    logmag_to_bigreal(p_removed(rho, q - 1, params), params, W);
      Check c = lower_check("N=" + std::to_string(N) + " q=" + std::to_string(q), lhs, rhs);
      c.n = N;
      c.q = q;
      rep.checks.push_back(c);
    }
  }
  return rep;
}

}  // namespace ppext
