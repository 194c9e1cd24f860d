#include <algorithm>
#include <cmath>
#include <map>

#include "ppext/nodes.hpp"

namespace ppext {
namespace {

std::uint64_t sibling(std::uint64_t idx) { return idx % 2 == 1 ? idx + 1 : idx - 1; }

long count_in(const NodeSeq& Z, std::size_t k, int level, std::uint64_t idx) {
  long c = 0;
  for (std::size_t i = 0; i < Z.size(); ++i) {
    if (i + 1 == k) continue;
    if (Z.meta[i].address.index_at(level) == idx) ++c;
  }
  return c;
}

}  // namespace

DegreeVector mu_profile(std::size_t k, const NodeSeq& Z) {
  if (k < 1 || k > Z.size()) throw RangeError("node index out of range");
  int s = top_level(Z.size());
  const Address& xk = Z.meta[k - 1].address;
  DegreeVector d;
  d.degrees.assign(s + 1, 0);
  for (int n = 0; n < s; ++n) {
    d.degrees[n] = count_in(Z, k, n + 1, sibling(xk.index_at(n + 1)));
  }
  d.degrees[s] = count_in(Z, k, s, xk.index_at(s));
  return d;
}

DegreeVector nu_profile_for_interval(std::uint64_t interval, std::size_t k,
                                     const NodeSeq& Z) {
  if (k < 1 || k > Z.size()) throw RangeError("node index out of range");
  int s = top_level(Z.size());
  if (interval < 1 || interval > (std::uint64_t{1} << s)) {
    throw RangeError("interval index out of range");
  }
  DegreeVector d;
  d.degrees.assign(s + 1, 0);
  for (int n = 0; n < s; ++n) {
    std::uint64_t chain = ((interval - 1) >> (s - n - 1)) + 1;
    d.degrees[n] = count_in(Z, k, n + 1, sibling(chain));
  }
  d.degrees[s] = count_in(Z, k, s, interval);
  return d;
}

DegreeVector nu_profile(const PointExpr& x, std::size_t k, const NodeSeq& Z,
                        const LevelData& levels) {
  int s = top_level(Z.size());
  auto chain = locate_chain(x, levels, s);
  return nu_profile_for_interval(chain.front().index, k, Z);
}

LogMag product(const RhoProfile& profile, const CantorParams& params) {
  return p_smallest(profile, profile.levels.size(), params);
}

LogMag p_smallest(const RhoProfile& profile, std::size_t p,
                  const CantorParams& params) {
  if (p > profile.levels.size()) throw RangeError("p exceeds profile length");
  std::map<int, Rational> cache;
  LogMag m;
  for (std::size_t i = 0; i < p; ++i) {
    int lvl = profile.levels[i];
    auto it = cache.find(lvl);
    if (it == cache.end()) it = cache.emplace(lvl, level_exponent(params, lvl)).first;
    m.exponent += it->second;
  }
  return m;
}

LogMag p_removed(const RhoProfile& profile, std::size_t p,
                 const CantorParams& params) {
  if (p > profile.levels.size()) throw RangeError("p exceeds profile length");
  return product(profile, params) / p_smallest(profile, p, params);
}

bool ProfileSweepResult::pass() const {
  for (long long f : failures) {
    if (f != 0) return false;
  }
  return true;
}

namespace {

// Merged walk over the breakpoints of two concave piecewise-linear
// functions E_A(p), E_B(p) (sum of the p largest exponents); evaluates
// ok(E_A - E_B) at every breakpoint in [0, p_max].
template <class W, class Pred>
bool walk(const long* A, const long* B, int s, const W* w, long p_max, Pred ok) {
  W D = 0;
  if (!ok(D)) return false;
  int ia = s, ib = s;
  long ra = A[s], rb = B[s];
  long p = 0;
  while (p < p_max) {
    while (ra == 0) ra = A[--ia];
    while (rb == 0) rb = B[--ib];
    long step = std::min({ra, rb, p_max - p});
    D += W(step) * (w[ia] - w[ib]);
    ra -= step;
    rb -= step;
    p += step;
    if (!ok(D)) return false;
  }
  return true;
}

template <class W>
W weighted_total(const long* A, int s, const W* w) {
  W t = 0;
  for (int i = 0; i <= s; ++i) t += W(A[i]) * w[i];
  return t;
}

// (a) sum_{j>=i} mu_j <= sum_{j>=i} lam_j and (e) the same with nu, i >= 1.
bool suffix_dominated(const long* small, const long* big, int s) {
  long a = 0, b = 0;
  for (int i = s; i >= 1; --i) {
    a += small[i];
    b += big[i];
    if (a > b) return false;
  }
  return true;
}

template <class W>
struct CaseKernel {
  int s;
  long N;
  const W* w;

  // (b) _p(lam) <= _p(mu): E_lam(p) >= E_mu(p)
  bool b(const long* lam, const long* mu) const {
    return walk<W>(lam, mu, s, w, N, [](const W& D) { return D >= 0; });
  }
  // (c) (lam)_p <= (mu)_p: T_lam - E_lam >= T_mu - E_mu
  bool c(const long* lam, const long* mu) const {
    W bound = weighted_total<W>(lam, s, w) - weighted_total<W>(mu, s, w);
    return walk<W>(lam, mu, s, w, N, [&](const W& D) { return D <= bound; });
  }
  // (d) (nu)_p <= (mu)_p: E_nu - E_mu <= T_nu - T_mu
  bool d(const long* nu, const long* mu) const {
    W bound = weighted_total<W>(nu, s, w) - weighted_total<W>(mu, s, w);
    return walk<W>(nu, mu, s, w, N, [&](const W& D) { return D <= bound; });
  }
};

struct Weights {
  bool integer = true;
  std::vector<__int128> iw;
  std::vector<Rational> qw;
};

// Integer weights a^(i-1) b^(L-i) when alpha = a/b and everything fits in
// 120 bits; rational weights otherwise.
Weights make_weights(const CantorParams& params, int L, std::uint64_t m_max) {
  Weights w;
  w.qw.assign(L + 1, 0);
  for (int i = 1; i <= L; ++i) w.qw[i] = level_exponent(params, i);
  mpz_class a = params.alpha.get_num(), b = params.alpha.get_den();
  double bits = L * std::log2(std::max(a.get_d(), b.get_d())) +
                std::log2(static_cast<double>(m_max) + 1) * 2 + 4;
  if (bits > 120) {
    w.integer = false;
    return w;
  }
  w.iw.assign(L + 1, 0);
  for (int i = 1; i <= L; ++i) {
    mpz_class v;
    mpz_class ap, bp;
    mpz_pow_ui(ap.get_mpz_t(), a.get_mpz_t(), i - 1);
    mpz_pow_ui(bp.get_mpz_t(), b.get_mpz_t(), L - i);
    v = ap * bp;
    w.iw[i] = static_cast<__int128>(v.get_si());
  }
  return w;
}

template <class W>
void run_sweep(const ProfileSweepOptions& opt,
               const std::vector<W>& weights, ProfileSweepResult& res) {
  NodeSeq Z = enumerate_nodes(opt.m_max);
  int L = top_level(opt.m_max);
  std::vector<std::vector<std::uint64_t>> idx(opt.m_max,
                                              std::vector<std::uint64_t>(L + 1));
  for (std::size_t i = 0; i < opt.m_max; ++i) {
    for (int l = 0; l <= L; ++l) idx[i][l] = Z.meta[i].address.index_at(l);
  }
  std::vector<std::vector<long>> cnt(L + 1);
  for (int l = 0; l <= L; ++l) cnt[l].assign((std::size_t{1} << l) + 1, 0);

  auto note = [&](int which, std::uint64_t m, std::size_t k, std::uint64_t cls) {
    ++res.failures[which];
    if (res.failure_samples.size() < opt.max_failures_kept) {
      res.failure_samples.push_back(res.names[which] + " at N+1=" + std::to_string(m) +
                                    " k=" + std::to_string(k) +
                                    (cls ? " class=" + std::to_string(cls) : ""));
    }
  };

  std::vector<long> lam(L + 1), mu(L + 1), nu(L + 1);
  for (std::uint64_t m = 1; m <= opt.m_max; ++m) {
    for (int l = 0; l <= L; ++l) ++cnt[l][idx[m - 1][l]];
    if (m < std::max<std::uint64_t>(opt.m_min, 2)) continue;
    int s = top_level(m);
    long N = static_cast<long>(m) - 1;
    DegreeVector ld = lambda_degrees(m);
    std::fill(lam.begin(), lam.end(), 0);
    for (int i = 0; i <= s; ++i) lam[i] = ld.degrees[i];
    CaseKernel<W> kern{s, N, weights.data()};
    std::uint64_t classes = std::uint64_t{1} << s;
    for (std::size_t k = 1; k <= m; ++k) {
      const auto& xi = idx[k - 1];
      for (int n = 0; n < s; ++n) mu[n] = cnt[n + 1][sibling(xi[n + 1])];
      mu[s] = cnt[s][xi[s]] - 1;
      res.instances[0] += 1;
      res.instances[1] += 1;
      res.instances[2] += 1;
      if (!suffix_dominated(mu.data(), lam.data(), s)) note(0, m, k, 0);
      if (!kern.b(lam.data(), mu.data())) note(1, m, k, 0);
      if (!kern.c(lam.data(), mu.data())) note(2, m, k, 0);
      for (std::uint64_t c = 1; c <= classes; ++c) {
        for (int n = 0; n < s; ++n) {
          std::uint64_t sib = sibling(((c - 1) >> (s - n - 1)) + 1);
          nu[n] = cnt[n + 1][sib] - (xi[n + 1] == sib ? 1 : 0);
        }
        nu[s] = cnt[s][c] - (xi[s] == c ? 1 : 0);
        res.instances[3] += 1;
        res.instances[4] += 1;
        if (!kern.d(nu.data(), mu.data())) note(3, m, k, c);
        if (!suffix_dominated(mu.data(), nu.data(), s)) note(4, m, k, c);
      }
      res.grid_points_covered += static_cast<long long>(classes) * 8;
    }
  }
}

}  // namespace

ProfileSweepResult sweep_profile_inequalities(const CantorParams& params,
                                              const ProfileSweepOptions& options) {
  if (options.m_max < 2 || options.m_min > options.m_max) {
    throw RangeError("empty N+1 range");
  }
  ProfileSweepResult res;
  res.names = {"(a) mu suffix <= lambda suffix", "(b) _p(lambda) <= _p(mu)",
               "(c) (lambda)_p <= (mu)_p", "(d) (nu)_p <= (mu)_p",
               "(e) mu suffix <= nu suffix"};
  res.instances.assign(5, 0);
  res.failures.assign(5, 0);
  int L = top_level(options.m_max);
  Weights w = make_weights(params, L, options.m_max);
  res.integer_weights = w.integer;
  if (w.integer) {
    run_sweep<__int128>(options, w.iw, res);
  } else {
    run_sweep<Rational>(options, w.qw, res);
  }
  return res;
}

namespace {

// Exponents of the multiset, largest (smallest factor) first.
std::vector<Rational> sorted_exponents(const DegreeVector& d,
                                       const CantorParams& params) {
  std::vector<Rational> e;
  for (int lvl : rho_profile(d).levels) e.push_back(level_exponent(params, lvl));
  return e;
}

Rational top_sum(const std::vector<Rational>& e, std::size_t p) {
  Rational s = 0;
  for (std::size_t i = 0; i < p; ++i) s += e[i];
  return s;
}

Rational total(const std::vector<Rational>& e) { return top_sum(e, e.size()); }

}  // namespace

ProfileCaseResult check_profile_case_bruteforce(const CantorParams& params,
                                                const NodeSeq& Z, std::size_t k,
                                                std::uint64_t interval) {
  std::size_t m = Z.size();
  int s = top_level(m);
  DegreeVector lam = lambda_degrees(m);
  DegreeVector mu = mu_profile(k, Z);
  DegreeVector nu = nu_profile_for_interval(interval, k, Z);
  ProfileCaseResult r;
  long sm = 0, sl = 0, sn = 0;
  for (int i = s; i >= 1; --i) {
    sm += mu[i];
    sl += lam[i];
    sn += nu[i];
    if (sm > sl) r.a = false;
    if (sm > sn) r.e = false;
  }
  auto el = sorted_exponents(lam, params);
  auto em = sorted_exponents(mu, params);
  auto en = sorted_exponents(nu, params);
  Rational tl = total(el), tm = total(em), tn = total(en);
  for (std::size_t p = 0; p + 1 <= m; ++p) {  // p = 0..N
    // product <= product  <=>  exponent >= exponent
    if (top_sum(el, p) < top_sum(em, p)) r.b = false;
    if (tl - top_sum(el, p) < tm - top_sum(em, p)) r.c = false;
    if (tn - top_sum(en, p) < tm - top_sum(em, p)) r.d = false;
  }
  return r;
}

ProfileCaseResult check_profile_case_fast(const CantorParams& params,
                                          const NodeSeq& Z, std::size_t k,
                                          std::uint64_t interval) {
  std::size_t m = Z.size();
  int s = top_level(m);
  DegreeVector lam = lambda_degrees(m);
  DegreeVector mu = mu_profile(k, Z);
  DegreeVector nu = nu_profile_for_interval(interval, k, Z);
  std::vector<Rational> w(s + 1, 0);
  for (int i = 1; i <= s; ++i) w[i] = level_exponent(params, i);
  std::vector<long> l(s + 1), u(s + 1), v(s + 1);
  for (int i = 0; i <= s; ++i) {
    l[i] = lam[i];
    u[i] = mu[i];
    v[i] = nu[i];
  }
  CaseKernel<Rational> kern{s, static_cast<long>(m) - 1, w.data()};
  ProfileCaseResult r;
  r.a = suffix_dominated(u.data(), l.data(), s);
  r.e = suffix_dominated(u.data(), v.data(), s);
  r.b = kern.b(l.data(), u.data());
  r.c = kern.c(l.data(), u.data());
  r.d = kern.d(v.data(), u.data());
  return r;
}

}  // namespace ppext
