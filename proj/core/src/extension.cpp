#include "ppext/extension.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>

#include "ppext/approx.hpp"

namespace ppext {
namespace {

constexpr Bits W = kWorkingWidth;

void stamp(Report& r, const CantorParams& params) {
  r.set_parameter("alpha", params.alpha_string());
  r.set_parameter("ell1", params.ell1_string());
}

long choose(int n, int k) {
  long c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// (omega u)^(j) for j = 0..p by Leibniz
std::vector<BigReal> leibniz(const PolyEvalResult& omega, const PolyEvalResult& u, int p) {
  std::vector<BigReal> out;
  for (int j = 0; j <= p; ++j) {
    BigReal s(W);
    for (int l = 0; l <= j; ++l) {
      if (u.values[l].is_zero()) continue;
      s += omega.values[j - l] * u.values[l] * choose(j, l);
    }
    out.push_back(std::move(s));
  }
  return out;
}

PolyEvalResult unit_cutoff(int p) {
  PolyEvalResult r;
  r.values.emplace_back(1, W);
  for (int j = 1; j <= p; ++j) r.values.emplace_back(W);
  return r;
}

bool all_zero(const PolyEvalResult& r) {
  for (const BigReal& v : r.values) {
    if (!v.is_zero()) return false;
  }
  return true;
}

std::vector<Locus> collar_points(const CutoffFn& u, int m) {
  std::vector<Locus> pts;
  auto add = [&](const PointExpr& a, const PointExpr& b) {
    for (int i = 0; i < m; ++i) {
      BigReal t = BigReal(2 * i + 1, W) / (2 * m);
      pts.push_back({a, (t * u.delta()).rounded(W)});
      pts.push_back({b, (-t * u.delta()).rounded(W)});
    }
  };
  add(PointExpr::level(0), PointExpr());
  for (const auto& g : u.wide_gaps()) add(g.a, g.b);
  return pts;
}

void require_two(const CantorParams& params, const std::string& what) {
  CantorParams p = params;
  p.constraint_profile = {Constraint::kAlphaIsTwo, Constraint::kEll1AtMostThird};
  p.validate();
  p.require(what);
}

}  // namespace

int delta_level(int N) {
  if (N < 0) throw RangeError("negative term index");
  return N <= 1 ? 0 : top_level(static_cast<std::uint64_t>(N));
}

struct ExtensionOperator::SupCache {
  std::mutex mu;
  int p_max = -1;
  std::vector<std::vector<BigReal>> table;
};

ExtensionOperator::ExtensionOperator(const JetFn& f, OperatorConfig config)
    : f_(f),
      cfg_(std::move(config)),
      series_(f, cfg_.params, std::max(cfg_.n_max, 0)),
      grid_depth_(top_level(static_cast<std::uint64_t>(std::max(cfg_.n_max, 1)) + 1) +
                  cfg_.depth_offset),
      levels_(build_levels(cfg_.params,
                           std::max(grid_depth_, delta_level(cfg_.n_max) + 1))),
      Z_(enumerate_nodes(static_cast<std::size_t>(cfg_.n_max) + 1)),
      sups_(std::make_shared<SupCache>()) {
  if (cfg_.n_max < 0 || cfg_.p_max < 0) throw RangeError("n_max and p_max must be >= 0");
  if (cfg_.samples_per_collar < 1) throw RangeError("need at least one collar sample");
  for (int s = 0; s <= delta_level(cfg_.n_max); ++s) {
    cutoffs_.emplace_back(levels_, levels_.length(s));
  }
}

ExtensionResult ExtensionOperator::eval(const Locus& x, int p_max) const {
  ExtensionResult r;
  r.x = x;
  for (int j = 0; j <= p_max; ++j) r.values.emplace_back(W);
  ProductJet jet(p_max, W);
  std::optional<PolyEvalResult> u;
  int u_level = -1;
  BigReal total(W);
  for (int N = 0; N <= cfg_.n_max; ++N) {
    if (N > 0) jet.multiply(difference(x, Z_.points[N - 1], levels_, W));
    int s = delta_level(N);
    if (s != u_level) {
      u = cutoffs_[s].eval(x, p_max, W);
      u_level = s;
    }
    BigReal mag(W);
    if (!all_zero(*u)) {
      auto g = leibniz(jet.result(), *u, p_max);
      const BigReal& xi = series_.xi(N);
      for (int j = 0; j <= p_max; ++j) {
        BigReal term = g[j] * xi;
        r.values[j] += term;
        mag = max(mag, abs(term));
      }
    }
    total += mag;
    r.term_magnitudes.push_back(mag);
  }
  const BigReal& last = r.term_magnitudes.back();
  r.converged = total.is_zero() || last <= ldexp(total, -32);
  return r;
}

ExtensionOperator::Sample ExtensionOperator::sample() const {
  Sample out;
  for (const PointExpr& p : grid(levels_, grid_depth_)) out.points.push_back(Locus::at(p));
  out.on_k = out.points.size();
  for (const CutoffFn& u : cutoffs_) {
    auto c = collar_points(u, cfg_.samples_per_collar);
    out.points.insert(out.points.end(), c.begin(), c.end());
  }
  return out;
}

const std::vector<std::vector<BigReal>>& ExtensionOperator::term_sups(int p_req) const {
  std::lock_guard<std::mutex> lock(sups_->mu);
  int p_max = std::max(p_req, cfg_.p_max);
  if (sups_->p_max >= p_req) return sups_->table;
  Sample S = sample();
  std::size_t P = S.points.size();
  std::vector<ProductJet> jets;
  jets.reserve(P);
  for (std::size_t i = 0; i < P; ++i) jets.emplace_back(p_max, W);
  std::vector<PolyEvalResult> u(P);
  std::vector<char> zero(P, 0);
  PolyEvalResult one = unit_cutoff(p_max);
  std::vector<std::vector<BigReal>> T;
  int level = -1;
  for (int N = 0; N <= cfg_.n_max; ++N) {
    int s = delta_level(N);
    if (s != level) {
      for (std::size_t i = 0; i < P; ++i) {
        u[i] = i < S.on_k ? one : cutoffs_[s].eval(S.points[i], p_max, W);
        zero[i] = all_zero(u[i]);
      }
      level = s;
    }
    std::vector<BigReal> row;
    for (int j = 0; j <= p_max; ++j) row.emplace_back(W);
    BigReal xi = abs(series_.xi(N)).rounded(W);
    for (std::size_t i = 0; i < P; ++i) {
      if (N > 0) jets[i].multiply(difference(S.points[i], Z_.points[N - 1], levels_, W));
      if (zero[i] || xi.is_zero()) continue;
      auto g = leibniz(jets[i].result(), u[i], p_max);
      for (int j = 0; j <= p_max; ++j) row[j] = max(row[j], abs(g[j]));
    }
    for (BigReal& v : row) v *= xi;
    T.push_back(std::move(row));
  }
  sups_->table = std::move(T);
  sups_->p_max = p_max;
  return sups_->table;
}

ExtensionResult w_eval(const JetFn& f, const Locus& x, const OperatorConfig& config) {
  return ExtensionOperator(f, config).eval(x, config.p_max);
}

Report verify_term_decay(const JetFn& f, int p, const OperatorConfig& config, int w) {
  require_two(config.params, "the boundedness of the extension operator");
  OperatorConfig cfg = config;
  cfg.p_max = std::max(cfg.p_max, p);
  return verify_term_decay(ExtensionOperator(f, cfg), p, w);
}

Report verify_term_decay(const ExtensionOperator& op, int p, int w) {
  const OperatorConfig& cfg = op.config();
  require_two(cfg.params, "the boundedness of the extension operator");
  if (p < 0) throw RangeError("negative derivative order");
  if (w < 0 || w > 20) throw RangeError("w out of range");
  long r1 = 1L << (w + 10);
  Report r;
  r.statement = "term-decay";
  r.title = "|G_N^(p)| <= ell_s ||f||_{r1} and summability of the terms";
  stamp(r, cfg.params);
  r.set_parameter("f", op.function().id());
  r.set_parameter("p", std::to_string(p));
  r.set_parameter("N_max", std::to_string(cfg.n_max));
  r.set_parameter("r1", std::to_string(r1));
  r.set_parameter("samples_per_collar", std::to_string(cfg.samples_per_collar));
  r.width_bits = W;
  r.grid_depth = op.grid_depth();
  auto T = op.term_sups(p);
  BigReal norm = whitney_norm(op.function(), static_cast<int>(r1), NormMode::kAnalytic, cfg.params);
  r.set_parameter("norm_r1", fmt(norm));

  Series sN{"N", {}}, sd{"delta_N", {}}, sx{"abs_xi", {}}, sT{"term_sup", {}},
      sc{"cumulative", {}};
  BigReal total(W);
  std::vector<Check> rows;
  for (int N = 0; N <= cfg.n_max; ++N) {
    const BigReal& tn = T[N][p];
    total += tn;
    int s = delta_level(N);
    sN.values.push_back(std::to_string(N));
    sd.values.push_back(fmt(op.levels().length(s)));
    sx.values.push_back(fmt(abs(op.series().xi(N))));
    sT.values.push_back(fmt(tn));
    sc.values.push_back(fmt(total));
    Check c = upper_check("N=" + std::to_string(N) + " T_N <= ell_s ||f||_r1", tn,
                          op.levels().length(s).rounded(W) * norm);
    c.n = N;
    c.p = p;
    c.asserted = false;
    rows.push_back(c);
  }
  std::size_t start = rows.size();
  while (start > 0 && rows[start - 1].pass) --start;
  for (auto& c : rows) r.checks.push_back(c);
  r.series = {sN, sd, sx, sT, sc};
  r.set_parameter("N0", start < rows.size() ? std::to_string(start) : "none");

  // decrease past 16
  int from = std::min(16, cfg.n_max);
  long increases = 0;
  int first_increase = -1;
  for (int N = from + 1; N <= cfg.n_max; ++N) {
    if (T[N][p] > T[N - 1][p]) {
      ++increases;
      if (first_increase < 0) first_increase = N;
    }
  }
  Check dec;
  dec.label = "T_N non-increasing for N >= " + std::to_string(from);
  dec.computed = increases == 0 ? "0 increases"
                                : std::to_string(increases) + " increases, first at N=" +
                                      std::to_string(first_increase);
  dec.bound = "0 increases";
  dec.pass = increases == 0;
  dec.p = p;
  dec.asserted = false;
  r.checks.push_back(dec);
  // within a block delta_N is fixed; compare block maxima for 2^s >= 16
  std::vector<BigReal> block;
  for (int s = 4; (1 << s) <= cfg.n_max; ++s) {
    BigReal m(W);
    for (int N = 1 << s; N < (2 << s) && N <= cfg.n_max; ++N) m = max(m, T[N][p]);
    block.push_back(m);
  }
  for (std::size_t i = 1; i < block.size(); ++i) {
    int s = 4 + static_cast<int>(i);
    Check b = upper_check("max T_N over 2^" + std::to_string(s) + " <= N < 2^" +
                              std::to_string(s + 1) + " below the previous block",
                          block[i], block[i - 1]);
    b.pass = block[i] < block[i - 1];
    b.p = p;
    r.checks.push_back(b);
  }
  if (from < cfg.n_max) {
    BigReal later(W);
    for (int N = from + 1; N <= cfg.n_max; ++N) later = max(later, T[N][p]);
    Check c = upper_check("max_{N > " + std::to_string(from) + "} T_N < T_" +
                              std::to_string(from), later, T[from][p]);
    c.pass = later < T[from][p];
    c.p = p;
    r.checks.push_back(c);
  }

  BigReal tail(W);
  for (int N = cfg.n_max / 2 + 1; N <= cfg.n_max; ++N) tail += T[N][p];
  Check cauchy = upper_check("tail sum_{N > N_max/2} T_N < 1e-6 total", tail,
                             total * BigReal::parse("1e-6", W));
  cauchy.p = p;
  r.checks.push_back(cauchy);

  // interpolation at x_1 .. x_{N_max+1}
  BigReal worst(W);
  for (std::size_t k = 1; k <= op.nodes().size(); ++k) {
    ExtensionResult e = op.eval(Locus::at(op.nodes()[k]), 0);
    BigReal fx = op.function()(eval_point(op.nodes()[k], op.levels(), W));
    BigReal err = abs(e.values[0] - fx);
    BigReal rel = fx.is_zero() ? err : err / abs(fx);
    worst = max(worst, rel);
  }
  Check interp = upper_check("W(f)(x_k) = f(x_k) for k <= N_max+1 (relative)", worst,
                             ldexp(BigReal(1, W), -64));
  r.checks.push_back(interp);
  r.notes.push_back("T_N is the max over the K grid and " +
                    std::to_string(cfg.samples_per_collar) +
                    " samples per collar of every cutoff");
  r.notes.push_back("r1 = 2^(w+10) is used as the Sobolev-type order; it is not claimed minimal");
  return r;
}

Report verify_seom(const CantorParams& params, int p, int n_min, int n_max,
                   int samples_per_collar, int depth_offset) {
  require_two(params, "the simultaneous extension estimate");
  if (p < 0 || p > 8) throw RangeError("p out of range");
  n_min = std::max(n_min, 3);
  if (n_max < n_min) throw RangeError("empty n range");
  long q_target = (1L << (2 * p + 6)) + 1;
  auto q_for = [&](int n) {
    if (q_target < n) return q_target;
    long q = 2;
    while ((2 * (q - 1)) + 1 < n) q = 2 * (q - 1) + 1;
    return q;
  };
  int q_max = static_cast<int>(std::max<long>(q_for(n_max), p));
  Report r;
  r.statement = "seom";
  r.title = "|omega~_n|_p <= C |omega_n|_q with delta_n = ell_s";
  stamp(r, params);
  r.set_parameter("p", std::to_string(p));
  r.set_parameter("q", std::to_string(q_target));
  r.set_parameter("n", std::to_string(n_min) + ".." + std::to_string(n_max));
  r.width_bits = W;
  int gdepth = top_level(static_cast<std::uint64_t>(n_max)) + depth_offset;
  int s_top = delta_level(n_max);
  r.grid_depth = gdepth;
  LevelData levels = build_levels(params, std::max(gdepth, s_top + 1));
  NodeSeq Z = enumerate_nodes(static_cast<std::size_t>(n_max));
  std::vector<Locus> kpts;
  for (const PointExpr& x : grid(levels, gdepth)) kpts.push_back(Locus::at(x));
  std::vector<CutoffFn> cut;
  std::vector<Locus> cpts;
  for (int s = 0; s <= s_top; ++s) {
    cut.emplace_back(levels, levels.length(s));
    auto c = collar_points(cut.back(), samples_per_collar);
    cpts.insert(cpts.end(), c.begin(), c.end());
  }
  std::vector<ProductJet> kj, cj;
  for (std::size_t i = 0; i < kpts.size(); ++i) kj.emplace_back(q_max, W);
  for (std::size_t i = 0; i < cpts.size(); ++i) cj.emplace_back(p, W);
  std::vector<PolyEvalResult> cu(cpts.size());
  int level = -1;
  BigReal running(W);
  bool finite = true;
  Series& ratios = r.add_series("ratio");
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t i = 0; i < kpts.size(); ++i) {
      kj[i].multiply(difference(kpts[i], Z.points[n - 1], levels, W));
    }
    for (std::size_t i = 0; i < cpts.size(); ++i) {
      cj[i].multiply(difference(cpts[i], Z.points[n - 1], levels, W));
    }
    if (n < n_min) continue;
    int s = delta_level(n);
    if (s != level) {
      for (std::size_t i = 0; i < cpts.size(); ++i) cu[i] = cut[s].eval(cpts[i], p, W);
      level = s;
    }
    long q = q_for(n);
    BigReal lhs(W), rhs(W);
    for (const ProductJet& j : kj) {
      const auto& v = j.result().values;
      for (int d = 0; d <= p; ++d) lhs = max(lhs, abs(v[d]));
      for (long d = 0; d <= q; ++d) rhs = max(rhs, abs(v[d]));
    }
    for (std::size_t i = 0; i < cpts.size(); ++i) {
      if (all_zero(cu[i])) continue;
      for (const BigReal& g : leibniz(cj[i].result(), cu[i], p)) lhs = max(lhs, abs(g));
    }
    BigReal ratio = lhs / rhs;
    finite = finite && ratio.is_finite() && ratio.sign() > 0;
    running = max(running, ratio);
    std::string lbl = "n=" + std::to_string(n) + " q=" + std::to_string(q);
    if (q != q_target) lbl += " (reduced q)";
    Check c = upper_check(lbl + " ratio vs running max", ratio, running);
    c.n = n;
    c.p = p;
    c.q = q;
    c.asserted = false;
    r.checks.push_back(c);
    ratios.values.push_back(fmt(ratio));
  }
  Check fin;
  fin.label = "all ratios finite and positive";
  fin.computed = finite ? "yes" : "no";
  fin.bound = "yes";
  fin.pass = finite;
  r.checks.push_back(fin);
  r.set_parameter("running_max", fmt(running));
  r.notes.push_back("the K grid is Y_" + std::to_string(gdepth) + " for every n; collars carry " +
                    std::to_string(samples_per_collar) + " samples each");
  return r;
}

int violation_order(const CantorParams& params) {
  if (params.alpha <= 2) throw HypothesisError("the violation example requires alpha > 2");
  Rational t = (2 * params.alpha - 3) / (params.alpha - 2);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  long p = fl.get_si() + 1;
  if (p % 2 == 1) ++p;
  return static_cast<int>(std::max(p, 2L));
}

Report violation_demo(const CantorParams& params, int s_min, int s_max,
                      const std::vector<int>& q_list) {
  CantorParams cp = params;
  cp.constraint_profile = {Constraint::kAlphaAboveTwo};
  cp.validate();
  cp.require("the violation example");
  if (s_min < 1 || s_max < s_min) throw RangeError("empty level range");
  int p = violation_order(params);
  ThetaConstants tc = theta_constants(p);
  Report r;
  r.statement = "violation";
  r.title = "|omega~_N^(p)(z)| / (N^q prod_{k>q} d_k(1)) grows with s";
  stamp(r, params);
  r.set_parameter("p", std::to_string(p));
  r.set_parameter("theta_p", fmt(tc.theta));
  r.width_bits = W;
  std::map<int, std::optional<BigReal>> prev;
  for (int s = s_min; s <= s_max; ++s) {
    std::size_t N = std::size_t{1} << s;
    LevelData levels = build_levels(params, s + 1);
    NodeSeq Z = enumerate_nodes(N);
    CutoffFn u(levels, levels.length(s));
    Locus z{PointExpr::level(0), (tc.theta.rounded(W) * levels.length(s)).rounded(W)};
    PolyEvalResult om = product_derivs(Z.points, z, p, levels, W);
    PolyEvalResult uz = u.eval(z, p, W);
    BigReal lhs = abs(leibniz(om, uz, p)[p]);
    std::vector<BigReal> d;
    for (const PointExpr& x : Z.points) d.push_back(abs(eval_point(PointExpr::level(0) - x, levels, W)));
    std::sort(d.begin(), d.end(), [](const BigReal& a, const BigReal& b) { return a < b; });
    for (int q : q_list) {
      if (q < 1 || static_cast<std::size_t>(q) >= N) continue;
      BigReal den = pow(BigReal(static_cast<long>(N), W), static_cast<long>(q));
      for (std::size_t k = q; k < N; ++k) den *= d[k];
      BigReal ratio = lhs / den;
      std::string lbl = "s=" + std::to_string(s) + " q=" + std::to_string(q);
      Check c;
      c.label = lbl + " ratio";
      c.computed = fmt(ratio);
      c.bound = "-";
      c.n = static_cast<long>(N);
      c.p = p;
      c.q = q;
      c.asserted = false;
      r.checks.push_back(c);
      if (prev[q]) {
        Check g = lower_check(lbl + " ratio grows over s-1", ratio, *prev[q]);
        g.pass = ratio > *prev[q];
        g.n = static_cast<long>(N);
        g.p = p;
        g.q = q;
        g.asserted = false;
        r.checks.push_back(g);
      }
      prev[q] = ratio;
    }
  }
  r.notes.push_back("z = 1 + theta_p ell_s lies in the outer collar where u = phi((x-1)/delta)");
  return r;
}

Report interval_demo(const Rational& eps, const Rational& delta, int samples) {
  if (eps <= 0 || delta <= 0) throw ParameterError("eps and delta must be positive");
  if (samples < 2) throw ParameterError("need at least two samples");
  Report r;
  r.statement = "interval-demo";
  r.title = "K = [-eps, eps], Q = x: C >= max(delta/(4 eps), 1/delta) >= 1/(2 sqrt(eps))";
  r.set_parameter("eps", rational_string(eps));
  r.set_parameter("delta", rational_string(delta));
  r.set_parameter("samples", std::to_string(samples));
  r.width_bits = W;
  if (eps + delta >= 1) {
    Check c;
    c.label = "no constraint: the cutoff does not reach 0 inside I";
    c.computed = rational_string(eps + delta);
    c.bound = "< 1";
    c.asserted = false;
    r.checks.push_back(c);
    return r;
  }
  BigReal e = BigReal::from_rational(eps, W);
  BigReal d = BigReal::from_rational(delta, W);
  BigReal norm0 = e, norm2(W);
  BigReal id = BigReal(1, W) / d;
  // right collar (eps, eps + delta); the left one is its mirror image since Q~ is odd
  for (int i = 0; i < samples; ++i) {
    BigReal t = BigReal(2 * i + 1, W) / (2L * samples);
    BigReal x = e + t * d;
    BigReal v0 = x * phi(t, W);
    BigReal v2 = phi_deriv(1, t, W) * id * 2 + x * phi_deriv(2, t, W) * id * id;
    norm0 = max(norm0, abs(v0));
    norm2 = max(norm2, abs(v2));
  }
  r.checks.push_back(lower_check("|Q~|_0 > delta/4", norm0, d / 4));
  r.checks.back().pass = norm0 > d / 4;
  r.checks.push_back(lower_check("|Q~''|_0 >= 1/delta", norm2, id));
  BigReal implied = max(d / (e * 4), id);
  BigReal sqrt_bound = BigReal(1, W) / (sqrt(e) * 2);
  r.checks.push_back(lower_check("implied C >= 1/(2 sqrt(eps))", implied, sqrt_bound));
  r.set_parameter("implied_C", fmt(implied));
  Check direct;
  direct.label = "C from the measured norms: max(|Q~|_0/eps, |Q~''|_0)";
  direct.computed = fmt(max(norm0 / e, norm2));
  direct.bound = fmt(implied);
  direct.asserted = false;
  direct.pass = max(norm0 / e, norm2) >= implied;
  r.checks.push_back(direct);
  r.notes.push_back("|Q|_{0,K} = eps and |Q|_{2,K} = 1 with n = 1");
  return r;
}

}  // namespace ppext
