#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "ppext/approx.hpp"
#include "ppext/extension.hpp"
#include "ppext/verify.hpp"

namespace ppext::cli {
namespace {

constexpr Bits W = kWorkingWidth;

struct CommandInfo {
  const char* name;
  const char* about;
};

// Order is the order of --help listings.
const std::vector<CommandInfo>& command_table() {
  static const std::vector<CommandInfo> t = {
      {"levels", "level lengths ell_s = ell1^(alpha^(s-1)) and gaps h_s = ell_s - 2 ell_{s+1}"},
      {"nodes", "nodes x_1..x_n by the rule of increase of type; uniform distribution of every level"},
      {"lebesgue", "grid Lebesgue constant Lambda_{N+1} against h0^-N (N+1)"},
      {"markov", "Markov factor |omega_N^(p)(0)| / max_K |omega_N| for any N, with the envelope"},
      {"verify pi", "product bounds: |omega_{N+1}| <= prod rho_k, h0^(N+1) prod l^lambda <= "
                    "|omega_{N+1}(x_{N+2})| <= prod l^lambda, h0^N prod l^mu <= |a_k(x_k)| <= prod l^mu"},
      {"verify lemma-max", "max_K |a_k| <= h0^-N |a_k(x_k)| for every node k"},
      {"verify lebesgue", "Lambda_{N+1} <= h0^-N (N+1)"},
      {"verify markov", "N = 2^s: h0^(N-p)/(rho_1..rho_p) <= |omega_N^(p)(0)|/|omega_N|_K "
                        "<= h0^-N (N+1) N^p/(rho_1..rho_p)"},
      {"verify not-leja", "alpha = 2 example: |omega_{2^s+2}(x_{2^s+3})| < |omega_{2^s+2}(y)|, "
                          "so the rule-ordered nodes are not a Leja sequence"},
      {"verify leja-trend", "does x_{n+1} maximize |omega_n| on the grid (findings)"},
      {"verify qqq", "|omega_{N+1}^(q)(0)| >= h0^(N+1-q) rho_q ... rho_{N+1}, q = 2^w + 1"},
      {"verify jackson", "Jackson-type estimate E_N(f) <= C_q rho_1 ... rho_q ||f||_{q1}, "
                         "q = 2^w, q1 = 2^(w+8) + 1"},
      {"verify mf-jt", "Markov factor times best approximation: M_N^(p) E_{N-1}(f) <= "
                       "rho_{p+1} ... rho_r ||f||_{r1}, r = 2^w, r1 = 2^(w+10)"},
      {"verify seom", "|omega~_n|_p <= C |omega_n|_q for the cut-off Newton polynomials"},
      {"verify term-decay", "terms of the extension operator W: |G_N^(p)| <= ell_s ||f||_{r1}, "
                            "summability and interpolation at the nodes"},
      {"demo interval", "K = [-eps, eps] in [-1, 1]: any extension constant satisfies "
                        "C >= 1/(2 sqrt(eps))"},
      {"demo violation", "alpha > 2: the cut-off Newton polynomials violate the uniform "
                         "estimate, the ratio grows with s"},
      {"extend", "evaluate W(f) and its derivatives at given points"},
  };
  return t;
}

std::string canon_rational(const std::string& text, const char* what) {
  try {
    return rational_string(parse_rational(text));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad ") + what + " '" + text + "': " + e.what());
  }
}

CantorParams params_of(const ExperimentConfig& c) {
  return CantorParams::parse(c.alpha, c.ell1);
}

bool is_demo(const std::string& cmd) { return cmd.rfind("demo ", 0) == 0; }

template <class T>
void default_list(std::vector<T>& v, std::initializer_list<T> d) {
  if (v.empty()) v.assign(d);
}

void default_int(int& v, int d) {
  if (v < 0) v = d;
}

void default_long(long& v, long d) {
  if (v < 0) v = d;
}

// --n overrides a range.
void resolve_range(ExperimentConfig& c, long lo, long hi) {
  if (c.n >= 0) {
    c.n_min = c.n_max = c.n;
    return;
  }
  default_long(c.n_min, lo);
  default_long(c.n_max, hi);
  if (c.n_min > c.n_max) throw ConfigError("n-min exceeds n-max");
}

json check_json(const Check& k) {
  auto opt = [](long v) { return v < 0 ? json(nullptr) : json(v); };
  json j;
  j["label"] = k.label;
  j["N"] = opt(k.n);
  j["p"] = opt(k.p);
  j["q"] = opt(k.q);
  j["computed"] = k.computed;
  j["bound"] = k.bound;
  j["margin_log2"] = k.margin_log2 ? json(*k.margin_log2) : json(nullptr);
  j["pass"] = k.pass;
  j["asserted"] = k.asserted;
  return j;
}

// ---- commands without a core entry point ----

Report run_levels(const ExperimentConfig& c) {
  CantorParams params = params_of(c);
  LevelData L = build_levels(params, c.depth, required_bits(params, c.depth, c.headroom));
  Report r;
  r.statement = "levels";
  r.title = "ell_s = ell1^(alpha^(s-1)), h_s = ell_s - 2 ell_{s+1}";
  r.set_parameter("alpha", params.alpha_string());
  r.set_parameter("ell1", params.ell1_string());
  r.set_parameter("depth", std::to_string(c.depth));
  r.width_bits = L.width();
  Series s{"s", {}}, ell{"ell_s", {}}, gap{"h_s", {}}, ratio{"h_s/ell_s", {}};
  std::vector<BigReal> ratios = L.gap_ratios();
  for (int k = 0; k <= c.depth; ++k) {
    s.values.push_back(std::to_string(k));
    ell.values.push_back(fmt(L.length(k)));
    gap.values.push_back(k < c.depth ? fmt(L.gap(k)) : "");
    ratio.values.push_back(k < c.depth ? fmt(ratios[k]) : "");
  }
  r.series = {s, ell, gap, ratio};
  Check k;
  k.label = "gap ratios h_s/ell_s non-decreasing";
  k.computed = L.gap_ratios_nondecreasing() ? "non-decreasing" : "decreasing somewhere";
  k.bound = "non-decreasing";
  k.pass = L.gap_ratios_nondecreasing();
  k.asserted = false;
  r.checks.push_back(k);
  return r;
}

std::vector<Report> run_nodes(const ExperimentConfig& c) {
  CantorParams params = params_of(c);
  NodeSeq Z = enumerate_nodes(static_cast<std::size_t>(c.n));
  int depth = std::max(Z.max_type(), 1);
  LevelData L = build_levels(params, depth, required_bits(params, depth, c.headroom));
  Report r;
  r.statement = "nodes";
  r.title = "x_1, x_2, ... by the rule of increase of type";
  r.set_parameter("alpha", params.alpha_string());
  r.set_parameter("ell1", params.ell1_string());
  r.set_parameter("n", std::to_string(c.n));
  r.width_bits = L.width();
  Series k{"k", {}}, x{"x_k", {}}, type{"type", {}}, value{"value", {}};
  for (std::size_t i = 1; i <= Z.size(); ++i) {
    k.values.push_back(std::to_string(i));
    x.values.push_back(Z[i].to_string());
    type.values.push_back(std::to_string(Z.meta[i - 1].type));
    value.values.push_back(fmt(eval_point(Z[i], L)));
  }
  r.series = {k, x, type, value};
  Report u = check_uniform(Z);
  u.set_parameter("alpha", params.alpha_string());
  u.set_parameter("ell1", params.ell1_string());
  return {r, u};
}

Report run_lebesgue(const ExperimentConfig& c) {
  CantorParams params = params_of(c);
  int top = top_level(static_cast<std::uint64_t>(c.n_max) + 1) + c.depth_offset;
  LevelData L = build_levels(params, top, required_bits(params, top, c.headroom));
  NodeSeq Z = enumerate_nodes(static_cast<std::size_t>(c.n_max) + 1, L);
  Report r;
  r.statement = "lebesgue-constant";
  r.title = "grid Lambda_{N+1} <= h0^-N (N+1)";
  r.set_parameter("alpha", params.alpha_string());
  r.set_parameter("ell1", params.ell1_string());
  r.set_parameter("depth_offset", std::to_string(c.depth_offset));
  r.width_bits = W;
  r.grid_depth = top;
  std::map<int, std::vector<PointExpr>> grids;
  BigReal h0 = L.h0().rounded(W);
  Series ns{"N", {}}, lam{"Lambda", {}};
  for (long N = c.n_min; N <= c.n_max; ++N) {
    int d = top_level(static_cast<std::uint64_t>(N) + 1) + c.depth_offset;
    auto it = grids.find(d);
    if (it == grids.end()) it = grids.emplace(d, grid(L, d)).first;
    BigReal value = lebesgue_constant(Z.prefix(static_cast<std::size_t>(N) + 1), it->second, L);
    BigReal bound = pow(h0, -N) * (N + 1);
    Check k = upper_check("Lambda_{N+1} <= h0^-N (N+1)", value, bound);
    k.n = N;
    r.checks.push_back(k);
    ns.values.push_back(std::to_string(N));
    lam.values.push_back(fmt(value));
  }
  r.series = {ns, lam};
  return r;
}

Report run_markov(const ExperimentConfig& c) {
  CantorParams params = params_of(c);
  long N = c.n;
  int p_max = *std::max_element(c.p_list.begin(), c.p_list.end());
  int depth = top_level(static_cast<std::uint64_t>(N) + 1) + c.depth_offset;
  LevelData L = build_levels(params, depth, required_bits(params, depth, c.headroom));
  NodeSeq Z = enumerate_nodes(static_cast<std::size_t>(N) + 1, L);
  BigReal gmax(W);
  for (const PointExpr& x : grid(L, depth)) {
    gmax = max(gmax, abs(omega_eval(N, Z, Locus::at(x), 0, L, W)[0]));
  }
  PolyEvalResult at0 = omega_eval(N, Z, Locus::at(PointExpr()), p_max, L, W);
  RhoProfile rho = lambda_profile(static_cast<std::uint64_t>(N) + 1).rho;
  BigReal h0 = L.h0().rounded(W);
  Report r;
  r.statement = "markov-ratio";
  r.title = "|omega_N^(p)(0)| / max_grid |omega_N| against h0^-N (N+1) N^p/(rho_1..rho_p)";
  r.set_parameter("alpha", params.alpha_string());
  r.set_parameter("ell1", params.ell1_string());
  r.set_parameter("grid_max_omega", fmt(gmax));
  r.width_bits = W;
  r.grid_depth = depth;
  for (int p : c.p_list) {
    if (p < 1 || p > N) throw ConfigError("markov needs 1 <= p <= N");
    BigReal ratio = abs(at0[p]) / gmax;
    BigReal rp = logmag_to_bigreal(p_smallest(rho, p, params), params, W);
    BigReal upper = pow(h0, -N) * (N + 1) * pow(BigReal(N, W), p) / rp;
    BigReal lower = pow(h0, N - p) / rp;
    Check hi = upper_check("ratio <= envelope", ratio, upper);
    Check lo = lower_check("ratio >= h0^(N-p)/(rho_1..rho_p)", ratio, lower);
    for (Check* k : {&hi, &lo}) {
      k->n = N;
      k->p = p;
      k->asserted = false;
      r.checks.push_back(*k);
    }
  }
  return r;
}

Locus parse_locus(const std::string& text, const NodeSeq& Z) {
  if (text.rfind("node:", 0) == 0) {
    std::size_t k = 0;
    try {
      k = std::stoul(text.substr(5));
    } catch (const std::exception&) {
      throw ConfigError("bad node reference '" + text + "'");
    }
    if (k < 1 || k > Z.size()) throw ConfigError("node index out of range: " + text);
    return Locus::at(Z[k]);
  }
  try {
    return Locus::of(BigReal::parse(text, W));
  } catch (const std::exception& e) {
    throw ConfigError("bad point '" + text + "': " + e.what());
  }
}

Report run_extend(const ExperimentConfig& c) {
  CantorParams params = params_of(c);
  JetFn f = jet_from_id(c.function, params);
  int p_max = *std::max_element(c.p_list.begin(), c.p_list.end());
  OperatorConfig oc{params, static_cast<int>(c.n_max), p_max, c.depth_offset, 8};
  ExtensionOperator op(f, oc);

  std::vector<std::string> xs = c.x;
  if (xs.empty()) {
    // seeded points in [-1/2, 3/2], exact dyadic rationals
    std::mt19937_64 rng(c.seed);
    for (int i = 0; i < c.samples; ++i) {
      Rational q(static_cast<long>(rng() % ((1UL << 21) + 1)), 1L << 20);
      q -= Rational(1, 2);
      xs.push_back(rational_string(q));
    }
  }

  Report r;
  r.statement = "extend";
  r.title = "W(f) = xi_0 u_{delta_1} + sum_N xi_N omega_N u_{delta_N}";
  r.set_parameter("alpha", params.alpha_string());
  r.set_parameter("ell1", params.ell1_string());
  r.set_parameter("function", f.id());
  r.set_parameter("n_max", std::to_string(c.n_max));
  r.set_parameter("seed", std::to_string(c.seed));
  r.width_bits = W;
  r.grid_depth = op.grid_depth();

  std::vector<Series> cols;
  cols.push_back({"x", {}});
  for (int j = 0; j <= p_max; ++j) cols.push_back({"W^(" + std::to_string(j) + ")", {}});
  for (int j = 0; j <= p_max; ++j) cols.push_back({"f^(" + std::to_string(j) + ")", {}});
  cols.push_back({"last_term", {}});
  for (const std::string& text : xs) {
    Locus x = parse_locus(text, op.nodes());
    ExtensionResult e = op.eval(x, p_max);
    BigReal xv = x.value(op.levels(), W);
    cols[0].values.push_back(text);
    for (int j = 0; j <= p_max; ++j) {
      cols[1 + j].values.push_back(fmt(e.values[j]));
      cols[2 + p_max + j].values.push_back(fmt(f.deriv(j, xv)));
    }
    cols.back().values.push_back(fmt(e.term_magnitudes.back()));
    Check k;
    k.label = "series tail below 2^-32 of the sum at x = " + text;
    k.computed = fmt(e.term_magnitudes.back());
    k.bound = e.converged ? "converged" : "not converged";
    k.pass = e.converged;
    k.asserted = false;
    r.checks.push_back(k);
  }
  r.series = std::move(cols);
  return r;
}

// ---- dispatch ----

std::vector<int> int_list(const std::vector<long>& v) {
  return std::vector<int>(v.begin(), v.end());
}

using Job = std::function<std::vector<Report>()>;

std::vector<Job> plan(const ExperimentConfig& c) {
  const std::string& cmd = c.command;
  std::vector<Job> jobs;
  auto one = [&](std::function<Report()> f) {
    jobs.push_back([f] { return std::vector<Report>{f()}; });
  };

  if (cmd == "levels") {
    one([c] { return run_levels(c); });
  } else if (cmd == "nodes") {
    jobs.push_back([c] { return run_nodes(c); });
  } else if (cmd == "lebesgue") {
    one([c] { return run_lebesgue(c); });
  } else if (cmd == "markov") {
    one([c] { return run_markov(c); });
  } else if (cmd == "verify pi") {
    one([c] { return verify_pi_bounds(params_of(c), c.n_min, c.n_max, c.depth_offset); });
  } else if (cmd == "verify lemma-max") {
    one([c] { return verify_lemma_max(params_of(c), c.n_min, c.n_max, c.depth_offset); });
  } else if (cmd == "verify lebesgue") {
    one([c] { return verify_lebesgue(params_of(c), c.n_min, c.n_max, c.depth_offset); });
  } else if (cmd == "verify markov") {
    one([c] { return verify_markov(params_of(c), c.s_min, c.s_max, c.p_list, c.depth_offset); });
  } else if (cmd == "verify not-leja") {
    one([c] { return verify_not_leja(params_of(c), c.s_min, c.s_max, c.r); });
  } else if (cmd == "verify leja-trend") {
    one([c] { return verify_leja_trend(params_of(c), c.n_max, c.depth_offset); });
  } else if (cmd == "verify qqq") {
    one([c] { return verify_qqq(params_of(c), c.n_list, c.w_list); });
  } else if (cmd == "verify jackson") {
    for (int w : c.w_list) {
      one([c, w] {
        CantorParams params = params_of(c);
        return verify_jackson(jet_from_id(c.function, params), params, w, int_list(c.n_list),
                              c.n_tail);
      });
    }
  } else if (cmd == "verify mf-jt") {
    for (int p : c.p_list) {
      for (int w : c.w_list) {
        one([c, p, w] {
          CantorParams params = params_of(c);
          return verify_mf_jt(jet_from_id(c.function, params), params, p, w, int_list(c.n_list),
                              c.n_tail);
        });
      }
    }
  } else if (cmd == "verify seom") {
    for (int p : c.p_list) {
      one([c, p] {
        return verify_seom(params_of(c), p, static_cast<int>(c.n_min),
                           static_cast<int>(c.n_max), c.samples, c.depth_offset);
      });
    }
  } else if (cmd == "verify term-decay") {
    // one operator, its sup table is shared across p
    jobs.push_back([c] {
      CantorParams params = params_of(c);
      int p_max = *std::max_element(c.p_list.begin(), c.p_list.end());
      OperatorConfig oc{params, static_cast<int>(c.n_max), p_max, c.depth_offset, c.samples};
      ExtensionOperator op(jet_from_id(c.function, params), oc);
      std::vector<Report> out;
      for (int p : c.p_list) out.push_back(verify_term_decay(op, p, c.w_list.front()));
      return out;
    });
  } else if (cmd == "demo interval") {
    one([c] {
      return interval_demo(parse_rational(c.eps), parse_rational(c.delta), c.samples);
    });
  } else if (cmd == "demo violation") {
    one([c] { return violation_demo(params_of(c), c.s_min, c.s_max, c.q_list); });
  } else if (cmd == "extend") {
    one([c] { return run_extend(c); });
  } else {
    throw ConfigError("unknown command '" + cmd + "'");
  }
  return jobs;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : command_table()) v.push_back(e.name);
    return v;
  }();
  return names;
}

std::string describe_command(const std::string& command) {
  for (const auto& e : command_table()) {
    if (command == e.name) return e.about;
  }
  throw ConfigError("unknown command '" + command + "'");
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = c.command;
  j["alpha"] = c.alpha;
  j["ell1"] = c.ell1;
  j["n"] = c.n;
  j["n_min"] = c.n_min;
  j["n_max"] = c.n_max;
  j["n_list"] = c.n_list;
  j["s_min"] = c.s_min;
  j["s_max"] = c.s_max;
  j["p_list"] = c.p_list;
  j["q_list"] = c.q_list;
  j["w_list"] = c.w_list;
  j["r"] = c.r;
  j["depth"] = c.depth;
  j["depth_offset"] = c.depth_offset;
  j["headroom"] = c.headroom;
  j["samples"] = c.samples;
  j["function"] = c.function;
  j["n_tail"] = c.n_tail;
  j["eps"] = c.eps;
  j["delta"] = c.delta;
  j["x"] = c.x;
  j["seed"] = c.seed;
  j["reports_path"] = c.reports_path;
  j["summary_path"] = c.summary_path;
  j["terms_path"] = c.terms_path;
  j["jobs"] = c.jobs;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  std::map<std::string, std::function<void(const json&)>> setters = {
      {"command", [&](const json& v) { v.get_to(c.command); }},
      {"alpha", [&](const json& v) { v.get_to(c.alpha); }},
      {"ell1", [&](const json& v) { v.get_to(c.ell1); }},
      {"n", [&](const json& v) { v.get_to(c.n); }},
      {"n_min", [&](const json& v) { v.get_to(c.n_min); }},
      {"n_max", [&](const json& v) { v.get_to(c.n_max); }},
      {"n_list", [&](const json& v) { v.get_to(c.n_list); }},
      {"s_min", [&](const json& v) { v.get_to(c.s_min); }},
      {"s_max", [&](const json& v) { v.get_to(c.s_max); }},
      {"p_list", [&](const json& v) { v.get_to(c.p_list); }},
      {"q_list", [&](const json& v) { v.get_to(c.q_list); }},
      {"w_list", [&](const json& v) { v.get_to(c.w_list); }},
      {"r", [&](const json& v) { v.get_to(c.r); }},
      {"depth", [&](const json& v) { v.get_to(c.depth); }},
      {"depth_offset", [&](const json& v) { v.get_to(c.depth_offset); }},
      {"headroom", [&](const json& v) { v.get_to(c.headroom); }},
      {"samples", [&](const json& v) { v.get_to(c.samples); }},
      {"function", [&](const json& v) { v.get_to(c.function); }},
      {"n_tail", [&](const json& v) { v.get_to(c.n_tail); }},
      {"eps", [&](const json& v) { v.get_to(c.eps); }},
      {"delta", [&](const json& v) { v.get_to(c.delta); }},
      {"x", [&](const json& v) { v.get_to(c.x); }},
      {"seed", [&](const json& v) { v.get_to(c.seed); }},
      {"reports_path", [&](const json& v) { v.get_to(c.reports_path); }},
      {"summary_path", [&](const json& v) { v.get_to(c.summary_path); }},
      {"terms_path", [&](const json& v) { v.get_to(c.terms_path); }},
      {"jobs", [&](const json& v) { v.get_to(c.jobs); }},
  };
  for (const auto& [key, value] : j.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    try {
      it->second(value);
    } catch (const json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  return c;
}

ExperimentConfig resolve(ExperimentConfig c) {
  describe_command(c.command);  // throws for unknown commands
  c.alpha = canon_rational(c.alpha, "alpha");
  c.ell1 = canon_rational(c.ell1, "ell1");
  c.eps = canon_rational(c.eps, "eps");
  c.delta = canon_rational(c.delta, "delta");
  if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (c.depth_offset < 0) throw ConfigError("depth-offset must be >= 0");
  if (c.headroom < 0) throw ConfigError("headroom must be >= 0");
  if (c.reports_path.empty()) throw ConfigError("reports path must not be empty");

  const std::string& cmd = c.command;
  if (cmd == "levels") {
    default_int(c.depth, 6);
  } else if (cmd == "nodes") {
    default_long(c.n, 8);
    if (c.n < 1) throw ConfigError("nodes needs n >= 1");
  } else if (cmd == "lebesgue") {
    resolve_range(c, 1, 64);
  } else if (cmd == "markov") {
    default_long(c.n, 16);
    default_list(c.p_list, {1, 2, 3, 4});
  } else if (cmd == "verify pi" || cmd == "verify lemma-max" || cmd == "verify lebesgue") {
    resolve_range(c, 1, 256);
  } else if (cmd == "verify markov") {
    default_int(c.s_min, 1);
    default_int(c.s_max, 7);
    default_list(c.p_list, {1, 2, 3, 4});
  } else if (cmd == "verify not-leja") {
    default_int(c.s_min, 6);
    default_int(c.s_max, 10);
    default_int(c.r, 5);
  } else if (cmd == "verify leja-trend") {
    if (c.n >= 0) c.n_max = c.n;
    default_long(c.n_max, 256);
  } else if (cmd == "verify qqq") {
    if (c.n >= 0 && c.n_list.empty()) c.n_list = {c.n};
    default_list(c.n_list, {15L, 31L, 63L, 127L, 255L});
    default_list(c.w_list, {0, 1, 2, 3});
  } else if (cmd == "verify jackson") {
    if (c.n >= 0 && c.n_list.empty()) c.n_list = {c.n};
    default_list(c.n_list, {15L, 31L, 63L, 127L, 255L});
    default_list(c.w_list, {0, 1});
  } else if (cmd == "verify mf-jt") {
    if (c.n >= 0 && c.n_list.empty()) c.n_list = {c.n};
    default_list(c.n_list, {15L, 31L, 63L, 127L, 255L});
    default_list(c.p_list, {1});
    default_list(c.w_list, {2});
  } else if (cmd == "verify seom") {
    resolve_range(c, 2, 32);
    default_list(c.p_list, {0, 1});
    default_int(c.samples, 8);
  } else if (cmd == "verify term-decay") {
    if (c.n >= 0) c.n_max = c.n;
    default_long(c.n_max, 255);
    default_list(c.p_list, {0, 1, 2});
    default_list(c.w_list, {3});
    default_int(c.samples, 8);
  } else if (cmd == "demo interval") {
    default_int(c.samples, 10000);
  } else if (cmd == "demo violation") {
    default_int(c.s_min, 4);
    default_int(c.s_max, 6);
    default_list(c.q_list, {3, 5});
  } else if (cmd == "extend") {
    if (c.n >= 0) c.n_max = c.n;
    default_long(c.n_max, 255);
    default_list(c.p_list, {2});
    default_int(c.samples, 8);
  }
  for (int p : c.p_list) {
    if (p < 0) throw ConfigError("p must be >= 0");
  }
  return c;
}

json report_to_json(const Report& r, const ExperimentConfig& c) {
  json j;
  j["statement"] = r.statement;
  j["title"] = r.title;
  j["pass"] = r.pass();
  j["failures"] = r.failures();
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j["parameters"] = params;
  j["width_bits"] = r.width_bits;
  j["grid_depth"] = r.grid_depth < 0 ? json(nullptr) : json(r.grid_depth);
  json checks = json::array();
  for (const Check& k : r.checks) checks.push_back(check_json(k));
  j["checks"] = checks;
  j["notes"] = r.notes;
  json series = json::array();
  for (const Series& s : r.series) series.push_back({{"name", s.name}, {"values", s.values}});
  j["series"] = series;
  j["config"] = to_json(c);
  return j;
}

std::string reports_document(const std::vector<Report>& reports, const ExperimentConfig& c) {
  json doc = json::array();
  for (const Report& r : reports) doc.push_back(report_to_json(r, c));
  return doc.dump(2) + "\n";
}

std::string summary_csv(const std::vector<Report>& reports) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(fields[i]);
    }
    out += '\n';
  };
  line(csv_columns());
  for (const Report& r : reports) {
    for (const auto& row : csv_rows(r)) line(row);
  }
  return out;
}

// Long format: one row per series value.
std::string terms_csv(const std::vector<Report>& reports) {
  std::string out = "statement_id,series,index,value\n";
  for (const Report& r : reports) {
    for (const Series& s : r.series) {
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        out += csv_escape(r.statement) + ',' + csv_escape(s.name) + ',' + std::to_string(i) +
               ',' + csv_escape(s.values[i]) + '\n';
      }
    }
  }
  return out;
}

std::vector<Report> execute(const ExperimentConfig& c) {
  std::vector<Job> jobs = plan(c);
  std::vector<std::vector<Report>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = jobs[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(c.jobs), jobs.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Report> out;
  for (auto& v : results) {
    for (auto& r : v) out.push_back(std::move(r));
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

int run(const ExperimentConfig& config) {
  try {
    ExperimentConfig c = resolve(config);
    std::vector<Report> reports = execute(c);
    write_atomic(c.reports_path, reports_document(reports, c));
    if (!c.summary_path.empty()) write_atomic(c.summary_path, summary_csv(reports));
    if (!c.terms_path.empty()) write_atomic(c.terms_path, terms_csv(reports));

    bool ok = true;
    for (const Report& r : reports) {
      std::cout << r.statement << ": " << (r.pass() ? "pass" : "FAIL") << " ("
                << r.checks.size() << " rows, " << r.failures() << " failed)\n";
      for (const std::string& note : r.notes) std::cout << "  " << note << "\n";
      ok = ok && r.pass();
    }
    if (is_demo(c.command)) return kOk;
    return ok ? kOk : kChecksFailed;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kConfigError;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return kHypothesisViolation;
  } catch (const PrecisionBudgetError& e) {
    std::cerr << "precision budget exceeded: " << e.what() << "\n";
    return kPrecisionBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOtherError;
  }
}

}  // namespace ppext::cli
