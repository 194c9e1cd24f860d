// Runs the twelve acceptance criteria and prints one verdict line each.
// Exit status is the number of failing criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ppext/approx.hpp"
#include "ppext/cutoff.hpp"
#include "ppext/extension.hpp"
#include "ppext/verify.hpp"
#include "runner.hpp"

using namespace ppext;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const CantorParams& two() {
  static const CantorParams p = CantorParams::parse("2", "1/4");
  return p;
}

const CantorParams& five_halves() {
  static const CantorParams p = CantorParams::parse("5/2", "1/4");
  return p;
}

std::string first_failure(const Report& r) {
  for (const Check& c : r.checks) {
    if (c.asserted && !c.pass) return r.statement + " " + c.label + ": " + c.computed + " vs " + c.bound;
  }
  return "";
}

Outcome from_reports(const std::vector<Report>& reports) {
  Outcome o{true, ""};
  long rows = 0;
  for (const Report& r : reports) {
    rows += static_cast<long>(r.checks.size());
    if (!r.pass()) {
      o.pass = false;
      if (o.detail.empty()) o.detail = first_failure(r);
    }
  }
  if (o.pass) o.detail = std::to_string(rows) + " rows";
  return o;
}

// 1
Outcome node_combinatorics() {
  auto t0 = std::chrono::steady_clock::now();
  NodeSeq Z = enumerate_nodes(4096);
  std::vector<PointExpr> y2 = {PointExpr(),
                               PointExpr::level(0),
                               PointExpr::level(1),
                               PointExpr::level(0) - PointExpr::level(1),
                               PointExpr::level(2),
                               PointExpr::level(0) - PointExpr::level(2),
                               PointExpr::level(1) - PointExpr::level(2),
                               PointExpr::level(0) - PointExpr::level(1) + PointExpr::level(2)};
  if (Z.prefix(8).points != y2) return {false, "first eight nodes differ from Y_2"};
  for (std::uint64_t N = 0; N + 2 <= 4096; ++N) {
    if (next_node(N) != Z[N + 2]) return {false, "next_node differs at N=" + std::to_string(N)};
  }
  std::size_t bad = first_nonuniform_prefix(4096);
  if (bad != 0) return {false, "prefix " + std::to_string(bad) + " not uniform"};
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 60) return {false, "took " + std::to_string(secs) + " s"};
  return {true, "4096 prefixes uniform, next_node agrees"};
}

// 2
Outcome exponent_inequalities() {
  long long instances = 0;
  for (const CantorParams* p : {&two(), &five_halves()}) {
    ProfileSweepOptions o;
    o.m_min = 2;
    o.m_max = 1026;
    ProfileSweepResult r = sweep_profile_inequalities(*p, o);
    for (std::size_t i = 0; i < r.names.size(); ++i) {
      instances += r.instances[i];
      if (r.failures[i] != 0) {
        return {false, "alpha=" + p->alpha_string() + " " + r.names[i] + ": " +
                           (r.failure_samples.empty() ? "" : r.failure_samples.front())};
      }
    }
  }
  return {true, std::to_string(instances) + " instances, alpha in {2, 5/2}"};
}

// 3 and 4 share one sweep per alpha
std::vector<GridSweepReports>& sweeps() {
  static std::vector<GridSweepReports> s = [] {
    std::vector<GridSweepReports> out;
    for (const CantorParams* p : {&two(), &five_halves()}) {
      GridSweepOptions o;
      o.n_min = 1;
      o.n_max = 256;
      o.pi = false;
      out.push_back(grid_sweep(*p, o));
    }
    return out;
  }();
  return s;
}

Outcome lemma_max() {
  std::vector<Report> r;
  for (auto& s : sweeps()) r.push_back(s.lemma);
  return from_reports(r);
}

Outcome lebesgue() {
  std::vector<Report> r;
  for (auto& s : sweeps()) r.push_back(s.lebesgue);
  return from_reports(r);
}

// 5
Outcome markov() {
  return from_reports({verify_markov(two(), 1, 7, {1, 2, 3, 4}),
                       verify_markov(five_halves(), 1, 7, {1, 2, 3, 4})});
}

// 6
Outcome not_leja() {
  NotLejaConstants c = not_leja_constants(two());
  double sigma = c.sigma.get_d();
  if (std::abs(sigma - 0.9375) > 1e-10) return {false, "sigma = " + std::to_string(sigma)};
  Report r = verify_not_leja(two(), 6, 10);
  for (const Check& k : r.checks) {
    bool relevant = k.label.find("M sigma1") != std::string::npos ||
                    k.label.find("omega_N") != std::string::npos;
    if (relevant && !k.pass) return {false, k.label};
  }
  Outcome o = from_reports({r});
  if (o.pass) o.detail = "sigma = 0.9375, s = 6..10";
  return o;
}

// 7
Outcome cutoff() {
  std::vector<double> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(0.01 + 0.98 * i / 99.0);
  double worst = 0;
  for (int k = 1; k <= 6; ++k) {
    try {
      worst = std::max(worst, verify_phi_recursion(k, pts, 1e-4).max_rel_error);
    } catch (const RecursionVerificationError& e) {
      return {false, e.what()};
    }
  }
  if (!(phi(BigReal::from_rational(Rational(1, 2), 128), 128) > BigReal::from_rational(Rational(1, 2), 64))) {
    return {false, "phi(1/2) <= 1/2"};
  }
  LevelData L = build_levels(two(), 7);
  CutoffFn u(L, L.length(2));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    Rational x(static_cast<long>(rng() % (1UL << 24)), 1L << 22);  // [0, 4)
    x -= 2;
    BigReal v = u.eval(Locus::of(BigReal::from_rational(x, 192)), 0, 128)[0];
    if (v.sign() < 0 || v > BigReal(1, 64)) return {false, "u out of [0, 1] at " + rational_string(x)};
  }
  std::vector<std::vector<BigReal>> c;
  for (int s : {1, 2, 3}) c.push_back(cutoff_scaling_constants(CutoffFn(L, L.length(s)), 4, 32));
  double spread = 1;
  for (int j = 0; j <= 4; ++j) {
    BigReal lo = c[0][j], hi = c[0][j];
    for (const auto& row : c) {
      lo = min(lo, row[j]);
      hi = max(hi, row[j]);
    }
    spread = std::max(spread, (hi / lo).to_double());
  }
  if (spread > 2) return {false, "c_j spread " + std::to_string(spread)};
  char buf[160];
  std::snprintf(buf, sizeof buf, "max FD rel err %.2e, c_j spread %.3f", worst, spread);
  return {true, buf};
}

// 8
Outcome jackson() {
  std::vector<int> ns = {15, 31, 63, 127, 255};
  return from_reports({verify_jackson(jet_exp(), two(), 0, ns), verify_jackson(jet_exp(), two(), 1, ns)});
}

// 9
Outcome term_decay() {
  OperatorConfig cfg{two(), 255, 2, 2, 8};
  ExtensionOperator op(jet_exp(), cfg);
  std::vector<Report> r;
  for (int p = 0; p <= 2; ++p) r.push_back(verify_term_decay(op, p));
  return from_reports(r);
}

// 10
Outcome violation() {
  CantorParams p = CantorParams::parse("3", "1/4");
  if (violation_order(p) != 4) return {false, "order " + std::to_string(violation_order(p))};
  Report r = violation_demo(p, 4, 6, {3, 5});
  int growth_rows = 0;
  for (const Check& c : r.checks) {
    if (c.label.find("grows") == std::string::npos) continue;
    ++growth_rows;
    if (!c.pass) return {false, c.label + ": " + c.computed + " vs " + c.bound};
  }
  if (growth_rows != 4) return {false, std::to_string(growth_rows) + " growth rows"};
  return {true, "ratio grows at s = 5, 6 for q = 3, 5"};
}

// 11
Outcome interval() {
  Report r = interval_demo(Rational(1, 10000), Rational(1, 50));
  BigReal c = BigReal::parse(r.parameter("implied_C"), 128);
  double rel = std::abs(c.to_double() - 50.0) / 50.0;
  if (!r.pass()) return {false, first_failure(r)};
  if (rel > 0.01) return {false, "implied C = " + c.to_string(8)};
  return {true, "implied C = " + c.to_string(8)};
}

// 12
Outcome determinism() {
  std::vector<cli::ExperimentConfig> configs;
  auto add = [&](const std::string& cmd, auto&& tweak) {
    cli::ExperimentConfig c;
    c.command = cmd;
    tweak(c);
    configs.push_back(cli::resolve(c));
  };
  add("verify lemma-max", [](cli::ExperimentConfig& c) { c.n_max = 64; });
  add("verify markov", [](cli::ExperimentConfig& c) { c.s_max = 5; });
  add("verify not-leja", [](cli::ExperimentConfig&) {});
  add("verify jackson", [](cli::ExperimentConfig& c) { c.n_list = {15, 31, 63}; });
  add("demo interval", [](cli::ExperimentConfig&) {});
  add("demo violation", [](cli::ExperimentConfig& c) { c.alpha = "3"; });
  add("extend", [](cli::ExperimentConfig& c) {
    c.n_max = 31;
    c.seed = 42;
  });
  for (const auto& c : configs) {
    std::string a = cli::reports_document(cli::execute(c), c);
    std::string b = cli::reports_document(cli::execute(c), c);
    if (a != b) return {false, c.command + " differs between runs"};
  }
  return {true, std::to_string(configs.size()) + " configs byte-identical"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {1, "node combinatorics", node_combinatorics},
      {2, "exponent inequalities", exponent_inequalities},
      {3, "grid max of a_k", lemma_max},
      {4, "grid Lebesgue constant", lebesgue},
      {5, "Markov sandwich", markov},
      {6, "non-Leja example", not_leja},
      {7, "cutoff", cutoff},
      {8, "Jackson-type trend", jackson},
      {9, "extension operator terms", term_decay},
      {10, "violation ratio growth", violation},
      {11, "interval demo", interval},
      {12, "determinism", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %-26s %s  %s (%.1f s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed;
}
