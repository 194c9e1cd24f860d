#include <gtest/gtest.h>

#include "gen.hpp"
#include "ppext/verify.hpp"

using namespace ppext;

namespace {

const CantorParams kTwo = CantorParams::parse("2", "1/4");

BigReal num(const std::string& s) { return BigReal::parse(s, 128); }

const Check& row_for(const Report& r, long N, const std::string& fragment = "") {
  for (const Check& c : r.checks) {
    if (c.n == N && c.label.find(fragment) != std::string::npos) return c;
  }
  throw std::runtime_error("no row");
}

}  // namespace

TEST(GridSweep, AllThreeStatementsHoldOnSmallRanges) {
  for (const char* alpha : {"2", "5/2", "3"}) {
    GridSweepOptions o;
    o.n_max = 40;
    GridSweepReports r = grid_sweep(CantorParams::parse(alpha, "1/4"), o);
    EXPECT_TRUE(r.pi.pass()) << alpha;
    EXPECT_TRUE(r.lemma.pass()) << alpha;
    EXPECT_TRUE(r.lebesgue.pass()) << alpha;
    EXPECT_EQ(r.lemma.checks.size(), 40u);
    EXPECT_EQ(r.pi.checks.size(), 200u);
  }
}

TEST(GridSweep, NodeBasisMaxAgreesWithDirectEvaluation) {
  Report rep = verify_lemma_max(kTwo, 1, 20);
  LevelData L = build_levels(kTwo, 7);
  NodeSeq Z = enumerate_nodes(21, L);
  for (long N : {1L, 4L, 9L, 15L, 20L}) {
    std::size_t m = static_cast<std::size_t>(N) + 1;
    NodeSeq P = Z.prefix(m);
    std::vector<PointExpr> Y = grid(L, top_level(m) + 2);
    BigReal worst(192);
    for (std::size_t k = 1; k <= m; ++k) {
      BigReal own = abs(a_k_eval(k, P, Locus::at(P[k]), 0, L, 192)[0]);
      for (const PointExpr& y : Y) {
        worst = max(worst, abs(a_k_eval(k, P, Locus::at(y), 0, L, 192)[0]) / own);
      }
    }
    EXPECT_TRUE(relatively_close(num(row_for(rep, N).computed), worst, 1e-18)) << N;
  }
}

TEST(GridSweep, LebesgueAgreesWithDirectEvaluation) {
  Report rep = verify_lebesgue(kTwo, 1, 20);
  LevelData L = build_levels(kTwo, 7);
  NodeSeq Z = enumerate_nodes(21, L);
  for (long N : {1L, 6L, 13L, 20L}) {
    std::size_t m = static_cast<std::size_t>(N) + 1;
    BigReal direct = lebesgue_constant(Z.prefix(m), grid(L, top_level(m) + 2), L);
    EXPECT_TRUE(relatively_close(num(row_for(rep, N).computed), direct, 1e-18)) << N;
  }
}

TEST(GridSweep, RangeIsRespected) {
  Report r = verify_lebesgue(kTwo, 5, 9);
  ASSERT_EQ(r.checks.size(), 5u);
  EXPECT_EQ(r.checks.front().n, 5);
  EXPECT_EQ(r.checks.back().n, 9);
}

TEST(Markov, SandwichHoldsForSmallPowersOfTwo) {
  for (const char* alpha : {"2", "5/2"}) {
    Report r = verify_markov(CantorParams::parse(alpha, "1/4"), 1, 5, {1, 2, 3, 4});
    EXPECT_TRUE(r.pass()) << alpha;
    EXPECT_FALSE(r.checks.empty());
  }
}

TEST(NotLeja, ConstantsForQuarter) {
  NotLejaConstants c = not_leja_constants(kTwo);
  EXPECT_EQ(c.sigma, Rational(15, 16));
  EXPECT_EQ(c.sigma1, (1 + c.sigma) / 2);
  EXPECT_GT(c.M, 0);
}

TEST(NotLeja, ExampleHoldsFromSixOn) {
  Report r = verify_not_leja(kTwo, 6, 8);
  EXPECT_TRUE(r.pass());
  for (const Check& c : r.checks) {
    if (c.asserted) EXPECT_TRUE(c.pass) << c.label;
  }
}

TEST(NotLeja, RefusesOtherAlpha) {
  EXPECT_THROW(verify_not_leja(CantorParams::parse("5/2", "1/4"), 6, 7), HypothesisError);
  EXPECT_THROW(verify_not_leja(CantorParams::parse("2", "1/3"), 6, 7), HypothesisError);
}

TEST(LejaTrend, FindingsNeverFail) {
  Report r = verify_leja_trend(CantorParams::parse("3", "1/4"), 40);
  EXPECT_TRUE(r.pass());
  bool any_violation = false;
  for (const Check& c : r.checks) {
    EXPECT_FALSE(c.asserted);
    any_violation = any_violation || !c.pass;
  }
  EXPECT_TRUE(any_violation);
}

TEST(Qqq, LowerBoundHolds) {
  Report r = verify_qqq(kTwo, {15, 31, 63}, {0, 1, 2});
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.checks.size(), 9u);
}

TEST(Report, CsvRowsCarryTheFixedColumns) {
  Report r = verify_lebesgue(kTwo, 1, 3);
  auto rows = csv_rows(r);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), csv_columns().size());
    EXPECT_EQ(row[1], "2");
    EXPECT_EQ(row[2], "1/4");
    EXPECT_EQ(row[9], "true");
  }
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"x\""), "\"say \"\"x\"\"\"");
  EXPECT_EQ(csv_escape("plain"), "plain");
}
