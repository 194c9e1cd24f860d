#include <gtest/gtest.h>

#include <algorithm>

#include "gen.hpp"
#include "ppext/nodes.hpp"

using namespace ppext;

namespace {

const CantorParams kTwo = CantorParams::parse("2", "1/4");

// Deepest level whose basic interval holds both points.
int common_level(const Address& a, const Address& b) {
  int top = std::max(a.level, b.level) + 1;
  int L = 0;
  while (L + 1 <= top && a.index_at(L + 1) == b.index_at(L + 1)) ++L;
  return L;
}

PointExpr l(int j) { return PointExpr::level(j); }

}  // namespace

TEST(Nodes, FirstEightAreY2InRuleOrder) {
  NodeSeq Z = enumerate_nodes(8);
  std::vector<PointExpr> want = {PointExpr(), l(0),        l(1),        l(0) - l(1),
                                 l(2),        l(0) - l(2), l(1) - l(2), l(0) - l(1) + l(2)};
  ASSERT_EQ(Z.points, want);
  std::vector<int> types;
  for (std::size_t k = 1; k <= 8; ++k) types.push_back(node_type(k));
  EXPECT_EQ(types, (std::vector<int>{0, 0, 1, 1, 2, 2, 2, 2}));
}

TEST(Nodes, NextNodeMatchesEnumeration) {
  NodeSeq Z = enumerate_nodes(4096);
  for (std::uint64_t N = 0; N + 2 <= 4096; ++N) {
    ASSERT_EQ(next_node(N), Z[N + 2]) << "N=" << N;
  }
}

TEST(Nodes, AddressesRealizeThePoints) {
  NodeSeq Z = enumerate_nodes(1024);
  for (std::size_t k = 1; k <= Z.size(); ++k) {
    EXPECT_EQ(to_point(Z.meta[k - 1].address), Z[k]) << k;
  }
}

TEST(Nodes, DistinctAndInsideTheGrid) {
  NodeSeq Z = enumerate_nodes(512);
  std::vector<PointExpr> sorted = Z.points;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  LevelData L = build_levels(kTwo, 9);
  for (const PointExpr& x : Z.points) EXPECT_NO_THROW(locate_chain(x, L, 9));
}

TEST(Uniformity, EveryPrefixUpTo4096) {
  EXPECT_EQ(first_nonuniform_prefix(4096), 0u);
}

TEST(Uniformity, CountsAgreeWithDirectLocation) {
  NodeSeq Z = enumerate_nodes(300);
  LevelData L = build_levels(kTwo, 9);
  gen::for_all(40, 21, [&](gen::Gen& g) {
    std::size_t n = static_cast<std::size_t>(g.integer(1, 300));
    std::vector<PointExpr> pts(Z.points.begin(), Z.points.begin() + n);
    UniformityResult u = uniform_counts(pts, L);
    int levels = static_cast<int>(u.counts.size()) - 1;
    for (int k = 1; k <= levels; ++k) {
      std::vector<long> direct(std::size_t{1} << k, 0);
      for (const PointExpr& x : pts) direct[locate_chain(x, L, k).front().index - 1]++;
      EXPECT_EQ(u.counts[k], direct) << "level " << k;
      long lo = *std::min_element(direct.begin(), direct.end());
      long hi = *std::max_element(direct.begin(), direct.end());
      EXPECT_LE(hi - lo, 1);
    }
    EXPECT_TRUE(u.pass);
  });
}

TEST(Uniformity, LopsidedSetIsNotUniform) {
  // three points in I_{1,1}, none in I_{2,1}
  std::vector<PointExpr> pts = {PointExpr(), l(1), l(2)};
  LevelData L = build_levels(kTwo, 5);
  UniformityResult u = uniform_counts(pts, L);
  EXPECT_FALSE(u.pass);
  EXPECT_EQ(u.first_bad_level, 1);
}

TEST(BinaryDecomp, Bits) {
  EXPECT_EQ(binary_decomp(13).exponents, (std::vector<int>{3, 2, 0}));
  gen::for_all(200, 22, [](gen::Gen& g) {
    std::uint64_t m = static_cast<std::uint64_t>(g.integer(1, 1L << 40));
    BinaryDecomp d = binary_decomp(m);
    EXPECT_EQ(d.value(), m);
    EXPECT_EQ(d.exponents.front(), top_level(m));
    EXPECT_TRUE(std::is_sorted(d.exponents.rbegin(), d.exponents.rend()));
  });
}

TEST(Profiles, LambdaCountsCommonLevelsOfTheNextNode) {
  NodeSeq Z = enumerate_nodes(1100);
  for (std::uint64_t n = 1; n < 1100; ++n) {
    DegreeVector lam = lambda_degrees(n);
    const Address& next = Z.meta[n].address;
    std::vector<long> direct(lam.degrees.size() + 2, 0);
    for (std::size_t i = 1; i <= n; ++i) direct[common_level(next, Z.meta[i - 1].address)]++;
    for (std::size_t j = 0; j < direct.size(); ++j) {
      ASSERT_EQ(lam[j], direct[j]) << "n=" << n << " level " << j;
    }
    ASSERT_EQ(lam.total(), static_cast<long>(n));
  }
}

TEST(Profiles, MuCountsCommonLevelsCappedAtTheTop) {
  gen::for_all(60, 23, [](gen::Gen& g) {
    std::size_t m = static_cast<std::size_t>(g.integer(2, 700));
    NodeSeq Z = enumerate_nodes(m);
    std::size_t k = static_cast<std::size_t>(g.integer(1, static_cast<long>(m)));
    int s = top_level(m);
    DegreeVector mu = mu_profile(k, Z);
    std::vector<long> direct(s + 1, 0);
    for (std::size_t i = 1; i <= m; ++i) {
      if (i == k) continue;
      direct[std::min(common_level(Z.meta[k - 1].address, Z.meta[i - 1].address), s)]++;
    }
    for (int j = 0; j <= s; ++j) EXPECT_EQ(mu[j], direct[j]) << "m=" << m << " k=" << k;
  });
}

TEST(Profiles, RhoSortedAndSplitsMultiply) {
  CantorParams p = CantorParams::parse("5/2", "1/4");
  gen::for_all(100, 24, [&](gen::Gen& g) {
    std::uint64_t n = static_cast<std::uint64_t>(g.integer(1, 5000));
    RhoProfile rho = lambda_profile(n).rho;
    ASSERT_EQ(rho.levels.size(), n);
    // rho_1 <= rho_2 <= ... means levels are non-increasing
    EXPECT_TRUE(std::is_sorted(rho.levels.rbegin(), rho.levels.rend()));
    std::size_t q = static_cast<std::size_t>(g.integer(0, static_cast<long>(n)));
    LogMag whole = product(rho, p);
    LogMag split = p_smallest(rho, q, p) * p_removed(rho, q, p);
    EXPECT_EQ(whole.exponent, split.exponent);
  });
}

TEST(Profiles, FastCaseCheckMatchesBruteForce) {
  for (const char* alpha : {"2", "5/2", "3"}) {
    CantorParams p = CantorParams::parse(alpha, "1/4");
    gen::for_all(80, 25, [&](gen::Gen& g) {
      std::size_t m = static_cast<std::size_t>(g.integer(2, 200));
      NodeSeq Z = enumerate_nodes(m);
      std::size_t k = static_cast<std::size_t>(g.integer(1, static_cast<long>(m)));
      std::uint64_t cls = static_cast<std::uint64_t>(g.integer(1, 1L << top_level(m)));
      ProfileCaseResult a = check_profile_case_bruteforce(p, Z, k, cls);
      ProfileCaseResult b = check_profile_case_fast(p, Z, k, cls);
      EXPECT_EQ(a.a, b.a);
      EXPECT_EQ(a.b, b.b);
      EXPECT_EQ(a.c, b.c);
      EXPECT_EQ(a.d, b.d);
      EXPECT_EQ(a.e, b.e);
      EXPECT_TRUE(a.a && a.b && a.c && a.d && a.e) << alpha << " m=" << m << " k=" << k;
    });
  }
}

TEST(Profiles, SweepSmallRange) {
  ProfileSweepOptions o;
  o.m_max = 130;
  ProfileSweepResult r = sweep_profile_inequalities(kTwo, o);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.names.size(), 5u);
  for (long long c : r.instances) EXPECT_GT(c, 0);
}
