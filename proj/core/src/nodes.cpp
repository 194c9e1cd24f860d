#include "ppext/nodes.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ppext {

int node_type(std::uint64_t index) {
  if (index == 0) throw RangeError("node indices start at 1");
  if (index <= 2) return 0;
  return std::bit_width(index - 1) - 1;
}

NodeSeq NodeSeq::prefix(std::size_t n) const {
  if (n > size()) throw RangeError("prefix longer than the node sequence");
  NodeSeq out;
  out.points.assign(points.begin(), points.begin() + n);
  out.meta.assign(meta.begin(), meta.begin() + n);
  return out;
}

int NodeSeq::max_type() const {
  int t = 0;
  for (const NodeMeta& m : meta) t = std::max(t, m.type);
  return t;
}

NodeSeq enumerate_nodes(std::size_t n) {
  if (n < 1) throw RangeError("need at least one node");
  NodeSeq Z;
  Z.points.reserve(n);
  Z.meta.reserve(n);
  Z.points.push_back(PointExpr());
  Z.meta.push_back({0, 0, 0, {0, 1, Side::kLeft}});
  if (n >= 2) {
    Z.points.push_back(PointExpr::level(0));
    Z.meta.push_back({0, 0, 0, {0, 1, Side::kRight}});
  }
  for (std::uint64_t i = 3; i <= n; ++i) {
    int k = node_type(i);
    std::uint64_t j = i - (std::uint64_t{1} << k);
    int sign = (std::popcount(i - 1) % 2 == 1) ? 1 : -1;
    const NodeMeta& src = Z.meta[j - 1];
    // Lift x_j to an endpoint of a level k-1 interval, then step into the
    // child interval that the new point opens.
    std::uint64_t parent = src.address.index_at(k - 1);
    Side side = src.address.side;  // lifting to a deeper level keeps the side
    Address addr;
    if (sign > 0) {
      if (side != Side::kLeft) throw std::logic_error("sign/side mismatch");
      addr = {k, 2 * parent - 1, Side::kRight};
    } else {
      if (side != Side::kRight) throw std::logic_error("sign/side mismatch");
      addr = {k, 2 * parent, Side::kLeft};
    }
    Z.points.push_back(Z.points[j - 1] + PointExpr::level(k, sign));
    Z.meta.push_back({k, j, sign, addr});
  }
  return Z;
}

NodeSeq enumerate_nodes(std::size_t n, const LevelData& levels) {
  int needed = n <= 2 ? 0 : node_type(n);
  if (needed > levels.depth()) {
    throw PrecisionBudgetError("nodes up to x_" + std::to_string(n) +
                               " need level " + std::to_string(needed) +
                               " but levels stop at " +
                               std::to_string(levels.depth()));
  }
  return enumerate_nodes(n);
}

std::uint64_t BinaryDecomp::value() const {
  std::uint64_t v = 0;
  for (int e : exponents) v += std::uint64_t{1} << e;
  return v;
}

BinaryDecomp binary_decomp(std::uint64_t m) {
  if (m == 0) throw RangeError("binary decomposition of zero");
  BinaryDecomp d;
  for (int b = 63; b >= 0; --b) {
    if ((m >> b) & 1U) d.exponents.push_back(b);
  }
  return d;
}

PointExpr next_node(std::uint64_t N) {
  BinaryDecomp d = binary_decomp(N + 1);
  std::size_t m = d.exponents.size() - 1;
  std::vector<PointExpr::Term> terms;
  for (std::size_t j = 0; j <= m; ++j) {
    long sign = ((m - j) % 2 == 0) ? 1 : -1;
    terms.push_back({d.exponents[j], sign});
  }
  return PointExpr::from_terms(terms);
}

UniformityResult uniform_counts(const std::vector<Address>& points,
                                int max_level) {
  UniformityResult r;
  r.counts.resize(max_level + 1);
  r.counts[0] = {static_cast<long>(points.size())};
  for (int k = 1; k <= max_level; ++k) {
    std::vector<long>& c = r.counts[k];
    c.assign(std::size_t{1} << k, 0);
    for (const Address& a : points) ++c[a.index_at(k) - 1];
    auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    if (*hi - *lo > 1 && r.pass) {
      r.pass = false;
      r.first_bad_level = k;
    }
  }
  return r;
}

UniformityResult uniform_counts(const std::vector<PointExpr>& points,
                                const LevelData& levels) {
  int max_level = 1;
  for (const PointExpr& x : points) max_level = std::max(max_level, x.max_level() + 1);
  max_level = std::min(max_level, levels.depth());
  UniformityResult r;
  r.counts.resize(max_level + 1);
  r.counts[0] = {static_cast<long>(points.size())};
  for (int k = 1; k <= max_level; ++k) r.counts[k].assign(std::size_t{1} << k, 0);
  for (const PointExpr& x : points) {
    for (const ChainLink& link : locate_chain(x, levels, max_level)) {
      if (link.level > 0) ++r.counts[link.level][link.index - 1];
    }
  }
  for (int k = 1; k <= max_level; ++k) {
    auto [lo, hi] = std::minmax_element(r.counts[k].begin(), r.counts[k].end());
    if (*hi - *lo > 1 && r.pass) {
      r.pass = false;
      r.first_bad_level = k;
    }
  }
  return r;
}

namespace {

Report uniform_report(const UniformityResult& u, std::size_t n) {
  Report rep;
  rep.statement = "uniform-distribution";
  rep.title = "|m_{i,k}(Z) - m_{j,k}(Z)| <= 1 for every level k";
  rep.set_parameter("n", std::to_string(n));
  for (std::size_t k = 1; k < u.counts.size(); ++k) {
    auto [lo, hi] = std::minmax_element(u.counts[k].begin(), u.counts[k].end());
    Check c;
    c.label = "level " + std::to_string(k);
    c.n = static_cast<long>(n);
    c.computed = std::to_string(*hi - *lo);
    c.bound = "1";
    c.pass = *hi - *lo <= 1;
    c.margin_log2 = std::nullopt;
    rep.checks.push_back(c);
    if (k <= 4) {
      Series& s = rep.add_series("counts level " + std::to_string(k));
      for (long v : u.counts[k]) s.values.push_back(std::to_string(v));
    }
  }
  return rep;
}

}  // namespace

Report check_uniform(const NodeSeq& Z) {
  std::vector<Address> addrs;
  for (const NodeMeta& m : Z.meta) addrs.push_back(m.address);
  return uniform_report(uniform_counts(addrs, Z.max_type() + 1), Z.size());
}

Report check_uniform(const std::vector<PointExpr>& Z, const LevelData& levels) {
  return uniform_report(uniform_counts(Z, levels), Z.size());
}

std::size_t first_nonuniform_prefix(std::size_t n_max) {
  NodeSeq Z = enumerate_nodes(n_max);
  int L = n_max <= 2 ? 1 : node_type(n_max) + 1;
  // hist[k][c] = number of level-k intervals holding c nodes
  std::vector<std::vector<long>> counts(L + 1), hist(L + 1);
  std::vector<long> lo(L + 1, 0), hi(L + 1, 0);
  for (int k = 1; k <= L; ++k) {
    counts[k].assign(std::size_t{1} << k, 0);
    hist[k].assign(n_max + 2, 0);
    hist[k][0] = static_cast<long>(counts[k].size());
  }
  for (std::size_t n = 1; n <= n_max; ++n) {
    const Address& a = Z.meta[n - 1].address;
    for (int k = 1; k <= L; ++k) {
      long& c = counts[k][a.index_at(k) - 1];
      --hist[k][c];
      ++c;
      ++hist[k][c];
      hi[k] = std::max(hi[k], c);
      while (hist[k][lo[k]] == 0) ++lo[k];
      if (hi[k] - lo[k] > 1) return n;
    }
  }
  return 0;
}

long DegreeVector::total() const {
  long t = 0;
  for (long d : degrees) t += d;
  return t;
}

RhoProfile rho_profile(const DegreeVector& d) {
  RhoProfile r;
  for (int j = static_cast<int>(d.degrees.size()) - 1; j >= 0; --j) {
    for (long c = 0; c < d.degrees[j]; ++c) r.levels.push_back(j);
  }
  return r;
}

DegreeVector lambda_degrees(std::uint64_t n) {
  BinaryDecomp d = binary_decomp(n);
  DegreeVector out;
  out.degrees.assign(d.exponents.front() + 1, 0);
  for (int t : d.exponents) {
    out.degrees[t] += 1;
    if (t >= 1) out.degrees[t - 1] += 1;
    for (int i = 2; i <= t; ++i) out.degrees[t - i] += long{1} << (i - 1);
  }
  return out;
}

LambdaProfile lambda_profile(std::uint64_t n) {
  LambdaProfile p;
  p.degrees = lambda_degrees(n);
  p.rho = rho_profile(p.degrees);
  return p;
}

int top_level(std::uint64_t m) {
  if (m == 0) throw RangeError("top level of zero");
  return std::bit_width(m) - 1;
}

}  // namespace ppext
