#include "ppext/polyops.hpp"

#include <algorithm>
#include <bit>

namespace ppext {

ProductJet::ProductJet(int p_max, Bits width) : tmp_(width) {
  if (p_max < 0) throw RangeError("negative derivative order");
  r_.values.reserve(p_max + 1);
  r_.values.emplace_back(1, width);
  for (int j = 1; j <= p_max; ++j) r_.values.emplace_back(width);
}

void ProductJet::multiply(const BigReal& diff) {
  auto& v = r_.values;
  int top = std::min<int>(static_cast<int>(v.size()) - 1, factors_ + 1);
  for (int j = top; j >= 1; --j) {
    // P^(j) <- (x - r) P^(j) + j P^(j-1)
    mpfr_mul(v[j].get(), v[j].get(), diff.get(), MPFR_RNDN);
    mpfr_mul_si(tmp_.get(), v[j - 1].get(), j, MPFR_RNDN);
    mpfr_add(v[j].get(), v[j].get(), tmp_.get(), MPFR_RNDN);
  }
  mpfr_mul(v[0].get(), v[0].get(), diff.get(), MPFR_RNDN);
  ++factors_;
}

PolyEvalResult product_derivs(std::span<const BigReal> diffs, int p_max, Bits width) {
  ProductJet jet(p_max, width);
  for (const BigReal& d : diffs) jet.multiply(d);
  return jet.result();
}

PolyEvalResult product_derivs(const std::vector<BigReal>& roots, const BigReal& x,
                              int p_max, Bits width) {
  std::vector<BigReal> diffs;
  diffs.reserve(roots.size());
  for (const BigReal& r : roots) diffs.push_back((x.rounded(width) - r).rounded(width));
  return product_derivs(diffs, p_max, width);
}

PolyEvalResult product_derivs(const std::vector<PointExpr>& roots, const Locus& x,
                              int p_max, const LevelData& levels, Bits width) {
  ProductJet jet(p_max, width);
  for (const PointExpr& r : roots) jet.multiply(difference(x, r, levels, width));
  return jet.result();
}

PolyEvalResult omega_eval(std::size_t n, const NodeSeq& Z, const Locus& x, int p_max,
                          const LevelData& levels, Bits width) {
  if (n > Z.size()) throw RangeError("omega_n needs n <= |Z|");
  ProductJet jet(p_max, width);
  for (std::size_t i = 0; i < n; ++i) jet.multiply(difference(x, Z.points[i], levels, width));
  return jet.result();
}

PolyEvalResult a_k_eval(std::size_t k, const NodeSeq& Z, const Locus& x, int p_max,
                        const LevelData& levels, Bits width) {
  if (k < 1 || k > Z.size()) throw RangeError("a_k needs 1 <= k <= |Z|");
  ProductJet jet(p_max, width);
  for (std::size_t i = 0; i < Z.size(); ++i) {
    if (i + 1 == k) continue;
    jet.multiply(difference(x, Z.points[i], levels, width));
  }
  return jet.result();
}

namespace {

int depth_for(std::size_t nodes) {
  return nodes <= 2 ? 1 : std::max(1, node_type(nodes));
}

}  // namespace

std::vector<DividedDiff> divided_differences(const JetFn& f, const CantorParams& params,
                                             int n_max, double rel_tol,
                                             const AdaptiveOptions& options) {
  if (n_max < 0) throw RangeError("negative divided-difference order");
  std::size_t m = static_cast<std::size_t>(n_max) + 1;
  NodeSeq Z = enumerate_nodes(m);
  int depth = depth_for(m);
  auto compute = [&](Bits w) {
    LevelData levels(params, depth, w + 64);
    std::vector<BigReal> fx;
    fx.reserve(m);
    for (std::size_t k = 0; k < m; ++k) fx.push_back(f(eval_point(Z.points[k], levels, w)));
    // den[k] = prod_{i<=n+1, i!=k} (x_k - x_i) for the current n
    std::vector<BigReal> den;
    den.reserve(m);
    std::vector<Estimate> out;
    out.reserve(m);
    std::vector<BigReal> terms;
    std::vector<mpfr_ptr> ptrs;
    for (std::size_t n = 0; n < m; ++n) {
      BigReal own(1, w);
      for (std::size_t k = 0; k < n; ++k) {
        BigReal d = eval_point(Z.points[k] - Z.points[n], levels, w);
        den[k] *= d;
        own *= d;
      }
      if (n % 2 == 1) own = -own;
      den.push_back(std::move(own));
      terms.clear();
      BigReal scale(w);
      for (std::size_t k = 0; k <= n; ++k) {
        terms.push_back(fx[k] / den[k]);
        scale += abs(terms.back());
      }
      ptrs.clear();
      for (BigReal& t : terms) ptrs.push_back(t.get());
      BigReal sum(w);
      mpfr_sum(sum.get(), ptrs.data(), ptrs.size(), MPFR_RNDN);
      out.push_back({std::move(sum), std::move(scale)});
    }
    return out;
  };
  AdaptiveVectorResult r = adaptive_eval_all(compute, rel_tol, options);
  std::vector<DividedDiff> dd;
  for (int n = 0; n <= n_max; ++n) dd.push_back({n, std::move(r.values[n]), r.width});
  return dd;
}

DividedDiff divided_difference(const JetFn& f, const CantorParams& params, int n,
                               double rel_tol) {
  return std::move(divided_differences(f, params, n, rel_tol).back());
}

BigReal lebesgue_constant(const NodeSeq& Z, const std::vector<PointExpr>& grid,
                          const LevelData& levels, Bits width) {
  if (grid.empty()) throw RangeError("empty grid");
  std::size_t n = Z.size();
  std::vector<BigReal> own;
  for (std::size_t k = 1; k <= n; ++k) {
    own.push_back(abs(a_k_eval(k, Z, Locus::at(Z[k]), 0, levels, width)[0]));
  }
  BigReal best(width);
  for (const PointExpr& x : grid) {
    BigReal s(width);
    for (std::size_t k = 1; k <= n; ++k) {
      s += abs(a_k_eval(k, Z, Locus::at(x), 0, levels, width)[0]) / own[k - 1];
    }
    best = max(best, s);
  }
  return best;
}

NewtonSeries::NewtonSeries(const JetFn& f, const CantorParams& params, int n_max,
                           double rel_tol)
    : id_(f.id()), xi_(divided_differences(f, params, n_max, rel_tol)) {}

NewtonSeries::NewtonSeries(std::string id, std::vector<DividedDiff> xi)
    : id_(std::move(id)), xi_(std::move(xi)) {}

Bits NewtonSeries::width() const { return xi_.empty() ? 0 : xi_.front().width; }

PolyEvalResult NewtonSeries::partial_sum(int N, const NodeSeq& Z, const Locus& x,
                                         int p_max, const LevelData& levels,
                                         Bits width) const {
  if (N < 0 || N > n_max()) throw RangeError("partial sum order beyond cached terms");
  if (static_cast<std::size_t>(N) > Z.size()) throw RangeError("not enough nodes");
  ProductJet omega(p_max, width);
  PolyEvalResult sum;
  for (int j = 0; j <= p_max; ++j) sum.values.emplace_back(width);
  for (int n = 0; n <= N; ++n) {
    if (n > 0) omega.multiply(difference(x, Z.points[n - 1], levels, width));
    for (int j = 0; j <= p_max; ++j) sum.values[j] += xi(n) * omega.result().values[j];
  }
  return sum;
}

PolyEvalResult newton_partial_sum(const JetFn& f, const CantorParams& params, int N,
                                  const Locus& x, int p_max, Bits width) {
  NewtonSeries series(f, params, N);
  NodeSeq Z = enumerate_nodes(std::max(N, 1));
  int depth = std::max(depth_for(std::max(N, 1)), x.anchor.max_level());
  LevelData levels(params, depth, std::max(width + 64, required_bits(params, depth)));
  return series.partial_sum(N, Z, x, p_max, levels, width);
}

namespace {

int grid_type(const Address& a) {
  std::uint64_t v = a.side == Side::kLeft ? a.index - 1 : a.index;
  if (v == 0 || v == (std::uint64_t{1} << a.level)) return 0;
  return a.level - std::countr_zero(v);
}

std::size_t grid_position(const Address& a, int depth) {
  std::uint64_t idx = a.index_at(depth);
  return 2 * (idx - 1) + (a.side == Side::kRight ? 1 : 0);
}

}  // namespace

GridTable::GridTable(const LevelData& levels, const NodeSeq& Z, int depth, Bits width)
    : depth_(depth), nodes_(Z.size()), width_(width) {
  if (depth > levels.depth()) throw RangeError("grid depth beyond levels");
  if (Z.max_type() > depth) throw RangeError("nodes deeper than the grid");
  addrs_ = grid_addresses(depth);
  std::size_t G = addrs_.size();
  types_.reserve(G);
  for (const Address& a : addrs_) types_.push_back(grid_type(a));
  node_of_.assign(G, 0);
  for (std::size_t k = 0; k < nodes_; ++k) {
    std::size_t g = grid_position(Z.meta[k].address, depth);
    node_pos_.push_back(g);
    node_of_[g] = static_cast<long>(k + 1);
  }
  // Absolute realizations accurate far below the smallest point spacing.
  Bits abs_width = required_bits(levels.params(), depth);
  LevelData fine = levels.width() >= abs_width + 64
                       ? levels
                       : LevelData(levels.params(), depth, abs_width + 64);
  std::vector<BigReal> xg;
  xg.reserve(G);
  for (const Address& a : addrs_) xg.push_back(eval_point(to_point(a), fine, abs_width));
  d_.reserve(G * nodes_);
  for (std::size_t g = 0; g < G; ++g) {
    for (std::size_t i = 0; i < nodes_; ++i) {
      BigReal d(width);
      if (node_pos_[i] != g) mpfr_sub(d.get(), xg[g].get(), xg[node_pos_[i]].get(), MPFR_RNDN);
      d_.push_back(std::move(d));
    }
  }
}

std::optional<std::size_t> GridTable::node_at(std::size_t g) const {
  long k = node_of_.at(g);
  if (k == 0) return std::nullopt;
  return static_cast<std::size_t>(k);
}

std::vector<std::size_t> GridTable::points_of_type(int d) const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < types_.size(); ++g) {
    if (types_[g] <= d) out.push_back(g);
  }
  return out;
}

}  // namespace ppext
