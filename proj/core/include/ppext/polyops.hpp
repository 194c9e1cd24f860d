#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ppext/cantor.hpp"
#include "ppext/jet.hpp"
#include "ppext/nodes.hpp"

namespace ppext {

// values[j] = P^(j)(x), j = 0..p_max
struct PolyEvalResult {
  std::vector<BigReal> values;
  const BigReal& operator[](std::size_t j) const { return values.at(j); }
};

// Running derivatives of a product of linear factors (x - r). multiply()
// takes the difference x - r.
class ProductJet {
 public:
  ProductJet(int p_max, Bits width);
  void multiply(const BigReal& diff);
  const PolyEvalResult& result() const { return r_; }
  int factors() const { return factors_; }

 private:
  PolyEvalResult r_;
  BigReal tmp_;
  int factors_ = 0;
};

PolyEvalResult product_derivs(std::span<const BigReal> diffs, int p_max, Bits width);
PolyEvalResult product_derivs(const std::vector<BigReal>& roots, const BigReal& x,
                              int p_max, Bits width);
PolyEvalResult product_derivs(const std::vector<PointExpr>& roots, const Locus& x,
                              int p_max, const LevelData& levels, Bits width);

// omega_n(x) = prod_{i=1}^n (x - x_i)
PolyEvalResult omega_eval(std::size_t n, const NodeSeq& Z, const Locus& x, int p_max,
                          const LevelData& levels, Bits width);
// a_k(x) = prod_{i != k} (x - x_i) over all of Z.
PolyEvalResult a_k_eval(std::size_t k, const NodeSeq& Z, const Locus& x, int p_max,
                        const LevelData& levels, Bits width);

struct DividedDiff {
  int order = 0;
  BigReal value;
  Bits width = 0;
};

// xi_0(f)..xi_{n_max}(f) over the rule-ordered nodes, from the explicit sum
// sum_k f(x_k) / omega'_{n+1}(x_k), stabilized by width doubling.
std::vector<DividedDiff> divided_differences(const JetFn& f, const CantorParams& params,
                                             int n_max, double rel_tol = 0x1p-64,
                                             const AdaptiveOptions& options = {});
DividedDiff divided_difference(const JetFn& f, const CantorParams& params, int n,
                               double rel_tol = 0x1p-64);

// Max over the grid of sum_k |a_k(x) / a_k(x_k)|; a lower estimate of the
// true sup over K.
BigReal lebesgue_constant(const NodeSeq& Z, const std::vector<PointExpr>& grid,
                          const LevelData& levels, Bits width = kWorkingWidth);

// Newton series of f on the rule-ordered nodes with cached coefficients.
class NewtonSeries {
 public:
  NewtonSeries(const JetFn& f, const CantorParams& params, int n_max,
               double rel_tol = 0x1p-64);
  NewtonSeries(std::string id, std::vector<DividedDiff> xi);

  const std::string& id() const { return id_; }
  int n_max() const { return static_cast<int>(xi_.size()) - 1; }
  const BigReal& xi(int n) const { return xi_.at(n).value; }
  Bits width() const;

  // S_N(f) = sum_{n<=N} xi_n omega_n and its derivatives at x.
  PolyEvalResult partial_sum(int N, const NodeSeq& Z, const Locus& x, int p_max,
                             const LevelData& levels, Bits width) const;

 private:
  std::string id_;
  std::vector<DividedDiff> xi_;
};

PolyEvalResult newton_partial_sum(const JetFn& f, const CantorParams& params, int N,
                                  const Locus& x, int p_max, Bits width);

// Differences x_g - x_i between the points of Y_depth and the first n
// nodes, rounded to width from absolutely accurate realizations. Zero
// exactly when the grid point is the node.
class GridTable {
 public:
  GridTable(const LevelData& levels, const NodeSeq& Z, int depth,
            Bits width = kWorkingWidth);

  int depth() const { return depth_; }
  std::size_t grid_size() const { return addrs_.size(); }
  std::size_t nodes() const { return nodes_; }
  Bits width() const { return width_; }
  const Address& address(std::size_t g) const { return addrs_[g]; }
  // Smallest d with the grid point in Y_d.
  int point_type(std::size_t g) const { return types_[g]; }
  // Grid position of node k (1-based).
  std::size_t node_position(std::size_t k) const { return node_pos_.at(k - 1); }
  // Node sitting at grid point g, if any (1-based).
  std::optional<std::size_t> node_at(std::size_t g) const;
  // x_g - x_i, i 1-based
  const BigReal& diff(std::size_t g, std::size_t i) const {
    return d_[g * nodes_ + (i - 1)];
  }
  // x_k - x_i
  const BigReal& node_diff(std::size_t k, std::size_t i) const {
    return diff(node_pos_.at(k - 1), i);
  }
  // Grid indices of Y_d in ascending order.
  std::vector<std::size_t> points_of_type(int d) const;

 private:
  int depth_;
  std::size_t nodes_;
  Bits width_;
  std::vector<Address> addrs_;
  std::vector<int> types_;
  std::vector<std::size_t> node_pos_;
  std::vector<long> node_of_;  // 0 when no node
  std::vector<BigReal> d_;
};

}  // namespace ppext
