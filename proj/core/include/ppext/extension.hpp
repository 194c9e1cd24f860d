#pragma once

#include <memory>
#include <vector>

#include "ppext/cutoff.hpp"
#include "ppext/polyops.hpp"
#include "ppext/report.hpp"

namespace ppext {

struct OperatorConfig {
  CantorParams params;
  int n_max = 255;
  int p_max = 2;
  // K grid Y_{s+depth_offset} for 2^s <= n_max + 1
  int depth_offset = 2;
  int samples_per_collar = 8;
};

// Block level s of term N: 2^s <= N < 2^(s+1); term 0 shares delta_1 = ell_0.
int delta_level(int N);

struct ExtensionResult {
  Locus x;
  // W^(j)(f)(x), j = 0..p_max
  std::vector<BigReal> values;
  // max_j |G_N^(j)(x)| for N = 0..n_max
  std::vector<BigReal> term_magnitudes;
  // the last term is below 2^-32 of the accumulated magnitude
  bool converged = false;
};

// W(f) = xi_0 u_{delta_1} + sum_N xi_N omega_N u_{delta_N}, truncated at
// n_max. Holds the Newton coefficients and one cutoff per block level.
class ExtensionOperator {
 public:
  ExtensionOperator(const JetFn& f, OperatorConfig config);

  const OperatorConfig& config() const { return cfg_; }
  const JetFn& function() const { return f_; }
  const NewtonSeries& series() const { return series_; }
  const LevelData& levels() const { return levels_; }
  const NodeSeq& nodes() const { return Z_; }
  int grid_depth() const { return grid_depth_; }
  // u_{ell_s}
  const CutoffFn& cutoff(int s) const { return cutoffs_.at(s); }

  ExtensionResult eval(const Locus& x, int p_max) const;

  // Sample for off-K suprema: the K grid followed by samples_per_collar
  // points in every collar of every u_{ell_s}, s = 0..top block.
  struct Sample {
    std::vector<Locus> points;
    std::size_t on_k = 0;  // points[0..on_k) lie in K
  };
  Sample sample() const;

  // T[N][j] = max over the sample of |G_N^(j)|, j = 0..max(p_max, config p_max).
  // Computed once and cached.
  const std::vector<std::vector<BigReal>>& term_sups(int p_max) const;

 private:
  JetFn f_;
  OperatorConfig cfg_;
  NewtonSeries series_;
  int grid_depth_;
  LevelData levels_;
  NodeSeq Z_;
  std::vector<CutoffFn> cutoffs_;
  struct SupCache;
  std::shared_ptr<SupCache> sups_;
};

ExtensionResult w_eval(const JetFn& f, const Locus& x, const OperatorConfig& config);

// T_N = sup |G_N^(p)| against ell_s ||f||_{r1} (r1 = 2^(w+10)), Cauchy tail,
// decrease past N = 16 and interpolation at the nodes. alpha = 2, ell1 <= 1/3.
Report verify_term_decay(const JetFn& f, int p, const OperatorConfig& config, int w = 3);
Report verify_term_decay(const ExtensionOperator& op, int p, int w = 3);

// |omega~_n|_p against |omega_n|_q with q = 2^(2p+6)+1, reduced to the
// largest 2^w+1 < n when needed. alpha = 2, ell1 <= 1/3.
Report verify_seom(const CantorParams& params, int p, int n_min, int n_max,
                   int samples_per_collar = 8, int depth_offset = 2);

// alpha > 2, N = 2^s, delta = ell_s, z = 1 + theta_p ell_s:
// |omega~_N^(p)(z)| / (N^q prod_{k>q} d_k(1)).
Report violation_demo(const CantorParams& params, int s_min, int s_max,
                      const std::vector<int>& q_list);
// Smallest even integer above (2 alpha - 3)/(alpha - 2).
int violation_order(const CantorParams& params);

// K = [-eps, eps] in I = [-1, 1], Q(x) = x.
Report interval_demo(const Rational& eps, const Rational& delta, int samples = 10000);

}  // namespace ppext
