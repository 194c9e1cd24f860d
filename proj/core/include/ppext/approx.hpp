#pragma once

#include <vector>

#include "ppext/jet.hpp"
#include "ppext/polyops.hpp"
#include "ppext/report.hpp"

namespace ppext {

// Grid max of |omega_n| over Y_depth for n = 0..n_max (omega_0 = 1).
std::vector<BigReal> omega_grid_max(const CantorParams& params, int n_max, int depth);
// Y_{s+depth_offset} with 2^s <= n_max + 1 < 2^(s+1).
int tail_grid_depth(int n_max, int depth_offset = 2);

struct TailEstimate {
  BigReal value;
  int N = 0;
  int n_tail = 0;
  BigReal last_term;
  // last term >= 2^-32 of the sum: truncation may matter
  bool truncation_flag = false;
};

// sum_{n=N+1}^{N+n_tail} |xi_n(f)| * grid max |omega_n|. series and
// omega_max must reach N + n_tail. Throws TailNotConvergedError when the
// terms do not decrease over the window.
TailEstimate en_tail_upper(const NewtonSeries& series,
                           const std::vector<BigReal>& omega_max, int N, int n_tail);
TailEstimate en_tail_upper(const JetFn& f, const CantorParams& params, int N,
                           int n_tail = 24, int depth_offset = 2);

struct ExchangeResult {
  BigReal value;  // levelled error at the final reference
  int iterations = 0;
  std::vector<std::size_t> reference;  // indices into the grid
};

// Discrete best uniform approximation by degree-N polynomials on the
// given points (strictly increasing), single-point exchange.
ExchangeResult en_grid_exchange(const std::vector<BigReal>& x, const std::vector<BigReal>& fx,
                                int N, int max_iterations = 0);
// On the exact points of grid, realized at width.
ExchangeResult en_grid_exchange(const JetFn& f, int N, const std::vector<PointExpr>& grid,
                                const LevelData& levels, Bits width);
// On Y_{s+depth_offset} of K^alpha.
ExchangeResult en_grid_exchange(const JetFn& f, const CantorParams& params, int N,
                                int depth_offset = 2);

enum class NormMode { kEmpirical, kAnalytic };

// |f|_{q,K} + sup |(R_y^q f)^(k)(x)| |x-y|^(k-q). Empirical mode takes
// the sups over the points of Y_depth (q <= 16); analytic mode uses the
// derivative bounds on [0, 1] with the remainder constant e.
BigReal whitney_norm(const JetFn& f, int q, NormMode mode, const CantorParams& params,
                     int depth = 4);

// E_N upper / (rho_1 ... rho_q(N+1) ||f||_{q1}), q = 2^w, q1 = 2^(w+8) + 1.
Report verify_jackson(const JetFn& f, const CantorParams& params, int w,
                      const std::vector<int>& n_list, int n_tail = 24);

// alpha = 2: M_N^(p) upper bound * E_{N-1} upper <= rho_{p+1} ... rho_r(N+1) ||f||_{r1},
// r = 2^w, r1 = 2^(w+10), for N past a reported threshold.
Report verify_mf_jt(const JetFn& f, const CantorParams& params, int p, int w,
                    const std::vector<int>& n_list, int n_tail = 24);

}  // namespace ppext
