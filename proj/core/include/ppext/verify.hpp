#pragma once

#include <cstdint>
#include <vector>

#include "ppext/cantor.hpp"
#include "ppext/nodes.hpp"
#include "ppext/polyops.hpp"
#include "ppext/report.hpp"

namespace ppext {

// Degrees N are polynomial degrees; the node sets have N+1 points.
struct GridSweepOptions {
  long n_min = 1;
  long n_max = 256;
  // grid Y_{s+depth_offset} with 2^s <= N+1 < 2^(s+1)
  int depth_offset = 2;
  bool pi = true;
  bool lemma = true;
  bool lebesgue = true;
};

struct GridSweepReports {
  Report pi;
  Report lemma;
  Report lebesgue;
};

// One pass over the node/grid difference table serving the three
// statements below.
GridSweepReports grid_sweep(const CantorParams& params, const GridSweepOptions& options);

// |omega_{N+1}| <= prod rho_k on the grid; h0^(N+1) prod l^lambda <=
// |omega_{N+1}(x_{N+2})| <= prod l^lambda; h0^N prod l^mu <= |a_k(x_k)| <= prod l^mu.
Report verify_pi_bounds(const CantorParams& params, long n_min, long n_max,
                        int depth_offset = 2);
// grid max |a_k| <= h0^-N |a_k(x_k)| for every k
Report verify_lemma_max(const CantorParams& params, long n_min, long n_max,
                        int depth_offset = 2);
// grid Lebesgue constant <= h0^-N (N+1)
Report verify_lebesgue(const CantorParams& params, long n_min, long n_max,
                       int depth_offset = 2);

// N = 2^s: h0^(N-p)/(rho_1..rho_p) <= |omega_N^(p)(0)| / grid max |omega_N|
// <= h0^-N (N+1) N^p/(rho_1..rho_p).
Report verify_markov(const CantorParams& params, int s_min, int s_max,
                     const std::vector<int>& p_list, int depth_offset = 2);

// alpha = 2, ell1 <= 1/4, N = 2^s + 2, k = N+1, y = l2 - ls.
struct NotLejaConstants {
  Rational sigma;
  Rational sigma1;
  Rational M;
};
NotLejaConstants not_leja_constants(const CantorParams& params);
Report verify_not_leja(const CantorParams& params, int s_min, int s_max, int r = 5);

// Findings: |omega_n(x_{n+1})| against the grid max of |omega_n| for n <= n_max.
Report verify_leja_trend(const CantorParams& params, long n_max, int depth_offset = 2);

// |omega_{N+1}^(q)(0)| >= h0^(N+1-q) rho_q ... rho_{N+1}, q = 2^w + 1 < N + 1.
Report verify_qqq(const CantorParams& params, const std::vector<long>& n_list,
                  const std::vector<int>& w_list);

}  // namespace ppext
