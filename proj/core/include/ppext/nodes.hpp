#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppext/cantor.hpp"
#include "ppext/report.hpp"

namespace ppext {

struct NodeMeta {
  int type = 0;               // x lies in X_type
  std::uint64_t origin = 0;   // j in x_{2^k+j} = x_j +- ell_k (0 for x_1, x_2)
  int sign = 0;
  Address address;
};

// Nodes x_1..x_n in the order given by the rule of increase of type.
struct NodeSeq {
  std::vector<PointExpr> points;
  std::vector<NodeMeta> meta;

  std::size_t size() const { return points.size(); }
  const PointExpr& operator[](std::size_t k1) const { return points.at(k1 - 1); }
  NodeSeq prefix(std::size_t n) const;
  int max_type() const;
};

// Type level of node x_index (1-based).
int node_type(std::uint64_t index);

NodeSeq enumerate_nodes(std::size_t n);
// Also checks that the needed levels exist in levels.
NodeSeq enumerate_nodes(std::size_t n, const LevelData& levels);

struct BinaryDecomp {
  std::vector<int> exponents;  // strictly decreasing; front() is the top bit
  std::uint64_t value() const;
};

BinaryDecomp binary_decomp(std::uint64_t m);

// x_{N+2} from the binary decomposition of N+1.
PointExpr next_node(std::uint64_t N);

struct UniformityResult {
  bool pass = true;
  // counts[k][i]: nodes in I_{i+1,k} for k = 1..levels
  std::vector<std::vector<long>> counts;
  int first_bad_level = -1;
};

UniformityResult uniform_counts(const std::vector<Address>& points, int max_level);
UniformityResult uniform_counts(const std::vector<PointExpr>& points,
                                const LevelData& levels);
Report check_uniform(const NodeSeq& Z);
Report check_uniform(const std::vector<PointExpr>& Z, const LevelData& levels);

// Checks every prefix of the first n_max nodes incrementally; returns the
// first failing prefix length or 0.
std::size_t first_nonuniform_prefix(std::size_t n_max);

// degrees[j] = exponent of ell_j
struct DegreeVector {
  std::vector<long> degrees;
  long total() const;
  long operator[](std::size_t j) const {
    return j < degrees.size() ? degrees[j] : 0;
  }
};

// rho_1 <= rho_2 <= ...: levels[k-1] is the level i with rho_k = ell_i.
struct RhoProfile {
  std::vector<int> levels;
};

RhoProfile rho_profile(const DegreeVector& d);
DegreeVector lambda_degrees(std::uint64_t n);

struct LambdaProfile {
  DegreeVector degrees;
  RhoProfile rho;
};

LambdaProfile lambda_profile(std::uint64_t n);

// Top level s with 2^s <= m < 2^(s+1).
int top_level(std::uint64_t m);

// mu_j for node x_k (1-based) within Z.
DegreeVector mu_profile(std::size_t k, const NodeSeq& Z);
// nu_j for the point x (located via levels) with x_k excluded.
DegreeVector nu_profile(const PointExpr& x, std::size_t k, const NodeSeq& Z,
                        const LevelData& levels);
// nu_j for the level-s interval with the given index.
DegreeVector nu_profile_for_interval(std::uint64_t interval, std::size_t k,
                                     const NodeSeq& Z);

LogMag product(const RhoProfile& profile, const CantorParams& params);
// Product of the p smallest terms.
LogMag p_smallest(const RhoProfile& profile, std::size_t p,
                  const CantorParams& params);
// Product with the p smallest terms removed.
LogMag p_removed(const RhoProfile& profile, std::size_t p,
                 const CantorParams& params);

struct ProfileSweepOptions {
  std::uint64_t m_min = 2;     // N+1 range
  std::uint64_t m_max = 1026;
  std::size_t max_failures_kept = 8;
};

struct ProfileSweepResult {
  // index 0..4 for the inequalities (a)..(e)
  std::vector<std::string> names;
  std::vector<long long> instances;
  std::vector<long long> failures;
  std::vector<std::string> failure_samples;
  long long grid_points_covered = 0;
  bool integer_weights = true;
  bool pass() const;
};

// All five exponent inequalities over every N+1 in range, every k, every
// level-s class of grid points, and every p <= N (via breakpoints).
ProfileSweepResult sweep_profile_inequalities(const CantorParams& params,
                                              const ProfileSweepOptions& options);

// Direct check of all p for one (N+1, k, x-class); used as a test oracle.
struct ProfileCaseResult {
  bool a = true, b = true, c = true, d = true, e = true;
};

ProfileCaseResult check_profile_case_bruteforce(const CantorParams& params,
                                                const NodeSeq& Z, std::size_t k,
                                                std::uint64_t interval);
ProfileCaseResult check_profile_case_fast(const CantorParams& params,
                                          const NodeSeq& Z, std::size_t k,
                                          std::uint64_t interval);

}  // namespace ppext
