#pragma once

#include <string>
#include <vector>

#include "ppext/numerics.hpp"

namespace ppext {

// Per-experiment restrictions on (alpha, ell1) beyond the standing
// assumptions of the construction.
enum class Constraint {
  kEll1AtMostQuarter,
  kEll1AtMostThird,
  kAlphaIsTwo,
  kAlphaAtLeastTwo,
  kAlphaAboveTwo,
};

std::string describe(Constraint c);

struct CantorParams {
  Rational alpha;
  Rational ell1;
  std::vector<Constraint> constraint_profile;

  // Parses both values exactly and validates the standing assumptions.
  static CantorParams parse(std::string_view alpha, std::string_view ell1);

  // alpha > 1, 0 < ell1 < 1/2, 2 * ell1^(alpha-1) < 1.
  void validate() const;
  // Throws HypothesisError naming the first violated constraint.
  void require(const std::string& statement) const;
  bool satisfies(Constraint c) const;

  std::string alpha_string() const { return rational_string(alpha); }
  std::string ell1_string() const { return rational_string(ell1); }
};

}  // namespace ppext
