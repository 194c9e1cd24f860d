#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ppext/numerics.hpp"
#include "ppext/params.hpp"

namespace ppext {

// A smooth function with all derivatives available at any width, plus
// sup bounds B_k(lo, hi) >= max |f^(k)| on [lo, hi].
class JetFn {
 public:
  using Deriv = std::function<BigReal(int k, const BigReal& x)>;
  using Bound = std::function<BigReal(int k, const BigReal& lo, const BigReal& hi)>;

  JetFn(std::string id, Deriv deriv, Bound bound, int degree = -1);

  const std::string& id() const { return id_; }
  // f^(k)(x) rounded to the width of x.
  BigReal deriv(int k, const BigReal& x) const;
  BigReal operator()(const BigReal& x) const { return deriv(0, x); }
  // Bound on [lo, hi]; throws RangeError where f is not bounded.
  BigReal bound(int k, const BigReal& lo, const BigReal& hi) const;
  // Degree when f is a polynomial, -1 otherwise.
  int degree() const { return degree_; }

 private:
  std::string id_;
  Deriv deriv_;
  Bound bound_;
  int degree_;
};

JetFn jet_exp(const Rational& c = 1);
JetFn jet_sin(const Rational& c = 1);
// Coefficients in ascending order.
JetFn jet_polynomial(std::vector<Rational> coeffs);
// 1/(x + shift), shift > 0 keeps [0, 1] away from the pole.
JetFn jet_reciprocal(const Rational& shift = 2);
// omega_m(x) = prod_{i<=m} (x - x_i) for the nodes of K^alpha.
JetFn jet_node_polynomial(const CantorParams& params, int m);

// Catalog lookup by id: "exp", "exp:c", "sin", "sin:c", "recip", "poly:c0,c1,..",
// "omega:m". Throws ParameterError for unknown ids.
JetFn jet_from_id(const std::string& id, const CantorParams& params);

}  // namespace ppext
