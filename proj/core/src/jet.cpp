#include "ppext/jet.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include "ppext/cantor.hpp"
#include "ppext/nodes.hpp"
#include "ppext/polyops.hpp"

namespace ppext {

JetFn::JetFn(std::string id, Deriv deriv, Bound bound, int degree)
    : id_(std::move(id)), deriv_(std::move(deriv)), bound_(std::move(bound)),
      degree_(degree) {}

BigReal JetFn::deriv(int k, const BigReal& x) const {
  if (k < 0) throw RangeError("negative derivative order");
  return deriv_(k, x);
}

BigReal JetFn::bound(int k, const BigReal& lo, const BigReal& hi) const {
  if (k < 0) throw RangeError("negative derivative order");
  if (hi < lo) throw RangeError("empty interval");
  return bound_(k, lo, hi);
}

namespace {

BigReal pow_abs(const Rational& c, int k, Bits w) {
  return pow(abs(BigReal::from_rational(c, w)), static_cast<long>(k));
}

}  // namespace

JetFn jet_exp(const Rational& c) {
  std::string id = c == 1 ? "exp" : "exp:" + rational_string(c);
  auto d = [c](int k, const BigReal& x) {
    Bits w = x.width();
    BigReal cc = BigReal::from_rational(c, w + 32);
    BigReal v = pow(cc, static_cast<long>(k)) * exp(cc * x.rounded(w + 32));
    return v.rounded(w);
  };
  auto b = [c](int k, const BigReal& lo, const BigReal& hi) {
    Bits w = std::max(lo.width(), hi.width());
    BigReal cc = BigReal::from_rational(c, w);
    BigReal top = max(cc * lo, cc * hi);
    return pow_abs(c, k, w) * exp(top);
  };
  return JetFn(id, d, b);
}

JetFn jet_sin(const Rational& c) {
  std::string id = c == 1 ? "sin" : "sin:" + rational_string(c);
  auto d = [c](int k, const BigReal& x) {
    Bits w = x.width() + 32;
    BigReal cc = BigReal::from_rational(c, w);
    BigReal arg = cc * x.rounded(w);
    // sin(t + k pi/2)
    BigReal v(w);
    switch (k % 4) {
      case 0: mpfr_sin(v.get(), arg.get(), MPFR_RNDN); break;
      case 1: mpfr_cos(v.get(), arg.get(), MPFR_RNDN); break;
      case 2: mpfr_sin(v.get(), arg.get(), MPFR_RNDN); v = -v; break;
      default: mpfr_cos(v.get(), arg.get(), MPFR_RNDN); v = -v; break;
    }
    return (pow(cc, static_cast<long>(k)) * v).rounded(x.width());
  };
  auto b = [c](int k, const BigReal& lo, const BigReal& hi) {
    return pow_abs(c, k, std::max(lo.width(), hi.width()));
  };
  return JetFn(id, d, b);
}

JetFn jet_polynomial(std::vector<Rational> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back(0);
  std::string id = "poly:";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) id += ",";
    id += rational_string(coeffs[i]);
  }
  int degree = static_cast<int>(coeffs.size()) - 1;
  // coefficients of the k-th derivative
  auto derived = [coeffs](int k) {
    std::vector<Rational> out;
    for (std::size_t i = k; i < coeffs.size(); ++i) {
      Rational f = coeffs[i];
      for (int j = 0; j < k; ++j) f *= static_cast<long>(i - j);
      out.push_back(f);
    }
    return out;
  };
  auto d = [derived](int k, const BigReal& x) {
    Bits w = x.width() + 32;
    std::vector<Rational> c = derived(k);
    BigReal acc(w);
    BigReal xx = x.rounded(w);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      acc = acc * xx + BigReal::from_rational(*it, w);
    }
    return acc.rounded(x.width());
  };
  auto b = [derived](int k, const BigReal& lo, const BigReal& hi) {
    Bits w = std::max(lo.width(), hi.width());
    BigReal r = max(abs(lo), abs(hi));
    BigReal acc(w);
    std::vector<Rational> c = derived(k);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      acc = acc * r + abs(BigReal::from_rational(*it, w));
    }
    return acc;
  };
  return JetFn(id, d, b, degree);
}

JetFn jet_reciprocal(const Rational& shift) {
  if (shift <= 0) throw ParameterError("reciprocal shift must be positive");
  std::string id = shift == 2 ? "recip" : "recip:" + rational_string(shift);
  auto d = [shift](int k, const BigReal& x) {
    Bits w = x.width() + 32;
    BigReal y = x.rounded(w) + BigReal::from_rational(shift, w);
    BigReal v = factorial(k, w) / pow(y, static_cast<long>(k + 1));
    if (k % 2 == 1) v = -v;
    return v.rounded(x.width());
  };
  auto b = [shift](int k, const BigReal& lo, const BigReal& hi) {
    Bits w = std::max(lo.width(), hi.width());
    BigReal y = lo + BigReal::from_rational(shift, w);
    if (y.sign() <= 0) {
      throw RangeError("1/(x+" + rational_string(shift) + ") is unbounded on the interval");
    }
    (void)hi;
    return factorial(k, w) / pow(y, static_cast<long>(k + 1));
  };
  return JetFn(id, d, b);
}

JetFn jet_node_polynomial(const CantorParams& params, int m) {
  if (m < 0) throw RangeError("negative node count");
  struct Cache {
    std::mutex mu;
    std::map<Bits, std::vector<BigReal>> roots;
  };
  auto cache = std::make_shared<Cache>();
  NodeSeq Z = enumerate_nodes(std::max(m, 1));
  auto roots_at = [cache, params, Z, m](Bits w) {
    std::lock_guard<std::mutex> lock(cache->mu);
    auto it = cache->roots.find(w);
    if (it != cache->roots.end()) return it->second;
    int depth = std::max(Z.max_type(), 1);
    LevelData levels(params, depth, std::max(w + 64, required_bits(params, depth)));
    std::vector<BigReal> r;
    for (int i = 0; i < m; ++i) r.push_back(eval_point(Z.points[i], levels, w + 64));
    cache->roots.emplace(w, r);
    return r;
  };
  auto d = [roots_at, m](int k, const BigReal& x) {
    if (k > m) return BigReal(x.width());
    std::vector<BigReal> roots = roots_at(x.width());
    PolyEvalResult r = product_derivs(roots, x.rounded(x.width() + 64), k, x.width() + 64);
    return r.values[k].rounded(x.width());
  };
  auto b = [roots_at, m](int k, const BigReal& lo, const BigReal& hi) {
    // |omega^(k)| <= m!/(m-k)! * R^(m-k) with R the largest distance to a root
    Bits w = std::max(lo.width(), hi.width());
    if (k > m) return BigReal(w);
    std::vector<BigReal> roots = roots_at(w);
    BigReal R(w);
    for (const BigReal& r : roots) R = max(R, max(abs(lo - r), abs(hi - r)));
    BigReal f = factorial(m, w) / factorial(m - k, w);
    return f * pow(R, static_cast<long>(m - k));
  };
  return JetFn("omega:" + std::to_string(m), d, b, m);
}

JetFn jet_from_id(const std::string& id, const CantorParams& params) {
  auto colon = id.find(':');
  std::string head = id.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : id.substr(colon + 1);
  try {
    if (head == "exp") return jet_exp(arg.empty() ? Rational(1) : parse_rational(arg));
    if (head == "sin") return jet_sin(arg.empty() ? Rational(1) : parse_rational(arg));
    if (head == "recip") return jet_reciprocal(arg.empty() ? Rational(2) : parse_rational(arg));
    if (head == "omega" && !arg.empty()) return jet_node_polynomial(params, std::stoi(arg));
    if (head == "poly" && !arg.empty()) {
      std::vector<Rational> c;
      std::stringstream ss(arg);
      std::string item;
      while (std::getline(ss, item, ',')) c.push_back(parse_rational(item));
      return jet_polynomial(c);
    }
  } catch (const std::invalid_argument&) {
  }
  throw ParameterError("unknown function id '" + id + "'");
}

}  // namespace ppext
