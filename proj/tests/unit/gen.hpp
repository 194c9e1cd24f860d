#pragma once

// Small deterministic generators for property tests. Each case gets its
// own seed so a failure message pins down the input.

#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ppext/numerics.hpp"

namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(rng_() % span);
  }
  bool coin() { return (rng_() & 1) != 0; }
  // p/q with |p| <= max_num, 1 <= q <= max_den
  ppext::Rational rational(long max_num, long max_den) {
    ppext::Rational q(integer(-max_num, max_num), integer(1, max_den));
    q.canonicalize();
    return q;
  }
  ppext::Rational rational_in(const ppext::Rational& lo, const ppext::Rational& hi,
                              long resolution = 1L << 20) {
    ppext::Rational t(integer(0, resolution), resolution);
    return lo + (hi - lo) * t;
  }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<long>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 rng_;
};

// Runs prop on `cases` seeds derived from base; stops at the first failure.
inline void for_all(int cases, std::uint64_t base, const std::function<void(Gen&)>& prop) {
  for (int i = 0; i < cases; ++i) {
    std::uint64_t seed = base * 1000003ULL + static_cast<std::uint64_t>(i);
    Gen g(seed);
    SCOPED_TRACE("case seed " + std::to_string(seed));
    prop(g);
    if (::testing::Test::HasFailure()) return;
  }
}

}  // namespace gen
