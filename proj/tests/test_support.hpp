#ifndef SEMIJACOBI_TEST_SUPPORT_HPP
#define SEMIJACOBI_TEST_SUPPORT_HPP

#include <algorithm>

#include "semijacobi/real.hpp"

namespace semijacobi::testing {

inline Real rel_err(const Real& a, const Real& b) {
  WorkingPrecision guard(std::max(a.precision(), b.precision()));
  if (a == b) return Real(0);
  return abs(a - b) / max(abs(a), abs(b));
}

inline Real tenth_power(long digits) { return pow(Real(10), -digits); }

// beta_n(0) = n(n+2a) / ((2n-1+2a)(2n+1+2a))
inline Real beta_closed(int n, const Real& a) {
  if (n == 0) return Real(0);
  if (n == 1) return 1 / (3 + 2 * a);  // (1+2a) cancelled; finite at a = -1/2
  return Real(n) * (n + 2 * a) / ((2 * n - 1 + 2 * a) * (2 * n + 1 + 2 * a));
}

}  // namespace semijacobi::testing

#endif
