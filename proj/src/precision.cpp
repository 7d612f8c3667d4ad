#include "semijacobi/precision.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace semijacobi {

void PrecisionContext::validate() const {
  if (mantissa_bits < 64) throw std::invalid_argument("mantissa_bits must be at least 64");
  if (agreement_digits == 0) throw std::invalid_argument("agreement_digits must be positive");
}

Real PrecisionContext::tolerance() const {
  return pow(Real(10), -static_cast<long>(agreement_digits));
}

PrecisionContext PrecisionContext::for_degree(int n_max, unsigned agreement_digits, bool half_size) {
  PrecisionContext ctx;
  ctx.agreement_digits = agreement_digits;
  const mpfr_prec_t per_degree = half_size ? 3 : 6;
  ctx.mantissa_bits = std::max<mpfr_prec_t>(64 + per_degree * static_cast<mpfr_prec_t>(std::max(n_max, 0)),
                                            digits_to_bits(agreement_digits) + 64);
  return ctx;
}

namespace {

Real scale_of(const Real& a, const Real& b, AgreementScale scale) {
  Real s = max(abs(a), abs(b));
  if (scale == AgreementScale::mixed && s < Real(1)) s = Real(1);
  return s;
}

}  // namespace

bool agrees(const Real& a, const Real& b, unsigned digits, AgreementScale scale) {
  WorkingPrecision guard(std::max(a.precision(), b.precision()));
  Real diff = abs(a - b);
  if (diff.is_zero()) return true;
  Real tol = pow(Real(10), -static_cast<long>(digits));
  return diff <= tol * scale_of(a, b, scale);
}

double discrepancy(const Real& a, const Real& b, AgreementScale scale) {
  WorkingPrecision guard(std::max(a.precision(), b.precision()));
  Real diff = abs(a - b);
  if (diff.is_zero()) return 0.0;
  Real s = scale_of(a, b, scale);
  if (s.is_zero()) return std::numeric_limits<double>::infinity();
  return (diff / s).to_double();
}

}  // namespace semijacobi
