#include "semijacobi/specfun.hpp"

#include <cmath>
#include <map>
#include <string>

#include "semijacobi/errors.hpp"

namespace semijacobi {

WeightParams::WeightParams(Real alpha_, Real t_) : alpha(std::move(alpha_)), t(std::move(t_)) {
  if (!alpha.is_finite() || !t.is_finite()) throw DomainError("weight parameters must be finite");
  if (alpha <= Real(-1)) throw DomainError("alpha must exceed -1");
}

WeightParams WeightParams::parse(std::string_view alpha, std::string_view t) {
  return WeightParams(Real::parse(alpha, 1024), Real::parse(t, 1024));
}

namespace working {

namespace {

constexpr long kMaxSeriesTerms = 1000000;

bool is_nonpositive_integer(const Real& b) {
  return b.sign() <= 0 && mpfr_integer_p(b.get()) != 0;
}

// c_k = B_{2k+2} / (4k(k+1)), the coefficients of w^{-2k} in the large-w
// expansion of ln G(w+1). Bernoulli numbers come from zeta(2m).
const Real& barnes_coefficient(unsigned k) {
  thread_local std::map<mpfr_prec_t, std::vector<Real>> cache;
  auto& coeffs = cache[working_precision()];
  while (coeffs.size() <= k) {
    const unsigned kk = static_cast<unsigned>(coeffs.size());
    if (kk == 0) {
      coeffs.emplace_back(0);
      continue;
    }
    const unsigned m = kk + 1;  // B_{2m}
    Real zeta;
    mpfr_zeta_ui(zeta.get(), 2 * m, MPFR_RNDN);
    Real fact;
    mpfr_fac_ui(fact.get(), 2 * m, MPFR_RNDN);
    Real two_pi = 2 * Real::pi();
    Real bern = 2 * fact * zeta / pow(two_pi, static_cast<long>(2 * m));
    if (m % 2 == 0) bern = -bern;
    coeffs.push_back(bern / (4 * static_cast<long>(kk) * static_cast<long>(kk + 1)));
  }
  return coeffs[k];
}

// ln G(w+1) from the large-argument expansion; w must be large enough for the
// requested precision (see log_barnes_g).
Real log_barnes_g_asymptotic(const Real& w) {
  const Real lw = log(w);
  const Real w2 = square(w);
  Real sum = w2 * (lw / 2 - Real::ratio(3, 4)) + w / 2 * log(2 * Real::pi()) - lw / 12 +
             Real::ratio(1, 12) - log_glaisher();
  const Real inv_w2 = 1 / w2;
  const Real eps = Real::pow2(-working_precision() - 8) * abs(sum);
  Real power = inv_w2;
  Real previous_term;
  for (unsigned k = 1;; ++k) {
    Real term = barnes_coefficient(k) * power;
    if (abs(term) <= eps) break;
    if (k > 2 && abs(term) > abs(previous_term)) {
      throw PrecisionError("Barnes G expansion diverged before reaching working precision");
    }
    sum += term;
    previous_term = term;
    power *= inv_w2;
  }
  return sum;
}

}  // namespace

Real log_gamma(const Real& z) {
  if (z.sign() <= 0) throw DomainError("log_gamma requires z > 0");
  return lngamma(z);
}

Real kummer_series(const Real& a, const Real& b, const Real& z) {
  if (is_nonpositive_integer(b)) throw DomainError("kummer_phi: b must not be a nonpositive integer");
  Real sum(1);
  Real term(1);
  const long shift = working_precision() + 8;
  int small = 0;
  for (long k = 0; k < kMaxSeriesTerms; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1));
    sum += term;
    if (abs(term) <= ldexp(abs(sum), -shift)) {
      if (++small == 3) return sum;
    } else {
      small = 0;
    }
  }
  throw PrecisionError("kummer_phi: series did not settle within 10^6 terms");
}

Real kummer_phi(const Real& a, const Real& b, const Real& z) {
  if (z.sign() < 0) return exp(z) * kummer_series(b - a, b, -z);
  return kummer_series(a, b, z);
}

Real moment(unsigned j, const WeightParams& params) {
  if (j % 2 == 1) return Real(0);
  const Real& alpha = params.alpha;
  const Real a = Real::ratio(static_cast<long>(j) + 1, 2);
  const Real b = Real::ratio(static_cast<long>(j) + 3, 2) + alpha;
  return exp(lngamma(1 + alpha) + lngamma(a) - lngamma(b)) * kummer_phi(a, b, -params.t);
}

std::vector<Real> even_moments(unsigned count, const WeightParams& params) {
  std::vector<Real> mu;
  mu.reserve(count);
  const Real& alpha = params.alpha;
  const Real half = Real::ratio(1, 2);
  // g_k = Gamma(1+alpha) Gamma(k+1/2) / Gamma(k+3/2+alpha)
  Real g = exp(lngamma(1 + alpha) + lngamma(half) - lngamma(half + 1 + alpha));
  const Real minus_t = -params.t;
  for (unsigned k = 0; k < count; ++k) {
    const Real a = half + static_cast<long>(k);
    const Real b = a + 1 + alpha;
    mu.push_back(g * kummer_phi(a, b, minus_t));
    g *= a / b;
  }
  return mu;
}

Real log_glaisher() { return log(Real::parse(kGlaisherDigits, working_precision())); }

Real log_barnes_g(const Real& z) {
  if (z.sign() <= 0) throw DomainError("log_barnes_g requires z > 0");
  if (z == Real(1) || z == Real(2)) return Real(0);
  const mpfr_prec_t target = working_precision();
  Real result;
  {
    WorkingPrecision guard(target + 32);
    // e^{-2 pi w} must fall below the working epsilon.
    const double w_min = 0.12 * static_cast<double>(target + 64) + 8.0;
    const double zd = z.to_double();
    const long shift = zd >= w_min + 1 ? 0 : static_cast<long>(std::ceil(w_min + 1 - zd));
    const Real w = z + shift - 1;
    Real value = log_barnes_g_asymptotic(w);
    if (shift > 0) {
      // ln G(z) = ln G(z+N) - N ln Gamma(z) - sum_{m=0}^{N-2} (N-1-m) ln(z+m)
      value -= shift * lngamma(z);
      for (long m = 0; m + 2 <= shift; ++m) value -= (shift - 1 - m) * log(z + m);
    }
    result = std::move(value);
  }
  return result.rounded(target);
}

Real log_barnes_g_half() {
  return Real::ln2() / 24 - log(Real::pi()) / 4 + Real::ratio(1, 8) - 3 * log_glaisher() / 2;
}

}  // namespace working

Real log_gamma(const Real& z, const PrecisionContext& ctx) {
  if (z.sign() <= 0) throw DomainError("log_gamma requires z > 0");
  return certified_scalar(ctx, [&] { return working::log_gamma(z); }, AgreementScale::mixed);
}

Real kummer_phi(const Real& a, const Real& b, const Real& z, const PrecisionContext& ctx) {
  if (working::is_nonpositive_integer(b)) {
    throw DomainError("kummer_phi: b must not be a nonpositive integer");
  }
  return certified_scalar(ctx, [&] { return working::kummer_phi(a, b, z); });
}

Real moment(unsigned j, const WeightParams& params, const PrecisionContext& ctx) {
  if (j % 2 == 1) {
    WorkingPrecision guard(ctx.mantissa_bits);
    return Real(0);
  }
  return certified_scalar(ctx, [&] { return working::moment(j, params); });
}

Real log_barnes_g(const Real& z, const PrecisionContext& ctx) {
  if (z.sign() <= 0) throw DomainError("log_barnes_g requires z > 0");
  return certified_scalar(ctx, [&] { return working::log_barnes_g(z); }, AgreementScale::mixed);
}

}  // namespace semijacobi
