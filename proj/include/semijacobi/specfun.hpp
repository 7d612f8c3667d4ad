// Extended-precision scalar special functions and the closed-form moments of
// the weight w(x,t) = (1-x^2)^alpha exp(-t x^2) on [-1,1].

#ifndef SEMIJACOBI_SPECFUN_HPP
#define SEMIJACOBI_SPECFUN_HPP

#include <string_view>
#include <vector>

#include "semijacobi/precision.hpp"
#include "semijacobi/real.hpp"

namespace semijacobi {

/// The pair (alpha, t) defining the weight. alpha > -1 is enforced.
struct WeightParams {
  Real alpha;
  Real t;

  WeightParams() : alpha(0), t(0) {}
  WeightParams(Real alpha_, Real t_);
  /// Parses decimal strings at 1024 bits so that every later precision sees
  /// the same binary values.
  static WeightParams parse(std::string_view alpha, std::string_view t);

  /// Copy with a different t.
  WeightParams at(const Real& new_t) const { return WeightParams(alpha, new_t); }
};

/// Glaisher-Kinkelin constant, hard-coded to 100 significant digits
/// (mpmath 1.3.0, `mp.glaisher` at 110 dps).
inline constexpr std::string_view kGlaisherDigits =
    "1.282427129100622636875342568869791727767688927325001192063740021740406308858826461129736491958202374";

// Single-precision-level evaluators. Each computes at the calling thread's
// working precision with no doubling; the pipelines built on top of them
// certify the final results.
namespace working {

Real log_gamma(const Real& z);
/// Raw power series of Phi(a,b;z), no transformation.
Real kummer_series(const Real& a, const Real& b, const Real& z);
/// Phi(a,b;z); z < 0 goes through Phi(a,b;z) = e^z Phi(b-a,b;-z).
Real kummer_phi(const Real& a, const Real& b, const Real& z);
Real moment(unsigned j, const WeightParams& params);
/// mu_0, mu_2, ..., mu_{2(count-1)} using the gamma-ratio recurrence.
std::vector<Real> even_moments(unsigned count, const WeightParams& params);
Real log_glaisher();
Real log_barnes_g(const Real& z);
/// ln G(1/2) = ln 2/24 - ln(pi)/4 + 1/8 - 3/2 ln A.
Real log_barnes_g_half();

}  // namespace working

/// ln Gamma(z) for z > 0.
Real log_gamma(const Real& z, const PrecisionContext& ctx);

/// Kummer's confluent hypergeometric function Phi(a,b;z) = sum (a)_k/(b)_k z^k/k!.
/// Throws DomainError when b is a nonpositive integer, PrecisionError when the
/// series does not settle within 10^6 terms.
Real kummer_phi(const Real& a, const Real& b, const Real& z, const PrecisionContext& ctx);

/// mu_j(t) = int_{-1}^{1} x^j w(x,t) dx in closed form; exactly zero for odd j.
Real moment(unsigned j, const WeightParams& params, const PrecisionContext& ctx);

/// ln G(z) for z > 0, G the Barnes G-function with G(1) = 1.
Real log_barnes_g(const Real& z, const PrecisionContext& ctx);

}  // namespace semijacobi

#endif  // SEMIJACOBI_SPECFUN_HPP
