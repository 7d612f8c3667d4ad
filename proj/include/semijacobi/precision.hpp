#ifndef SEMIJACOBI_PRECISION_HPP
#define SEMIJACOBI_PRECISION_HPP

#include <algorithm>
#include <string>
#include <utility>

#include "semijacobi/errors.hpp"
#include "semijacobi/real.hpp"

namespace semijacobi {

/// Working mantissa width plus the doubling policy that certifies results.
///
/// A top-level value is computed at `mantissa_bits` and again at twice that;
/// it is accepted once two successive precisions agree to `agreement_digits`
/// digits. At most `max_doublings` doublings are attempted.
struct PrecisionContext {
  mpfr_prec_t mantissa_bits = 128;
  unsigned max_doublings = 3;
  unsigned agreement_digits = 25;

  /// Throws std::invalid_argument when mantissa_bits < 64 or agreement_digits == 0.
  void validate() const;

  /// 10^-agreement_digits at the working precision.
  Real tolerance() const;

  /// Starting precision for a moment-matrix pipeline up to degree n_max:
  /// 64 + 6 n_max bits (64 + 3 n_max when the Gram matrix is factored as two
  /// half-size blocks), never less than the agreement target plus 64 bits.
  static PrecisionContext for_degree(int n_max, unsigned agreement_digits = 25, bool half_size = false);
};

/// How two results are compared when deciding agreement.
enum class AgreementScale {
  relative,  // |a-b| <= tol * max(|a|,|b|)
  mixed,     // |a-b| <= tol * max(|a|,|b|,1); for logarithms and values near 0
};

bool agrees(const Real& a, const Real& b, unsigned digits, AgreementScale scale);

/// Relative (or mixed) discrepancy |a-b|/scale as a double, for reporting.
double discrepancy(const Real& a, const Real& b, AgreementScale scale);

template <typename T>
struct Certified {
  T value;
  mpfr_prec_t bits = 0;  // precision of the accepted run
};

/// Runs `compute()` under WorkingPrecision(bits) for bits = B, 2B, 4B, ...
/// until `agree(previous, current)` holds. `compute` may throw
/// PrecisionError to request a retry at the next precision.
template <typename F, typename A>
auto with_doubling(const PrecisionContext& ctx, F&& compute, A&& agree)
    -> Certified<decltype(compute())> {
  using T = decltype(compute());
  ctx.validate();
  mpfr_prec_t bits = ctx.mantissa_bits;
  auto run = [&](mpfr_prec_t b) -> std::pair<bool, T> {
    WorkingPrecision guard(b);
    try {
      return {true, compute()};
    } catch (const ConditioningError&) {
      if (b >= (ctx.mantissa_bits << ctx.max_doublings)) throw;
      return {false, T{}};
    }
  };
  auto [ok_prev, prev] = run(bits);
  for (unsigned k = 0; k < ctx.max_doublings; ++k) {
    bits *= 2;
    auto [ok_cur, cur] = run(bits);
    if (ok_prev && ok_cur && agree(prev, cur)) return {std::move(cur), bits};
    ok_prev = ok_cur;
    prev = std::move(cur);
  }
  throw PrecisionError("no agreement to " + std::to_string(ctx.agreement_digits) +
                       " digits up to " + std::to_string(bits) + " bits");
}

/// Scalar convenience wrapper around with_doubling.
template <typename F>
Real certified_scalar(const PrecisionContext& ctx, F&& compute,
                      AgreementScale scale = AgreementScale::relative) {
  auto result = with_doubling(ctx, std::forward<F>(compute), [&](const Real& a, const Real& b) {
    return agrees(a, b, ctx.agreement_digits, scale);
  });
  return std::move(result.value);
}

}  // namespace semijacobi

#endif  // SEMIJACOBI_PRECISION_HPP
