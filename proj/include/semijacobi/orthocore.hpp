// Ground-truth pipeline: moments -> LDL^T of the moment Gram matrix ->
// h_n, beta_n, p(n,t), ln D_n, and monic polynomial evaluation.

#ifndef SEMIJACOBI_ORTHOCORE_HPP
#define SEMIJACOBI_ORTHOCORE_HPP

#include <array>
#include <iosfwd>
#include <vector>

#include "semijacobi/precision.hpp"
#include "semijacobi/quadrature.hpp"
#include "semijacobi/specfun.hpp"

namespace semijacobi {

/// Orthogonal-polynomial data for one weight, indexed by degree n.
///
/// The factorization is of size n_max+2, so the vectors run one or two
/// entries past n_max:
///   h[0..n_max+1], beta[0..n_max+1], p[0..n_max+1], log_d[0..n_max+2]
/// with log_d[n] = ln D_n and D_0 = 1.
struct OrthoTable {
  WeightParams params;
  int n_max = 0;
  std::vector<Real> h;
  std::vector<Real> beta;
  std::vector<Real> p;
  std::vector<Real> log_d;
  mpfr_prec_t bits = 0;           // precision of the accepted run
  unsigned agreement_digits = 0;  // digits certified by the doubling policy
  double error_estimate = 0.0;    // worst discrepancy between the last two runs
  bool even_odd_split = false;
};

struct TableOptions {
  /// Factor the even and odd halves of the checkerboard Gram matrix
  /// separately instead of the full matrix.
  bool even_odd_split = false;
};

/// Builds the table with the doubling policy of `ctx`. Throws
/// ConditioningError (with the offending n) when a pivot is not positive at
/// the largest allowed precision.
OrthoTable build_ortho_table(const WeightParams& params, int n_max, const PrecisionContext& ctx,
                             TableOptions options = {});

/// Same, starting from PrecisionContext::for_degree(n_max, agreement_digits).
OrthoTable build_ortho_table(const WeightParams& params, int n_max, unsigned agreement_digits = 25,
                             TableOptions options = {});

namespace working {
/// One factorization at the working precision, without certification.
OrthoTable factor_moments(const WeightParams& params, int n_max, TableOptions options);
}  // namespace working

/// P_n(x) by the three-term recurrence, at the table's precision.
Real eval_monic(const OrthoTable& table, int n, const Real& x);

/// (P_n, P_n', P_n'') by the differentiated recurrence.
std::array<Real, 3> eval_monic_derivs(const OrthoTable& table, int n, const Real& x);

enum class ExtraFactor {
  one,                     // 1
  inverse_one_minus_y2,    // 1/(1-y^2)
  y_over_one_minus_y2,     // y/(1-y^2)
};

/// int_{-1}^{1} P_m P_n * factor * w dy on the given rule. The singular
/// factors need alpha > 0 for the integral to converge.
Real quad_inner_product(int m, int n, ExtraFactor factor, const OrthoTable& table,
                        const QuadratureRule& rule);

/// Same with the level raised until two levels agree to `digits` digits.
QuadratureResult quad_inner_product_adaptive(int m, int n, ExtraFactor factor, const OrthoTable& table,
                                             unsigned digits);

/// Endpoint exponent of P_m P_n * factor * w for the quadrature truncation.
double endpoint_exponent(const WeightParams& params, ExtraFactor factor);

/// CSV with a comment header recording alpha, t and mantissa_bits, then
/// columns n,h_n,beta_n,p_n,logD_n for n = 0..n_max.
void write_table_csv(std::ostream& os, const OrthoTable& table, int digits);

}  // namespace semijacobi

#endif  // SEMIJACOBI_ORTHOCORE_HPP
