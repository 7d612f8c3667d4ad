// Second-order nonlinear difference equations for beta_n, p(n,t) and H_n:
// scaled residuals against the table, plus a forward iterator for beta_n.

#ifndef SEMIJACOBI_RECUR_HPP
#define SEMIJACOBI_RECUR_HPP

#include <iosfwd>
#include <vector>

#include "semijacobi/ladder.hpp"

namespace semijacobi {

/// Residual of the beta_n equation at (beta_{n-1}, beta_n, beta_{n+1}).
Real btd_residual(const WeightParams& params, int n, const Real& beta_prev, const Real& beta,
                  const Real& beta_next);
/// Same on table values; requires 1 <= n <= n_max.
Real btd_residual(const OrthoTable& table, int n);

/// Residual of the p(n,t) equation at (p(n-1), p(n), p(n+1)).
Real pnd_residual(const WeightParams& params, int n, const Real& p_prev, const Real& p, const Real& p_next);
Real pnd_residual(const OrthoTable& table, int n);

/// Residual of the H_n equation at (H_{n-1}, H_n, H_{n+1}).
Real hnd_residual(const WeightParams& params, int n, const Real& H_prev, const Real& H, const Real& H_next);
Real hnd_residual(const AuxTable& aux, int n);

/// r_n rebuilt from H_{n-1}, H_n, H_{n+1}. Throws SingularError when the
/// denominator vanishes.
Real rn_from_H(const AuxTable& aux, int n);

/// Residual of 4t p(n,t) = H_n - r_n - n(n-1+2 alpha).
Real pnr_residual(const OrthoTable& table, const AuxTable& aux, int n);

/// beta_1 = Phi(3/2,5/2+a;-t) / ((3+2a) Phi(1/2,3/2+a;-t)) at the working precision.
Real initial_beta1(const WeightParams& params);
/// H_1 and H_2 from Kummer-function ratios at the working precision.
Real initial_H1(const WeightParams& params);
Real initial_H2(const WeightParams& params);

struct BetaIteration {
  WeightParams params;
  std::vector<Real> beta;           // beta_0..beta_{n_target}
  std::vector<double> digits_lost;  // decimal digits lost by step n
  mpfr_prec_t bits = 0;             // precision of the returned values
};

/// Solves the beta_n equation for beta_{n+1} and iterates forward from
/// beta_0 = 0 and beta_1. The run is repeated at twice the precision to
/// measure the digits lost per step.
///
/// Throws DomainError for t = 0, SingularError when the coefficient of
/// beta_{n+1} drops below 10^-agreement_digits, and PrecisionError once
/// fewer than agreement_digits digits survive.
BetaIteration btd_iterate(const WeightParams& params, int n_target, const PrecisionContext& ctx);

/// Least-squares growth base b of |beta_iter - beta_oracle| ~ C b^n over the
/// steps where both are available and differ.
double iteration_growth_base(const BetaIteration& iter, const OrthoTable& oracle);

/// CSV columns n,beta_iter,beta_oracle,abs_diff,digits_lost.
void write_iteration_csv(std::ostream& os, const BetaIteration& iter, const OrthoTable& oracle, int digits);

}  // namespace semijacobi

#endif  // SEMIJACOBI_RECUR_HPP
