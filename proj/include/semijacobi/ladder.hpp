// Auxiliary quantities R_n, r_n, H_n, the ladder coefficients A_n(z), B_n(z)
// and residual checks of the identities linking them to beta_n and p(n,t).

#ifndef SEMIJACOBI_LADDER_HPP
#define SEMIJACOBI_LADDER_HPP

#include <utility>
#include <vector>

#include "semijacobi/orthocore.hpp"
#include "semijacobi/residual.hpp"

namespace semijacobi {

enum class Provenance { algebraic, integral };

/// R[0..n_max], r[0..n_max], H[0..n_max+1] with H_0 = 0 and H_{n+1} = H_n + R_n.
struct AuxTable {
  WeightParams params;
  int n_max = 0;
  std::vector<Real> R;
  std::vector<Real> r;
  std::vector<Real> H;
  std::vector<Provenance> R_source;
  std::vector<Provenance> r_source;
  mpfr_prec_t bits = 0;
};

/// A_n(z) = 2t + R/(1-z^2), B_n(z) = z r/(1-z^2): a constant part plus a pole
/// coefficient at z = +-1.
struct LadderCoeffs {
  Real two_t;
  Real R;
  Real r;

  Real A(const Real& z) const;
  Real B(const Real& z) const;
  Real A_prime(const Real& z) const;
  Real B_prime(const Real& z) const;
};

AuxTable build_aux_table(const OrthoTable& table);

LadderCoeffs ladder_coeffs(const AuxTable& aux, int n);

/// (R_n, r_n) from their defining integrals on `rule`. Requires alpha > 0.
std::pair<Real, Real> aux_by_integral(const OrthoTable& table, const QuadratureRule& rule, int n);

/// Same with adaptive quadrature to `digits` digits.
std::pair<Real, Real> aux_by_integral(const OrthoTable& table, int n, unsigned digits);

/// Replaces entry n of `aux` by its integral value and marks it as such.
void use_integral_entry(AuxTable& aux, const OrthoTable& table, int n, unsigned digits);

/// v'(z) = 2tz + 2 alpha z/(1-z^2).
Real v_prime(const WeightParams& params, const Real& z);

/// sum_{j<n} A_j(z) in closed form from beta_n, beta_{n+1}.
Real sum_A_closed(const OrthoTable& table, int n, const Real& z);

/// sum_{j<n} A_j(z) summed term by term from the aux table.
Real sum_A_direct(const AuxTable& aux, int n, const Real& z);

/// Scaled residuals of re1, re2, Rnb, pnr, re3, re4, id3 and the pole-level
/// match of S1 for n = 1..n_max-1 (all but re3, re4, id3 also at n = 0).
ResidualReport identity_residuals(const OrthoTable& table, const AuxTable& aux);

/// Largest scaled residual of the second-order ODE for P_n over z_samples.
Real pn_ode_residual(const OrthoTable& table, const AuxTable& aux, int n, const std::vector<Real>& z_samples);

}  // namespace semijacobi

#endif  // SEMIJACOBI_LADDER_HPP
