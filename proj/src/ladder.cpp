#include "semijacobi/ladder.hpp"

#include <stdexcept>
#include <string>

namespace semijacobi {

namespace {

void check_index(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi) {
    throw std::out_of_range(std::string(what) + ": n=" + std::to_string(n) + " outside [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");
  }
}

Real one_minus_sq(const Real& z) {
  Real d = Real(1) - square(z);
  if (d.is_zero()) throw DomainError("z = +-1 is a pole of the ladder coefficients");
  return d;
}

}  // namespace

Real LadderCoeffs::A(const Real& z) const { return two_t + R / one_minus_sq(z); }

Real LadderCoeffs::B(const Real& z) const { return z * r / one_minus_sq(z); }

Real LadderCoeffs::A_prime(const Real& z) const {
  Real d = one_minus_sq(z);
  return 2 * z * R / square(d);
}

Real LadderCoeffs::B_prime(const Real& z) const {
  Real d = one_minus_sq(z);
  return r * (Real(1) + square(z)) / square(d);
}

AuxTable build_aux_table(const OrthoTable& table) {
  WorkingPrecision guard(table.bits);
  const Real& alpha = table.params.alpha;
  const Real& t = table.params.t;
  AuxTable aux;
  aux.params = table.params;
  aux.n_max = table.n_max;
  aux.bits = table.bits;
  const int n_max = table.n_max;
  aux.R.reserve(n_max + 1);
  aux.r.reserve(n_max + 1);
  aux.H.reserve(n_max + 2);
  aux.H.emplace_back(0);
  for (int n = 0; n <= n_max; ++n) {
    aux.r.push_back(n - 2 * t * table.beta[n]);
    aux.R.push_back(2 * n + 1 + 2 * alpha - 2 * t * (table.beta[n] + table.beta[n + 1]));
    aux.H.push_back(aux.H.back() + aux.R.back());
  }
  aux.R_source.assign(n_max + 1, Provenance::algebraic);
  aux.r_source.assign(n_max + 1, Provenance::algebraic);
  return aux;
}

LadderCoeffs ladder_coeffs(const AuxTable& aux, int n) {
  check_index(n, 0, aux.n_max, "ladder_coeffs");
  WorkingPrecision guard(aux.bits);
  return {2 * aux.params.t, aux.R[n], aux.r[n]};
}

std::pair<Real, Real> aux_by_integral(const OrthoTable& table, const QuadratureRule& rule, int n) {
  check_index(n, 0, table.n_max, "aux_by_integral");
  (void)endpoint_exponent(table.params, ExtraFactor::inverse_one_minus_y2);
  WorkingPrecision guard(rule.precision());
  const Real two_alpha = 2 * table.params.alpha;
  Real R = two_alpha * quad_inner_product(n, n, ExtraFactor::inverse_one_minus_y2, table, rule) / table.h[n];
  Real r(0);
  if (n > 0) {
    r = two_alpha * quad_inner_product(n, n - 1, ExtraFactor::y_over_one_minus_y2, table, rule) / table.h[n - 1];
  }
  return {std::move(R), std::move(r)};
}

std::pair<Real, Real> aux_by_integral(const OrthoTable& table, int n, unsigned digits) {
  check_index(n, 0, table.n_max, "aux_by_integral");
  (void)endpoint_exponent(table.params, ExtraFactor::inverse_one_minus_y2);
  WorkingPrecision guard(std::max<mpfr_prec_t>(table.bits, digits_to_bits(digits) + 32));
  const Real two_alpha = 2 * table.params.alpha;
  Real R = two_alpha *
           quad_inner_product_adaptive(n, n, ExtraFactor::inverse_one_minus_y2, table, digits).value / table.h[n];
  Real r(0);
  if (n > 0) {
    r = two_alpha *
        quad_inner_product_adaptive(n, n - 1, ExtraFactor::y_over_one_minus_y2, table, digits).value /
        table.h[n - 1];
  }
  return {std::move(R), std::move(r)};
}

void use_integral_entry(AuxTable& aux, const OrthoTable& table, int n, unsigned digits) {
  auto [R, r] = aux_by_integral(table, n, digits);
  WorkingPrecision guard(aux.bits);
  Real shift = R.rounded(aux.bits) - aux.R[n];
  aux.R[n] = R.rounded(aux.bits);
  aux.r[n] = r.rounded(aux.bits);
  aux.R_source[n] = Provenance::integral;
  aux.r_source[n] = Provenance::integral;
  for (int k = n + 1; k <= aux.n_max + 1; ++k) aux.H[k] += shift;
}

Real v_prime(const WeightParams& params, const Real& z) {
  return 2 * params.t * z + 2 * params.alpha * z / one_minus_sq(z);
}

Real sum_A_closed(const OrthoTable& table, int n, const Real& z) {
  check_index(n, 0, table.n_max, "sum_A_closed");
  WorkingPrecision guard(table.bits);
  const Real& a = table.params.alpha;
  const Real& t = table.params.t;
  const Real& b0 = table.beta[n];
  const Real& b1 = table.beta[n + 1];
  const Real d = one_minus_sq(z);
  const Real R = 2 * n + 1 + 2 * a - 2 * t * (b0 + b1);
  Real first = (Real(n) * n - 2 * n * (t - a) + 2 * t * b0 * (2 * t + 1 - 2 * t * b1)) / d;
  Real second = 2 * t * (n - 2 * t * b0) * (n + 2 * a - 2 * t * b0) / (R * d);
  return 2 * n * t + first + second;
}

Real sum_A_direct(const AuxTable& aux, int n, const Real& z) {
  check_index(n, 0, aux.n_max + 1, "sum_A_direct");
  WorkingPrecision guard(aux.bits);
  Real sum(0);
  for (int j = 0; j < n; ++j) sum += ladder_coeffs(aux, j).A(z);
  return sum;
}

ResidualReport identity_residuals(const OrthoTable& table, const AuxTable& aux) {
  WorkingPrecision guard(std::max(table.bits, aux.bits));
  const Real& a = aux.params.alpha;
  const Real& t = aux.params.t;
  const auto& R = aux.R;
  const auto& r = aux.r;
  const auto& beta = table.beta;
  ResidualReport report;
  auto rec = [&](const char* name, const Real& value, int n) { report.record(name, value, a, t, n); };
  for (int n = 0; n + 1 <= aux.n_max; ++n) {
    rec("re1", scaled_residual({r[n + 1], r[n], -R[n], 2 * a}), n);
    rec("re2", scaled_residual({r[n], Real(-n), 2 * t * beta[n]}), n);
    rec("Rnb", scaled_residual({R[n], -(2 * n + 1 + 2 * a), 2 * t * beta[n], 2 * t * beta[n + 1]}), n);
    rec("pnr", scaled_residual({4 * t * table.p[n], -aux.H[n], r[n], n * (n - 1 + 2 * a)}), n);
    for (const char* zs : {"0.3", "0.7", "2.5"}) {
      const Real z = Real::parse(zs);
      const LadderCoeffs now = ladder_coeffs(aux, n);
      rec("S1", scaled_residual({ladder_coeffs(aux, n + 1).B(z), now.B(z), -z * now.A(z), v_prime(aux.params, z)}), n);
    }
    if (n == 0) continue;
    rec("re3", scaled_residual({square(r[n]), 2 * a * r[n], -beta[n] * R[n] * R[n - 1]}), n);
    rec("re4", scaled_residual({2 * (t - a) * r[n], -square(r[n]), aux.H[n], -2 * t * beta[n] * (R[n] + R[n - 1])}), n);
    rec("id3", scaled_residual({beta[n] * R[n], -r[n], -2 * table.p[n], -2 * t * beta[n] * beta[n - 1]}), n);
  }
  return report;
}

Real pn_ode_residual(const OrthoTable& table, const AuxTable& /*aux*/, int n, const std::vector<Real>& z_samples) {
  check_index(n, 0, table.n_max, "pn_ode_residual");
  WorkingPrecision guard(table.bits);
  for (const Real& z : z_samples) {
    if (abs(z) == Real(1)) throw DomainError("z samples must avoid +-1");
  }
  const Real& a = table.params.alpha;
  const Real& t = table.params.t;
  const LadderCoeffs c{2 * t, 2 * n + 1 + 2 * a - 2 * t * (table.beta[n] + table.beta[n + 1]),
                       n - 2 * t * table.beta[n]};
  Real worst(0);
  for (const Real& z : z_samples) {
    auto [P, dP, d2P] = eval_monic_derivs(table, n, z);
    const Real A = c.A(z);
    const Real ratio = c.A_prime(z) / A;
    const Real B = c.B(z);
    Real first = d2P;
    Real second = -(v_prime(table.params, z) + ratio) * dP;
    Real third = (c.B_prime(z) - B * ratio + sum_A_closed(table, n, z)) * P;
    Real res = scaled_residual({first, second, third});
    if (res > worst) worst = std::move(res);
  }
  return worst;
}

}  // namespace semijacobi
