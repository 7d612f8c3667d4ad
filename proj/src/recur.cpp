#include "semijacobi/recur.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace semijacobi {

namespace {

void check_range(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi) {
    throw std::out_of_range(std::string(what) + ": n=" + std::to_string(n) + " outside [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");
  }
}

mpfr_prec_t widest(std::initializer_list<const Real*> xs) {
  mpfr_prec_t bits = working_precision();
  for (const Real* x : xs) bits = std::max(bits, x->precision());
  return bits;
}

Real phi_ratio(const Real& a1, const Real& b1, const Real& a2, const Real& b2, const Real& t) {
  return working::kummer_phi(a1, b1, -t) / working::kummer_phi(a2, b2, -t);
}

}  // namespace

Real btd_residual(const WeightParams& params, int n, const Real& beta_prev, const Real& beta,
                  const Real& beta_next) {
  WorkingPrecision guard(widest({&beta_prev, &beta, &beta_next}));
  const Real& a = params.alpha;
  const Real& t = params.t;
  const Real r = n - 2 * t * beta;
  return scaled_residual({square(r), 2 * a * r,
                          -beta * (2 * n - 1 + 2 * a - 2 * t * beta_prev - 2 * t * beta) *
                              (2 * n + 1 + 2 * a - 2 * t * beta - 2 * t * beta_next)});
}

Real btd_residual(const OrthoTable& table, int n) {
  check_range(n, 1, table.n_max, "btd_residual");
  return btd_residual(table.params, n, table.beta[n - 1], table.beta[n], table.beta[n + 1]);
}

Real pnd_residual(const WeightParams& params, int n, const Real& p_prev, const Real& p, const Real& p_next) {
  WorkingPrecision guard(widest({&p_prev, &p, &p_next}));
  const Real& a = params.alpha;
  const Real& t = params.t;
  const Real q = n - 2 * t * p + 2 * t * p_next;
  return scaled_residual({square(q), 2 * a * q,
                          -(2 * n - 1 + 2 * a - 2 * t * p_prev + 2 * t * p_next) *
                              (n + 2 * p + 2 * t * (p - p_next) * (p_prev - p - 1))});
}

Real pnd_residual(const OrthoTable& table, int n) {
  check_range(n, 1, table.n_max, "pnd_residual");
  return pnd_residual(table.params, n, table.p[n - 1], table.p[n], table.p[n + 1]);
}

Real hnd_residual(const WeightParams& params, int n, const Real& H_prev, const Real& H, const Real& H_next) {
  WorkingPrecision guard(widest({&H_prev, &H, &H_next}));
  const Real& a = params.alpha;
  const Real& t = params.t;
  const Real X = 2 * t + H - H_prev;
  const Real Y = 2 * t + H_next - H;
  const Real XY = X * Y;
  const Real K = 2 * t * (2 * n * t + H);
  return scaled_residual({square(XY) * (H + n * H_prev - n * H_next),
                          (n * XY - K) * (XY * (2 * t - n - 2 * a + H_next - H_prev) + K)});
}

Real hnd_residual(const AuxTable& aux, int n) {
  check_range(n, 1, aux.n_max, "hnd_residual");
  return hnd_residual(aux.params, n, aux.H[n - 1], aux.H[n], aux.H[n + 1]);
}

Real rn_from_H(const AuxTable& aux, int n) {
  check_range(n, 1, aux.n_max, "rn_from_H");
  WorkingPrecision guard(aux.bits);
  const Real& t = aux.params.t;
  const Real X = 2 * t + aux.H[n] - aux.H[n - 1];
  const Real Y = 2 * t + aux.H[n + 1] - aux.H[n];
  const Real XY = X * Y;
  if (XY.is_zero()) throw SingularError("rn_from_H: vanishing denominator at n=" + std::to_string(n));
  return (n * XY - 2 * t * (2 * n * t + aux.H[n])) / XY;
}

Real pnr_residual(const OrthoTable& table, const AuxTable& aux, int n) {
  check_range(n, 0, aux.n_max, "pnr_residual");
  WorkingPrecision guard(std::max(table.bits, aux.bits));
  const Real& a = aux.params.alpha;
  return scaled_residual({4 * aux.params.t * table.p[n], -aux.H[n], aux.r[n], n * (n - 1 + 2 * a)});
}

Real initial_beta1(const WeightParams& params) {
  const Real& a = params.alpha;
  return phi_ratio(Real::ratio(3, 2), Real::ratio(5, 2) + a, Real::ratio(1, 2), Real::ratio(3, 2) + a, params.t) /
         (3 + 2 * a);
}

Real initial_H1(const WeightParams& params) {
  const Real& a = params.alpha;
  return (1 + 2 * a) *
         phi_ratio(Real::ratio(1, 2), Real::ratio(1, 2) + a, Real::ratio(1, 2), Real::ratio(3, 2) + a, params.t);
}

Real initial_H2(const WeightParams& params) {
  const Real& a = params.alpha;
  return initial_H1(params) +
         (3 + 2 * a) *
             phi_ratio(Real::ratio(3, 2), Real::ratio(3, 2) + a, Real::ratio(3, 2), Real::ratio(5, 2) + a, params.t);
}

namespace {

std::vector<Real> iterate_once(const WeightParams& params, int n_target, unsigned singular_digits) {
  const Real& a = params.alpha;
  const Real& t = params.t;
  const Real threshold = pow(Real(10), -static_cast<long>(singular_digits));
  std::vector<Real> beta;
  beta.reserve(n_target + 1);
  beta.emplace_back(0);
  if (n_target >= 1) beta.push_back(initial_beta1(params));
  for (int n = 1; n < n_target; ++n) {
    const Real& b = beta[n];
    const Real c = 2 * n - 1 + 2 * a - 2 * t * beta[n - 1] - 2 * t * b;
    const Real coeff = 2 * t * b * c;
    if (abs(coeff) < threshold) {
      throw SingularError("btd_iterate: coefficient of beta_{n+1} vanishes at n=" + std::to_string(n));
    }
    const Real r = n - 2 * t * b;
    const Real lhs = square(r) + 2 * a * r;
    beta.push_back((2 * n + 1 + 2 * a - 2 * t * b - lhs / (b * c)) / (2 * t));
  }
  return beta;
}

}  // namespace

BetaIteration btd_iterate(const WeightParams& params, int n_target, const PrecisionContext& ctx) {
  ctx.validate();
  if (n_target < 0) throw std::out_of_range("btd_iterate: negative n_target");
  if (params.t.is_zero()) throw DomainError("btd_iterate: t = 0 degenerates; use the closed form for beta_n(0)");
  const mpfr_prec_t low = ctx.mantissa_bits;
  const mpfr_prec_t high = 2 * low;
  std::vector<Real> coarse;
  {
    WorkingPrecision guard(low);
    coarse = iterate_once(params, n_target, ctx.agreement_digits);
  }
  BetaIteration out;
  out.params = params;
  out.bits = high;
  WorkingPrecision guard(high);
  out.beta = iterate_once(params, n_target, ctx.agreement_digits);
  const double low_digits = bits_to_digits(low);
  const double high_digits = bits_to_digits(high);
  out.digits_lost.reserve(out.beta.size());
  for (std::size_t n = 0; n < out.beta.size(); ++n) {
    Real diff = abs(coarse[n] - out.beta[n]);
    double lost = 0.0;
    if (!diff.is_zero()) {
      double correct = -log10(diff / abs(out.beta[n])).to_double();
      lost = std::max(0.0, low_digits - correct);
    }
    out.digits_lost.push_back(lost);
    if (high_digits - lost < ctx.agreement_digits) {
      throw PrecisionError("btd_iterate: " + std::to_string(static_cast<int>(lost)) + " digits lost by n=" +
                           std::to_string(n) + ", fewer than " + std::to_string(ctx.agreement_digits) + " remain");
    }
  }
  return out;
}

double iteration_growth_base(const BetaIteration& iter, const OrthoTable& oracle) {
  const int last = std::min<int>(static_cast<int>(iter.beta.size()) - 1, oracle.n_max + 1);
  WorkingPrecision guard(std::max(iter.bits, oracle.bits));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int n = 2; n <= last; ++n) {
    Real diff = abs(iter.beta[n] - oracle.beta[n]);
    if (diff.is_zero()) continue;
    const double y = log10(diff).to_double();
    sx += n;
    sy += y;
    sxx += static_cast<double>(n) * n;
    sxy += n * y;
    ++count;
  }
  if (count < 2) return 1.0;
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return std::pow(10.0, slope);
}

void write_iteration_csv(std::ostream& os, const BetaIteration& iter, const OrthoTable& oracle, int digits) {
  os << "n,beta_iter,beta_oracle,abs_diff,digits_lost\n";
  WorkingPrecision guard(std::max(iter.bits, oracle.bits));
  const int last = std::min<int>(static_cast<int>(iter.beta.size()) - 1, oracle.n_max + 1);
  for (int n = 0; n <= last; ++n) {
    os << n << ',' << iter.beta[n].str(digits) << ',' << oracle.beta[n].str(digits) << ','
       << abs(iter.beta[n] - oracle.beta[n]).str(6) << ',' << std::round(iter.digits_lost[n] * 100) / 100 << '\n';
  }
}

}  // namespace semijacobi
