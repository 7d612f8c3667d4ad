#include "semijacobi/orthocore.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "semijacobi/errors.hpp"

namespace semijacobi {

namespace {

struct Ldl {
  std::vector<Real> d;      // pivots
  std::vector<Real> below;  // L[i][i-gap], zero for i < gap
};

// LDL^T of the symmetric Hankel-type matrix M(i,j) = entry(i + j) of order n.
// Only the diagonal `gap` places below the unit diagonal of L is kept.
// Row i corresponds to degree index_stride * i + index_offset.
template <typename Entry>
Ldl factor_hankel(int order, int gap, Entry entry, int index_stride, int index_offset) {
  Ldl out;
  out.d.resize(order);
  out.below.resize(order);
  std::vector<std::vector<Real>> lower(order);
  std::vector<Real> scaled(order);  // C[i][j] = L[i][j] * D[j] for the current row
  for (int i = 0; i < order; ++i) {
    lower[i].resize(i);
    for (int j = 0; j < i; ++j) {
      Real c = entry(i + j);
      for (int k = 0; k < j; ++k) c.sub_mul(scaled[k], lower[j][k]);
      scaled[j] = std::move(c);
      lower[i][j] = scaled[j] / out.d[j];
    }
    Real pivot = entry(2 * i);
    for (int k = 0; k < i; ++k) pivot.sub_mul(scaled[k], lower[i][k]);
    if (pivot.sign() <= 0) {
      throw ConditioningError("moment matrix pivot not positive at n = " +
                                  std::to_string(index_stride * i + index_offset),
                              index_stride * i + index_offset);
    }
    out.d[i] = std::move(pivot);
    if (i >= gap) out.below[i] = lower[i][i - gap];
  }
  return out;
}

void fill_derived(OrthoTable& table) {
  const int size = table.n_max + 2;
  table.beta.assign(size, Real(0));
  for (int n = 1; n < size; ++n) table.beta[n] = table.h[n] / table.h[n - 1];
  table.log_d.assign(size + 1, Real(0));
  for (int n = 1; n <= size; ++n) table.log_d[n] = table.log_d[n - 1] + log(table.h[n - 1]);
}

double table_discrepancy(const OrthoTable& a, const OrthoTable& b) {
  double worst = 0.0;
  const int size = a.n_max + 2;
  for (int n = 0; n < size; ++n) {
    worst = std::max(worst, discrepancy(a.h[n], b.h[n], AgreementScale::relative));
    worst = std::max(worst, discrepancy(a.beta[n], b.beta[n], AgreementScale::relative));
    worst = std::max(worst, discrepancy(a.p[n], b.p[n], AgreementScale::relative));
  }
  for (int n = 0; n <= size; ++n) {
    worst = std::max(worst, discrepancy(a.log_d[n], b.log_d[n], AgreementScale::mixed));
  }
  return worst;
}

void require_degree(const OrthoTable& table, int n) {
  if (n < 0 || n > table.n_max + 1) {
    throw std::out_of_range("degree " + std::to_string(n) + " outside table range 0.." +
                            std::to_string(table.n_max + 1));
  }
}

}  // namespace

namespace working {

OrthoTable factor_moments(const WeightParams& params, int n_max, TableOptions options) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  const int size = n_max + 2;
  OrthoTable table;
  table.params = params;
  table.n_max = n_max;
  table.bits = working_precision();
  table.even_odd_split = options.even_odd_split;
  table.h.assign(size, Real(0));
  table.p.assign(size, Real(0));

  // mu_{2k} for k = 0..size-1 covers every entry mu_{i+j}, i, j < size.
  const std::vector<Real> even = even_moments(static_cast<unsigned>(size), params);

  if (options.even_odd_split) {
    // Even degrees: M_ab = mu_{2a+2b}; odd degrees: M_ab = mu_{2a+2b+2}.
    const int n_even = (size + 1) / 2;
    const int n_odd = size / 2;
    // Degree n sits at row n/2 of its half, so two degrees down is one row up.
    Ldl e = factor_hankel(n_even, 1, [&](int k) { return even[k]; }, 2, 0);
    Ldl o = factor_hankel(n_odd, 1, [&](int k) { return even[k + 1]; }, 2, 1);
    for (int a = 0; a < n_even; ++a) {
      table.h[2 * a] = std::move(e.d[a]);
      if (a >= 1) table.p[2 * a] = -e.below[a];
    }
    for (int a = 0; a < n_odd; ++a) {
      table.h[2 * a + 1] = std::move(o.d[a]);
      if (a >= 1) table.p[2 * a + 1] = -o.below[a];
    }
  } else {
    Ldl full = factor_hankel(
        size, 2, [&](int k) { return k % 2 == 0 ? even[k / 2] : Real(0); }, 1, 0);
    for (int n = 0; n < size; ++n) {
      table.h[n] = std::move(full.d[n]);
      if (n >= 2) table.p[n] = -full.below[n];
    }
  }
  fill_derived(table);
  return table;
}

}  // namespace working

OrthoTable build_ortho_table(const WeightParams& params, int n_max, const PrecisionContext& ctx,
                             TableOptions options) {
  double last_discrepancy = 0.0;
  const double tol = std::pow(10.0, -static_cast<double>(ctx.agreement_digits));
  auto certified = with_doubling(
      ctx, [&] { return working::factor_moments(params, n_max, options); },
      [&](const OrthoTable& a, const OrthoTable& b) {
        last_discrepancy = table_discrepancy(a, b);
        return last_discrepancy <= tol;
      });
  OrthoTable table = std::move(certified.value);
  table.agreement_digits = ctx.agreement_digits;
  table.error_estimate = last_discrepancy;
  return table;
}

OrthoTable build_ortho_table(const WeightParams& params, int n_max, unsigned agreement_digits,
                             TableOptions options) {
  return build_ortho_table(params, n_max, PrecisionContext::for_degree(n_max, agreement_digits, options.even_odd_split),
                           options);
}

Real eval_monic(const OrthoTable& table, int n, const Real& x) {
  require_degree(table, n);
  WorkingPrecision guard(table.bits);
  Real prev(0);
  Real cur(1);
  for (int k = 0; k < n; ++k) {
    Real next = x * cur - table.beta[k] * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::array<Real, 3> eval_monic_derivs(const OrthoTable& table, int n, const Real& x) {
  require_degree(table, n);
  WorkingPrecision guard(table.bits);
  Real p0(0), p1(1);
  Real d0(0), d1(0);
  Real s0(0), s1(0);
  for (int k = 0; k < n; ++k) {
    const Real& b = table.beta[k];
    Real p2 = x * p1 - b * p0;
    Real d2 = p1 + x * d1 - b * d0;
    Real s2 = 2 * d1 + x * s1 - b * s0;
    p0 = std::move(p1), p1 = std::move(p2);
    d0 = std::move(d1), d1 = std::move(d2);
    s0 = std::move(s1), s1 = std::move(s2);
  }
  return {p1, d1, s1};
}

double endpoint_exponent(const WeightParams& params, ExtraFactor factor) {
  const double alpha = params.alpha.to_double();
  if (factor == ExtraFactor::one) return 1.0 + alpha;
  if (!(params.alpha.sign() > 0)) {
    throw DomainError("singular-factor inner products require alpha > 0");
  }
  return alpha;
}

Real quad_inner_product(int m, int n, ExtraFactor factor, const OrthoTable& table,
                        const QuadratureRule& rule) {
  require_degree(table, m);
  require_degree(table, n);
  (void)endpoint_exponent(table.params, factor);
  WorkingPrecision guard(rule.precision());
  const Real& alpha = table.params.alpha;
  const Real& t = table.params.t;
  const Real power = factor == ExtraFactor::one ? alpha : alpha - 1;
  const int top = std::max(m, n);
  return rule.integrate([&](const QuadratureNode& node) {
    // P_m and P_n in one recurrence pass.
    Real prev(0), cur(1), pm, pn;
    for (int k = 0;; ++k) {
      if (k == m) pm = cur;
      if (k == n) pn = cur;
      if (k == top) break;
      Real next = node.x * cur - table.beta[k] * prev;
      prev = std::move(cur);
      cur = std::move(next);
    }
    Real value = pm * pn * pow(node.one_minus_x2, power) * exp(-t * square(node.x));
    if (factor == ExtraFactor::y_over_one_minus_y2) value *= node.x;
    return value;
  });
}

QuadratureResult quad_inner_product_adaptive(int m, int n, ExtraFactor factor, const OrthoTable& table,
                                             unsigned digits) {
  const double exponent = endpoint_exponent(table.params, factor);
  WorkingPrecision guard(std::max<mpfr_prec_t>(table.bits, digits_to_bits(digits) + 32));
  require_degree(table, m);
  require_degree(table, n);
  const Real scale = sqrt(table.h[m] * table.h[n]);
  const Real tol = pow(Real(10), -static_cast<long>(digits));
  Real previous;
  for (int level = 3; level <= 14; ++level) {
    Real current = quad_inner_product(m, n, factor, table, QuadratureRule::tanh_sinh(level, exponent));
    if (level > 3) {
      Real change = abs(current - previous);
      if (change <= tol * max(abs(current), scale)) {
        return {std::move(current), level, (change / scale).to_double()};
      }
    }
    previous = std::move(current);
  }
  throw PrecisionError("inner-product quadrature did not converge");
}

void write_table_csv(std::ostream& os, const OrthoTable& table, int digits) {
  os << "# alpha=" << table.params.alpha.str(digits) << ",t=" << table.params.t.str(digits)
     << ",mantissa_bits=" << table.bits << "\n";
  os << "n,h_n,beta_n,p_n,logD_n\n";
  for (int n = 0; n <= table.n_max; ++n) {
    os << n << ',' << table.h[n].str(digits) << ',' << table.beta[n].str(digits) << ','
       << table.p[n].str(digits) << ',' << table.log_d[n].str(digits) << '\n';
  }
}

}  // namespace semijacobi
