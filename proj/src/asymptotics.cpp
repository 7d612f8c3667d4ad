#include "semijacobi/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace semijacobi {

namespace {

Real sq(const Real& x) { return x * x; }
Real cube(const Real& x) { return x * x * x; }

}  // namespace

AsymValue evaluate(const AsymSeries& s, const Real& n, int terms) {
  const int k = (terms < 0) ? s.order() : std::min(terms, s.order());
  std::vector<Real> parts;
  parts.push_back(s.lead_n * n);
  parts.push_back(s.lead_0);
  Real inv = 1 / n;
  Real power = inv;
  for (int j = 0; j < k; ++j) {
    parts.push_back(s.c[j] * power);
    power = power * inv;
  }
  AsymValue out;
  out.value = Real(0);
  Real first;
  Real prev;
  bool have = false;
  for (const Real& p : parts) {
    out.value = out.value + p;
    if (p.is_zero()) continue;
    Real mag = abs(p);
    if (!have) {
      first = mag;
      have = true;
    } else if (mag > prev) {
      out.in_regime = false;
    }
    prev = mag;
  }
  if (have && prev > first / 10 && prev != first) out.in_regime = false;
  return out;
}

AsymSeries beta_series(const WeightParams& params) {
  const Real& a = params.alpha;
  const Real& t = params.t;
  const Real g = 1 - 4 * sq(a);
  AsymSeries s;
  s.lead_n = Real(0);
  s.lead_0 = Real::ratio(1, 4);
  s.c.resize(6);
  s.c[0] = Real(0);
  s.c[1] = g / 16;
  s.c[2] = g * (t - 2 * a) / 16;
  s.c[3] = g * (3 * sq(t) - 12 * a * t + 12 * sq(a) + 1) / 64;
  s.c[4] = g * (2 * cube(t) - 12 * a * sq(t) + (11 + 20 * sq(a)) * t - 4 * a * (1 + 4 * sq(a))) / 64;
  s.c[5] = g *
           (5 * sq(sq(t)) - 40 * a * cube(t) + 20 * (5 + 4 * sq(a)) * sq(t) - 20 * a * (11 + 4 * sq(a)) * t +
            80 * sq(sq(a)) + 40 * sq(a) + 1) /
           256;
  return s;
}

AsymSeries p_series(const WeightParams& params) {
  const Real& a = params.alpha;
  const Real& t = params.t;
  const Real g = 1 - 4 * sq(a);
  const Real u = 1 - 2 * a;
  AsymSeries s;
  s.lead_n = Real::ratio(-1, 4);
  s.lead_0 = (t + 2 + 4 * a) / 16;
  s.c.resize(5);
  s.c[0] = g / 16;
  s.c[1] = g * (t + u) / 32;
  s.c[2] = g * sq(t + u) / 64;
  s.c[3] = g * (2 * cube(t) + 6 * u * sq(t) + (20 * sq(a) - 24 * a + 15) * t + 2 * cube(u)) / 256;
  s.c[4] = g *
           (sq(sq(t)) + 4 * u * cube(t) + 8 * (2 * sq(a) - 3 * a + 3) * sq(t) +
            2 * u * (4 * sq(a) - 8 * a + 11) * t + sq(sq(u))) /
           256;
  return s;
}

bool exponential_regime(const WeightParams& params) { return (4 * sq(params.alpha) - 1).is_zero(); }

Real log_dn0_product(const Real& alpha, int n) {
  if (n < 0) throw std::out_of_range("log_dn0_product: negative n");
  const Real& a = alpha;
  Real sum = n * (n + 2 * a) * log(Real(2)) - working::log_gamma(Real(n + 1));
  for (int j = 1; j <= n; ++j) {
    sum = sum + working::log_gamma(Real(j + 1)) + 2 * working::log_gamma(j + a) -
          working::log_gamma(j + n + 2 * a);
  }
  return sum;
}

Real log_dn0_barnes(const Real& alpha, int n) {
  if (n < 0) throw std::out_of_range("log_dn0_barnes: negative n");
  if (n == 0) return Real(0);
  const Real& a = alpha;
  using working::log_barnes_g;
  return n * (n + 2 * a) * log(Real(2)) + log_barnes_g(Real(n + 1)) + log_barnes_g(n + 1 + 2 * a) +
         2 * log_barnes_g(n + a + 1) - log_barnes_g(2 * n + 2 * a + 1) - 2 * log_barnes_g(a + 1);
}

Dn0 dn0_exact(const Real& alpha, int n, const PrecisionContext& ctx) {
  Dn0 out;
  out.value = certified_scalar(ctx, [&] { return log_dn0_product(alpha, n); }, AgreementScale::mixed);
  out.barnes = certified_scalar(ctx, [&] { return log_dn0_barnes(alpha, n); }, AgreementScale::mixed);
  out.discrepancy = discrepancy(out.value, out.barnes, AgreementScale::mixed);
  if (!agrees(out.value, out.barnes, ctx.agreement_digits, AgreementScale::mixed)) {
    throw PrecisionError("dn0_exact: product and Barnes forms differ by " + std::to_string(out.discrepancy) +
                         " at n=" + std::to_string(n));
  }
  return out;
}

namespace {

// Terms of ln D_n(0) that do not depend on t, through the constant.
Real dn_leading(const Real& a, const Real& n) {
  const Real ln2 = log(Real(2));
  return (n + a + Real::ratio(1, 2)) * log(Real::pi()) + (sq(a) - Real::ratio(1, 4)) * log(n) +
         2 * working::log_barnes_g_half() - (sq(n) + (2 * a - 1) * (n + a)) * ln2 -
         2 * working::log_barnes_g(a + 1);
}

}  // namespace

Real dn0_asymptotic(const Real& alpha, int n) {
  const Real& a = alpha;
  const Real N(n);
  const Real g = 1 - 4 * sq(a);
  return dn_leading(a, N) - a * g / (4 * N) + g * (28 * sq(a) - 3) / (192 * sq(N)) +
         a * sq(g) / (32 * cube(N));
}

Real log_ratio_asymptotic(const WeightParams& params, int n) {
  const Real& a = params.alpha;
  const Real& t = params.t;
  const Real N(n);
  const Real g = 1 - 4 * sq(a);
  return -N * t / 2 + t * (t + 8 * a) / 16 + t * g / (8 * N) + t * g * (t - 4 * a) / (32 * sq(N)) +
         t * g * (sq(t) - 6 * a * t + 12 * sq(a) + 3) / (96 * cube(N));
}

Real dn_asymptotic(const WeightParams& params, int n) {
  const Real& a = params.alpha;
  const Real& t = params.t;
  const Real N(n);
  const Real g = 1 - 4 * sq(a);
  return dn_leading(a, N) - N * t / 2 + t * (t + 8 * a) / 16 + g * (t - 2 * a) / (8 * N) +
         g * (6 * sq(t) - 24 * a * t + 28 * sq(a) - 3) / (192 * sq(N)) +
         g * (cube(t) - 6 * a * sq(t) + 3 * (1 + 4 * sq(a)) * t + 3 * a * g) / (96 * cube(N));
}

OrderFit order_fit(const std::vector<std::pair<double, Real>>& errors) {
  OrderFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, err] : errors) {
    if (!(err.sign() > 0) || !(n > 0)) {
      fit.warnings.push_back("dropped n=" + std::to_string(static_cast<long>(n)) + ": nonpositive error");
      continue;
    }
    const double x = std::log(n);
    const double y = log(err).to_double();
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.used;
  }
  if (fit.used < 4) {
    throw std::invalid_argument("order_fit: " + std::to_string(fit.used) + " usable points, need at least 4");
  }
  const double m = fit.used;
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return fit;
}

Real log_ratio_by_integral(const WeightParams& params, int n, unsigned digits) {
  if (n < 1) throw std::out_of_range("log_ratio_by_integral: n must be at least 1");
  if (params.t.is_zero()) return Real(0);
  WorkingPrecision guard(digits_to_bits(digits + 10) + 32);
  const Real t = params.t;
  const Real half_t = t / 2;
  const Real& a = params.alpha;
  auto f = [&](const QuadratureNode& node) {
    const Real s = half_t * (1 + node.x);
    OrthoTable tab = build_ortho_table(params.at(s), n, digits + 5);
    WorkingPrecision inner(digits_to_bits(digits + 10) + 32);
    const Real& b = tab.beta[n];
    return 2 * b * (n + a + s - s * (b + tab.beta[n - 1] + tab.beta[n + 1])) - n;
  };
  QuadratureResult q = integrate_adaptive(f, 1.0, digits + 2, Real(1), 2, 10);
  return half_t * q.value;
}

OrthoTable series_table(const WeightParams& params, int n_max, unsigned agreement_digits) {
  const PrecisionContext ctx = PrecisionContext::for_degree(n_max, agreement_digits, true);
  return build_ortho_table(params, n_max, ctx, TableOptions{true});
}

SeriesComparison compare_series(SeriesQuantity q, const WeightParams& params, const std::vector<int>& ns,
                                unsigned agreement_digits) {
  if (ns.empty()) throw std::invalid_argument("compare_series: empty n list");
  return compare_series(q, series_table(params, *std::max_element(ns.begin(), ns.end()), agreement_digits), ns);
}

SeriesComparison compare_series(SeriesQuantity q, const OrthoTable& table, const std::vector<int>& ns) {
  if (ns.empty()) throw std::invalid_argument("compare_series: empty n list");
  if (*std::min_element(ns.begin(), ns.end()) < 1) throw std::out_of_range("compare_series: n must be positive");
  if (*std::max_element(ns.begin(), ns.end()) > table.n_max) {
    throw std::out_of_range("compare_series: n beyond the table");
  }
  const WeightParams& params = table.params;
  const unsigned agreement_digits = table.agreement_digits;
  SeriesComparison out;
  out.quantity = q;
  out.params = params;
  out.exponential = exponential_regime(params);
  WorkingPrecision guard(table.bits);
  const AsymSeries series = (q == SeriesQuantity::p) ? p_series(params) : beta_series(params);
  std::vector<std::pair<double, Real>> fit_points;
  std::vector<std::string> floor_notes;
  for (int n : ns) {
    Real oracle;
    AsymValue approx;
    switch (q) {
      case SeriesQuantity::beta:
        oracle = table.beta[n];
        approx = evaluate(series, Real(n));
        break;
      case SeriesQuantity::p:
        oracle = table.p[n];
        approx = evaluate(series, Real(n));
        break;
      case SeriesQuantity::hankel:
        oracle = table.log_d[n];
        approx.value = dn_asymptotic(params, n);
        approx.in_regime = true;
        break;
    }
    Real err = abs(oracle - approx.value);
    const Real floor = pow(Real(10), -static_cast<long>(agreement_digits)) * max(abs(oracle), Real(1));
    out.n.push_back(n);
    out.oracle.push_back(oracle);
    out.series.push_back(approx.value);
    out.abs_error.push_back(err);
    out.in_regime.push_back(approx.in_regime);
    if (!approx.in_regime) {
      floor_notes.push_back("dropped n=" + std::to_string(n) + ": outside the asymptotic regime");
    } else if (err <= floor) {
      floor_notes.push_back("dropped n=" + std::to_string(n) + ": error at the precision floor");
    } else {
      fit_points.emplace_back(static_cast<double>(n), err);
    }
  }
  try {
    out.fit = order_fit(fit_points);
    out.fit_valid = true;
  } catch (const std::invalid_argument& e) {
    out.fit.warnings.push_back(e.what());
  }
  out.fit.warnings.insert(out.fit.warnings.begin(), floor_notes.begin(), floor_notes.end());
  return out;
}

void write_series_csv(std::ostream& os, const SeriesComparison& cmp, int digits) {
  os << "n,oracle,series,abs_error,running_slope\n";
  for (std::size_t i = 0; i < cmp.n.size(); ++i) {
    os << cmp.n[i] << ',' << cmp.oracle[i].str(digits) << ',' << cmp.series[i].str(digits) << ','
       << cmp.abs_error[i].str(6) << ',';
    if (i > 0 && cmp.abs_error[i].sign() > 0 && cmp.abs_error[i - 1].sign() > 0) {
      const double slope = (log(cmp.abs_error[i]) - log(cmp.abs_error[i - 1])).to_double() /
                           std::log(static_cast<double>(cmp.n[i]) / cmp.n[i - 1]);
      os << std::round(slope * 1000) / 1000;
    }
    os << '\n';
  }
}

}  // namespace semijacobi
