// Large-n expansions of beta_n, p(n,t) and ln D_n(t), the exact D_n(0), and
// empirical order fits against the pipeline.

#ifndef SEMIJACOBI_ASYMPTOTICS_HPP
#define SEMIJACOBI_ASYMPTOTICS_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "semijacobi/orthocore.hpp"

namespace semijacobi {

/// lead_n * n + lead_0 + sum_{j>=1} c[j-1] / n^j.
struct AsymSeries {
  Real lead_n;
  Real lead_0;
  std::vector<Real> c;

  int order() const noexcept { return static_cast<int>(c.size()); }
};

struct AsymValue {
  Real value;
  /// Nonzero terms decrease in magnitude and the last is at most 10% of the first.
  bool in_regime = true;
};

/// Sums every stored term (or the first `terms` of c when terms >= 0).
AsymValue evaluate(const AsymSeries& s, const Real& n, int terms = -1);

/// 1/4 + a_2/n^2 + ... + a_6/n^6.
AsymSeries beta_series(const WeightParams& params);

/// -n/4 + b_0 + b_1/n + ... + b_5/n^5.
AsymSeries p_series(const WeightParams& params);

/// True at alpha = +-1/2, where every correction in the series vanishes and
/// the remainder is exponentially small.
bool exponential_regime(const WeightParams& params);

/// ln D_n(0) from the product of Gamma ratios, at the working precision.
Real log_dn0_product(const Real& alpha, int n);
/// ln D_n(0) from the Barnes G form, at the working precision.
Real log_dn0_barnes(const Real& alpha, int n);

struct Dn0 {
  Real value;     // product form
  Real barnes;    // Barnes G form
  double discrepancy = 0.0;
};

/// Both forms of ln D_n(0), each certified by the doubling policy; throws
/// PrecisionError when they disagree beyond ctx.agreement_digits.
Dn0 dn0_exact(const Real& alpha, int n, const PrecisionContext& ctx);

/// ln D_n(t) from the large-n expansion through the n^-3 term.
Real dn_asymptotic(const WeightParams& params, int n);

/// The bracket of the ratio D_n(t)/D_n(0) through the n^-3 term.
Real log_ratio_asymptotic(const WeightParams& params, int n);

/// ln D_n(0) from its large-n expansion through the n^-3 term.
Real dn0_asymptotic(const Real& alpha, int n);

struct OrderFit {
  double slope = 0.0;
  int used = 0;
  std::vector<std::string> warnings;  // dropped points
};

/// Least-squares slope of log|err| against log n. Nonpositive errors are
/// dropped with a warning; throws std::invalid_argument with fewer than four
/// usable points.
OrderFit order_fit(const std::vector<std::pair<double, Real>>& errors);

/// ln(D_n(t)/D_n(0)) as the s-integral over [0, t] of
/// 2 beta_n (n + alpha + s - s beta_n - s beta_{n-1} - s beta_{n+1}) - n,
/// by tanh-sinh quadrature on pipeline tables.
Real log_ratio_by_integral(const WeightParams& params, int n, unsigned digits);

enum class SeriesQuantity { beta, p, hankel };

struct SeriesComparison {
  SeriesQuantity quantity = SeriesQuantity::beta;
  WeightParams params;
  std::vector<int> n;
  std::vector<Real> oracle;
  std::vector<Real> series;
  std::vector<Real> abs_error;
  std::vector<bool> in_regime;
  OrderFit fit;
  bool exponential = false;   // alpha = +-1/2
  bool fit_valid = false;     // four or more in-regime points above the floor
};

/// Pipeline vs series over the given n, on one table built to the largest n.
/// Errors below 10^-agreement_digits (relative, floored at 1) count as the
/// precision floor and are left out of the fit.
SeriesComparison compare_series(SeriesQuantity q, const WeightParams& params, const std::vector<int>& ns,
                                unsigned agreement_digits = 25);

/// Same on an existing table (n_max must cover every n).
SeriesComparison compare_series(SeriesQuantity q, const OrthoTable& table, const std::vector<int>& ns);

/// The split-path table compare_series builds for the given n.
OrthoTable series_table(const WeightParams& params, int n_max, unsigned agreement_digits = 25);

/// CSV columns n,oracle,series,abs_error,running_slope.
void write_series_csv(std::ostream& os, const SeriesComparison& cmp, int digits);

}  // namespace semijacobi

#endif  // SEMIJACOBI_ASYMPTOTICS_HPP
