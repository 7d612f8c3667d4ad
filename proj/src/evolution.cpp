#include "semijacobi/evolution.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace semijacobi {

std::vector<Real> TGrid::points() const {
  if (intervals < 0) throw std::invalid_argument("TGrid: negative interval count");
  WorkingPrecision guard(std::max({working_precision(), start.precision(), end.precision()}));
  std::vector<Real> out;
  out.reserve(intervals + 1);
  if (intervals == 0) {
    out.push_back(start);
    return out;
  }
  const Real step = (end - start) / intervals;
  for (int i = 0; i <= intervals; ++i) out.push_back(i == intervals ? end : start + i * step);
  return out;
}

bool GridFunction::uniform() const {
  if (t.size() < 3) return true;
  WorkingPrecision guard(t.front().precision());
  const Real first = t[1] - t[0];
  const Real tol = abs(first) * pow(Real(10), -12L);
  for (std::size_t i = 2; i < t.size(); ++i) {
    if (abs((t[i] - t[i - 1]) - first) > tol) return false;
  }
  return true;
}

void write_grid_csv(std::ostream& os, const GridFunction& f, int digits) {
  os << "t,value\n";
  for (std::size_t i = 0; i < f.t.size(); ++i) os << f.t[i].str(digits) << ',' << f.values[i].str(digits) << '\n';
}

Stencil::Stencil(const WeightParams& params, int n_max, const Real& t, const Real& h, int order,
                 const PrecisionContext& ctx)
    : t_(t), h_(h), order_(order), half_(order / 2) {
  if (order != 2 && order != 4) throw std::invalid_argument("stencil order must be 2 or 4");
  WorkingPrecision guard(std::max<mpfr_prec_t>(4 * ctx.mantissa_bits, t.precision()));
  for (int k = -half_; k <= half_; ++k) {
    tables_.push_back(build_ortho_table(params.at(t + k * h), n_max, ctx));
    aux_.push_back(build_aux_table(tables_.back()));
  }
}

std::vector<Real> Stencil::samples(const Quantity& q) const {
  std::vector<Real> f;
  f.reserve(tables_.size());
  for (std::size_t i = 0; i < tables_.size(); ++i) f.push_back(q(tables_[i], aux_[i]));
  return f;
}

Real Stencil::value(const Quantity& q) const { return q(tables_[half_], aux_[half_]); }

Real Stencil::d1(const Quantity& q) const {
  const auto f = samples(q);
  WorkingPrecision guard(table().bits);
  if (order_ == 2) return (f[2] - f[0]) / (2 * h_);
  return (-f[4] + 8 * f[3] - 8 * f[1] + f[0]) / (12 * h_);
}

Real Stencil::d2(const Quantity& q) const {
  const auto f = samples(q);
  WorkingPrecision guard(table().bits);
  if (order_ == 2) return (f[2] - 2 * f[1] + f[0]) / square(h_);
  return (-f[4] + 16 * f[3] - 30 * f[2] + 16 * f[1] - f[0]) / (12 * square(h_));
}

Real forward_derivative(const WeightParams& params, int n_max, const Quantity& q, const Real& h,
                        const PrecisionContext& ctx) {
  WorkingPrecision guard(4 * ctx.mantissa_bits);
  std::vector<Real> f;
  for (int k = 0; k <= 4; ++k) {
    OrthoTable table = build_ortho_table(params.at(k * h), n_max, ctx);
    f.push_back(q(table, build_aux_table(table)));
  }
  return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
}

PrecisionContext evolution_context(int n, unsigned digits) { return PrecisionContext::for_degree(n + 1, digits); }

namespace {

struct IdentitySpec {
  std::string name;
  int derivative_order;  // highest t-derivative taken by finite differences
};

using Evaluation = std::vector<std::optional<Real>>;
using IdentityFn = std::function<Evaluation(const Stencil&, int n)>;

struct Identity {
  std::vector<IdentitySpec> specs;
  IdentityFn eval;
};

Quantity log_h(int n) {
  return [n](const OrthoTable& tb, const AuxTable&) { return log(tb.h[n]); };
}
Quantity p_of(int n) {
  return [n](const OrthoTable& tb, const AuxTable&) { return tb.p[n]; };
}
Quantity beta_of(int n) {
  return [n](const OrthoTable& tb, const AuxTable&) { return tb.beta[n]; };
}
Quantity H_of(int n) {
  return [n](const OrthoTable&, const AuxTable& aux) { return aux.H[n]; };
}
Quantity log_d(int n) {
  return [n](const OrthoTable& tb, const AuxTable&) { return tb.log_d[n]; };
}
Quantity W_of(int n) {
  return [n](const OrthoTable& tb, const AuxTable& aux) { return 1 + 2 * tb.params.t / aux.R[n]; };
}

Identity make_identity(FdIdentity which) {
  switch (which) {
    case FdIdentity::dln_h:
      return {{{"dln_h", 1}}, [](const Stencil& s, int n) -> Evaluation {
                const Real& a = s.table().params.alpha;
                return {scaled_residual({2 * s.t() * s.d1(log_h(n)), -s.aux().R[n], 2 * n + 1 + 2 * a})};
              }};
    case FdIdentity::dp:
      return {{{"id2", 1}, {"pnt", 1}}, [](const Stencil& s, int n) -> Evaluation {
                const OrthoTable& tb = s.table();
                const Real dp = s.d1(p_of(n));
                const Real& b = tb.beta[n];
                return {scaled_residual({2 * s.t() * dp, -b * s.aux().R[n], s.aux().r[n], 2 * tb.p[n]}),
                        scaled_residual({dp, -b * tb.beta[n - 1]})};
              }};
    case FdIdentity::hn:
      return {{{"hn", 1}}, [](const Stencil& s, int n) -> Evaluation {
                const Real& a = s.table().params.alpha;
                return {scaled_residual({s.aux().H[n], -Real(n) * (n + 2 * a), -2 * s.t() * s.d1(log_d(n))})};
              }};
    case FdIdentity::pv:
      return {{{"pv", 2}}, [](const Stencil& s, int n) -> Evaluation {
                const Real& t = s.t();
                const Real& a = s.table().params.alpha;
                const Real W = s.value(W_of(n));
                if (t.is_zero() || W.is_zero() || W == Real(1)) return {std::nullopt};
                const Real dW = s.d1(W_of(n));
                const Real d2W = s.d2(W_of(n));
                const Real mu1 = square(a) / 2;
                const Real mu2 = Real::ratio(-1, 8);
                const Real mu3 = (2 * n + 1 + 2 * a) / 2;
                const Real mu4 = Real::ratio(-1, 2);
                const Real Wm1 = W - 1;
                return {scaled_residual({-d2W, (3 * W - 1) * square(dW) / (2 * W * Wm1), -dW / t,
                                         square(Wm1) / square(t) * (mu1 * W + mu2 / W), mu3 * W / t,
                                         mu4 * W * (W + 1) / Wm1})};
              }};
    case FdIdentity::btde:
      return {{{"btde", 2}}, [](const Stencil& s, int n) -> Evaluation {
                const Real& t = s.t();
                if (t.is_zero()) return {std::nullopt};
                const Real& a = s.table().params.alpha;
                const Real b = s.table().beta[n];
                const Real db = s.d1(beta_of(n));
                const Real d2b = s.d2(beta_of(n));
                const Real u = t * db + b;
                const Real v = t * d2b + 2 * db;
                const Real q = n - 2 * t * b;
                const Real q2 = square(q);
                const Real inner = 8 * square(t) * u * v + 4 * t * (2 * t - 2 * n + 1 - 2 * a + 4 * t * b) * square(u) -
                                   4 * t * u * (2 * n * a + 2 * (n - 2 * a) * q - 3 * q2) + 4 * square(q2) -
                                   4 * (n - 3 * a + t) * q2 * q + 4 * (n * (t - 3 * a) - 2 * a * (t - a)) * q2 +
                                   8 * n * a * (t - a) * q;
                const Real bracket = 2 * t * v + (2 * t - 2 * a + 1 - 2 * q) * u + 3 * q2 - 2 * (n - 2 * a) * q - 2 * n * a;
                const Real rhs = square(bracket) * 16 * square(t) * (b * q * (n + 2 * a - 2 * t * b) + square(u));
                return {scaled_residual({square(inner), -rhs})};
              }};
    case FdIdentity::hn_ode:
      return {{{"ode", 2}, {"riccati", 1}, {"branch", 1}}, [](const Stencil& s, int n) -> Evaluation {
                const Real& t = s.t();
                const Real& a = s.table().params.alpha;
                const Real H = s.aux().H[n];
                const Real dH = s.d1(H_of(n));
                const Real d2H = s.d2(H_of(n));
                const Real r = s.aux().r[n];
                const Real ta = t + a;
                const Real ta2 = square(ta);
                const Real K = 2 * n * ta + 1;
                const Real lhs = 4 * t * square(t) * square(d2H) + 4 * square(t) * d2H * (dH - 2 * ta) +
                                 8 * square(t) * dH * square(dH) - t * square(dH) * (4 * H + 4 * ta2 - 32 * n * t - 1) -
                                 4 * t * dH * (4 * (2 * n + a + t) * H + (3 * t + a) * (4 * n * t + 4 * n * a + 1)) +
                                 8 * (n + a + t) * square(H) +
                                 4 * H * (2 * t * square(t) + 6 * square(t) * (n + a) + t * (8 * n * a + 6 * square(a) + 1) +
                                          2 * square(a) * (n + a)) +
                                 8 * t * ta2 * K;
                const Real curly = 2 * square(t) * d2H + t * (4 * H + 8 * n * t + 1) * dH - 2 * square(H) -
                                   2 * H * (2 * n * t + ta2) - 2 * t * ta * K;
                const Real rhs = 16 * (H - 2 * t * dH + ta2) * square(curly);
                Evaluation out;
                out.emplace_back(scaled_residual({square(lhs), -rhs}));
                out.emplace_back(scaled_residual({square(r), 2 * ta * r, 2 * t * dH, -H}));
                const Real disc = ta2 + H - 2 * t * dH;
                if (disc.sign() < 0) {
                  out.emplace_back(std::nullopt);
                } else {
                  out.emplace_back(scaled_residual({-ta + sqrt(disc), -r}));
                }
                return out;
              }};
  }
  throw std::invalid_argument("unknown identity");
}

int min_degree(FdIdentity which) { return which == FdIdentity::dp ? 1 : 0; }

Real default_step(const TGrid& grid, const PrecisionContext& ctx) {
  WorkingPrecision guard(ctx.mantissa_bits);
  Real floor = pow(Real(10), -static_cast<long>(ctx.agreement_digits));
  Real scale = max(Real(1), max(abs(grid.start), abs(grid.end)));
  return pow(floor, Real(1) / 6) * scale;
}

std::vector<FdCheckResult> run_checks(FdIdentity which, const WeightParams& params, int n, const TGrid& grid,
                                      const PrecisionContext& ctx, const FdOptions& opts) {
  if (n < min_degree(which)) throw std::out_of_range("degree too small for this identity");
  if (opts.order != 2 && opts.order != 4) throw std::invalid_argument("FD order must be 2 or 4");
  const Identity id = make_identity(which);
  WorkingPrecision guard(4 * ctx.mantissa_bits);
  const Real h = opts.step.is_zero() ? default_step(grid, ctx) : opts.step;
  const Real two_h = 2 * h;
  const Real richardson = Real(1) / ((1L << opts.order) - 1);
  const Real floor = pow(Real(10), -static_cast<long>(ctx.agreement_digits));
  const int n_max = std::max(n, 1);

  std::vector<FdCheckResult> results;
  for (const auto& spec : id.specs) {
    FdCheckResult r;
    r.name = spec.name;
    r.step = h;
    r.order = opts.order;
    r.noise_floor = 64 * floor / pow(h, static_cast<long>(spec.derivative_order));
    r.pass = true;
    results.push_back(std::move(r));
  }
  for (const Real& t : grid.points()) {
    Stencil fine(params, n_max, t, h, opts.order, ctx);
    Stencil coarse(params, n_max, t, two_h, opts.order, ctx);
    const Evaluation s1 = id.eval(fine, n);
    const Evaluation s2 = id.eval(coarse, n);
    for (std::size_t i = 0; i < results.size(); ++i) {
      FdCheckResult& out = results[i];
      if (!s1[i] || !s2[i]) {
        ++out.skipped;
        continue;
      }
      ++out.points;
      const Real estimate = abs(*s2[i] - *s1[i]) * richardson;
      if (estimate > Real(opts.max_truncation)) {
        throw PrecisionError("grid too coarse for " + out.name + ": truncation estimate " + estimate.str(3) +
                             " at t=" + t.str(6));
      }
      if (estimate > out.truncation_estimate) out.truncation_estimate = estimate;
      if (!s1[i]->is_finite() || *s1[i] > out.max_residual || out.points == 1) {
        out.max_residual = *s1[i];
        out.argmax_t = t;
      }
      if (!(*s1[i] <= 8 * estimate + out.noise_floor)) out.pass = false;
    }
  }
  for (auto& r : results) {
    if (r.points == 0) r.pass = false;
  }
  return results;
}

}  // namespace

std::vector<FdCheckResult> dln_h_check(const WeightParams& params, int n, const TGrid& grid,
                                       const PrecisionContext& ctx, const FdOptions& opts) {
  return run_checks(FdIdentity::dln_h, params, n, grid, ctx, opts);
}

std::vector<FdCheckResult> dp_check(const WeightParams& params, int n, const TGrid& grid,
                                    const PrecisionContext& ctx, const FdOptions& opts) {
  return run_checks(FdIdentity::dp, params, n, grid, ctx, opts);
}

std::vector<FdCheckResult> hn_check(const WeightParams& params, int n, const TGrid& grid,
                                    const PrecisionContext& ctx, const FdOptions& opts) {
  return run_checks(FdIdentity::hn, params, n, grid, ctx, opts);
}

std::vector<FdCheckResult> pv_residual(const WeightParams& params, int n, const TGrid& grid,
                                       const PrecisionContext& ctx, const FdOptions& opts) {
  return run_checks(FdIdentity::pv, params, n, grid, ctx, opts);
}

std::vector<FdCheckResult> btde_residual(const WeightParams& params, int n, const TGrid& grid,
                                         const PrecisionContext& ctx, const FdOptions& opts) {
  return run_checks(FdIdentity::btde, params, n, grid, ctx, opts);
}

std::vector<FdCheckResult> hn_ode_residual(const WeightParams& params, int n, const TGrid& grid,
                                           const PrecisionContext& ctx, const FdOptions& opts) {
  return run_checks(FdIdentity::hn_ode, params, n, grid, ctx, opts);
}

void record_fd(ResidualReport& report, const std::vector<FdCheckResult>& checks, const WeightParams& params,
               int n) {
  for (const auto& c : checks) {
    if (c.points > 0) report.record(c.name, c.max_residual, params.alpha, c.argmax_t, n);
  }
}

std::vector<ConvergenceStudy> fd_convergence(FdIdentity which, const WeightParams& params, int n, const Real& t,
                                             const Real& coarse_step, int halvings, int order,
                                             const PrecisionContext& ctx) {
  if (n < min_degree(which)) throw std::out_of_range("degree too small for this identity");
  const Identity id = make_identity(which);
  std::vector<ConvergenceStudy> out;
  for (const auto& spec : id.specs) out.push_back({spec.name, {}, {}, {}});
  WorkingPrecision guard(4 * ctx.mantissa_bits);
  Real h = coarse_step;
  for (int j = 0; j <= halvings; ++j, h = h / 2) {
    Stencil s(params, std::max(n, 1), t, h, order, ctx);
    const Evaluation e = id.eval(s, n);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!e[i]) continue;
      out[i].steps.push_back(h);
      out[i].residuals.push_back(*e[i]);
    }
  }
  for (auto& study : out) {
    for (std::size_t j = 1; j < study.residuals.size(); ++j) {
      const Real& a = study.residuals[j - 1];
      const Real& b = study.residuals[j];
      study.observed_orders.push_back(b.is_zero() ? INFINITY : std::log2((a / b).to_double()));
    }
  }
  return out;
}

namespace {

template <typename T>
std::pair<T, T> riccati_rhs_impl(const T& t, const T& R, const T& r, const T& a, int n) {
  const T two_t = 2 * t;
  T dr = (two_t * (r * r + 2 * a * r) / R - (n - r) * R) / two_t;
  T dR = (4 * a * t - R * R + (2 * a + 1 - two_t) * R + 2 * (two_t + R) * r) / two_t;
  return {dr, dR};
}

}  // namespace

std::pair<Real, Real> riccati_rhs(const RiccatiState& state, const WeightParams& params, int n) {
  if (state.t.is_zero()) throw SingularError("riccati_rhs: t = 0 is a singular point");
  if (state.R.is_zero()) throw SingularError("riccati_rhs: R_n = 0");
  WorkingPrecision guard(std::max({working_precision(), state.t.precision(), state.R.precision()}));
  return riccati_rhs_impl(state.t, state.R, state.r, params.alpha, n);
}

Real riccati_constraint_residual(const AuxTable& aux, int n) {
  if (n < 0 || n > aux.n_max) throw std::out_of_range("riccati_constraint_residual: degree outside the table");
  WorkingPrecision guard(aux.bits);
  const Real& t = aux.params.t;
  const Real& a = aux.params.alpha;
  Real dH(0);
  for (int j = 0; j < n; ++j) dH += riccati_rhs({t, aux.R[j], aux.r[j]}, aux.params, j).second;
  const Real& r = aux.r[n];
  return scaled_residual({square(r), 2 * (t + a) * r, 2 * t * dH, -aux.H[n]});
}

RiccatiSolution riccati_integrate(const WeightParams& params, int n, const Real& t_start, const Real& t_end,
                                  const PrecisionContext& ctx, const RiccatiOptions& opts) {
  namespace odeint = boost::numeric::odeint;
  if (!(t_start > Real(0)) || !(t_end > Real(0))) {
    throw DomainError("riccati_integrate: the interval must lie in t > 0");
  }
  if (opts.samples < 2) throw std::invalid_argument("riccati_integrate: need at least two samples");
  OrthoTable table = build_ortho_table(params.at(t_start), std::max(n, 1), ctx);
  AuxTable aux = build_aux_table(table);

  using State = std::array<double, 2>;  // {R, r}
  State x{aux.R[n].to_double(), aux.r[n].to_double()};
  const double a = params.alpha.to_double();
  const double t0 = t_start.to_double();
  const double t1 = t_end.to_double();

  RiccatiSolution sol;
  sol.R.params = sol.r.params = params;
  sol.R.n = sol.r.n = n;
  std::vector<double> times;
  for (int i = 0; i < opts.samples; ++i) {
    times.push_back(i + 1 == opts.samples ? t1 : t0 + (t1 - t0) * i / (opts.samples - 1));
  }
  long evaluations = 0;
  auto system = [&](const State& s, State& ds, double t) {
    ++evaluations;
    if (s[0] == 0.0) throw SingularError("riccati_integrate: R_n reached 0 at t=" + std::to_string(t));
    auto [dr, dR] = riccati_rhs_impl<double>(t, s[0], s[1], a, n);
    ds[0] = dR;
    ds[1] = dr;
  };
  auto observer = [&](const State& s, double t) {
    if (!std::isfinite(s[0]) || !std::isfinite(s[1])) {
      throw PrecisionError("riccati_integrate: non-finite state at t=" + std::to_string(t));
    }
    sol.R.t.emplace_back(t);
    sol.R.values.emplace_back(s[0]);
    sol.r.t.emplace_back(t);
    sol.r.values.emplace_back(s[1]);
  };
  if (t0 == t1) {
    for (int i = 0; i < opts.samples; ++i) observer(x, t0);
    return sol;
  }
  const double dt = (t1 - t0) / 1000.0;
  auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_times(stepper, system, x, times.begin(), times.end(), dt, observer,
                            odeint::max_step_checker(200000));
  } catch (const odeint::step_adjustment_error& e) {
    throw PrecisionError(std::string("riccati_integrate: step size underflow: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw PrecisionError(std::string("riccati_integrate: tolerance failure: ") + e.what());
  }
  sol.steps = evaluations;
  return sol;
}

}  // namespace semijacobi
