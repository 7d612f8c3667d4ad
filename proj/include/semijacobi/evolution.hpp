// t-derivative structure: derivative identities for ln h_n and p(n,t), the
// coupled Riccati system for (R_n, r_n), the Painleve V form of R_n, and the
// second-order ODEs for beta_n and H_n.
//
// Residuals use finite differences of pipeline values on extended-precision
// stencils. Each check evaluates the residual at steps h and 2h; the
// difference gives a Richardson estimate of the truncation error, and a
// point passes when its residual is within that estimate plus the rounding
// floor of the stencil.

#ifndef SEMIJACOBI_EVOLUTION_HPP
#define SEMIJACOBI_EVOLUTION_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semijacobi/ladder.hpp"
#include "semijacobi/residual.hpp"

namespace semijacobi {

/// Uniform grid start + i (end - start) / intervals, i = 0..intervals.
struct TGrid {
  Real start;
  Real end;
  int intervals = 10;

  std::vector<Real> points() const;
};

struct GridFunction {
  WeightParams params;
  int n = 0;
  std::vector<Real> t;
  std::vector<Real> values;

  /// True when successive spacings agree to 1 part in 10^12.
  bool uniform() const;
};

/// CSV with columns t,value.
void write_grid_csv(std::ostream& os, const GridFunction& f, int digits);

/// A pipeline quantity read off the tables at one t.
using Quantity = std::function<Real(const OrthoTable&, const AuxTable&)>;

/// Tables at t + k h for |k| <= order/2, with central-difference stencils.
class Stencil {
 public:
  Stencil(const WeightParams& params, int n_max, const Real& t, const Real& h, int order,
          const PrecisionContext& ctx);

  const Real& t() const noexcept { return t_; }
  const Real& h() const noexcept { return h_; }
  int order() const noexcept { return order_; }
  const OrthoTable& table() const { return tables_[half_]; }
  const AuxTable& aux() const { return aux_[half_]; }

  Real value(const Quantity& q) const;
  Real d1(const Quantity& q) const;
  Real d2(const Quantity& q) const;

 private:
  std::vector<Real> samples(const Quantity& q) const;
  Real t_;
  Real h_;
  int order_;
  int half_;
  std::vector<OrthoTable> tables_;
  std::vector<AuxTable> aux_;
};

/// Finite-difference derivative of q at t = 0 by the one-sided 4th-order
/// stencil on t = 0, h, ..., 4h.
Real forward_derivative(const WeightParams& params, int n_max, const Quantity& q, const Real& h,
                        const PrecisionContext& ctx);

struct FdOptions {
  int order = 4;                 // 2 or 4
  Real step;                     // 0 selects the default (10^-digits)^(1/6) * max(1, |t_end|)
  double max_truncation = 1e-12; // larger Richardson estimates mean the grid is too coarse
};

struct FdCheckResult {
  std::string name;
  Real max_residual;          // at step h
  Real argmax_t;
  Real truncation_estimate;   // max over points of |s(2h) - s(h)| / (2^order - 1)
  Real noise_floor;           // rounding floor of the stencil at step h
  Real step;
  int order = 4;
  int points = 0;
  int skipped = 0;            // points where the identity is singular
  bool pass = false;
};

/// Builds the default evolution context: agreement `digits`, precision from
/// PrecisionContext::for_degree.
PrecisionContext evolution_context(int n, unsigned digits = 40);

/// 2t (ln h_n)' = R_n - 2n - 1 - 2 alpha.
std::vector<FdCheckResult> dln_h_check(const WeightParams& params, int n, const TGrid& grid,
                                       const PrecisionContext& ctx, const FdOptions& opts = {});

/// 2t p' = beta_n R_n - r_n - 2p ("id2") and p' = beta_n beta_{n-1} ("pnt").
std::vector<FdCheckResult> dp_check(const WeightParams& params, int n, const TGrid& grid,
                                    const PrecisionContext& ctx, const FdOptions& opts = {});

/// H_n = n(n + 2 alpha) + 2t (ln D_n)'.
std::vector<FdCheckResult> hn_check(const WeightParams& params, int n, const TGrid& grid,
                                    const PrecisionContext& ctx, const FdOptions& opts = {});

/// Painleve V for W_n = 1 + 2t/R_n with mu = (alpha^2/2, -1/8, (2n+1+2alpha)/2, -1/2).
std::vector<FdCheckResult> pv_residual(const WeightParams& params, int n, const TGrid& grid,
                                       const PrecisionContext& ctx, const FdOptions& opts = {});

/// Second-order ODE for beta_n, with r_n read as n - 2t beta_n.
std::vector<FdCheckResult> btde_residual(const WeightParams& params, int n, const TGrid& grid,
                                         const PrecisionContext& ctx, const FdOptions& opts = {});

/// Second-order ODE for H_n ("ode"), the quadratic relation between r_n,
/// H_n, H_n' ("riccati") and the root r_n = -t - alpha + sqrt(...) ("branch").
std::vector<FdCheckResult> hn_ode_residual(const WeightParams& params, int n, const TGrid& grid,
                                           const PrecisionContext& ctx, const FdOptions& opts = {});

/// Folds FD checks into a ResidualReport (one entry per identity).
void record_fd(ResidualReport& report, const std::vector<FdCheckResult>& checks, const WeightParams& params, int n);

/// Residual of one identity at a single t for step h and h/2, h/4, ...
struct ConvergenceStudy {
  std::string name;
  std::vector<Real> steps;
  std::vector<Real> residuals;
  std::vector<double> observed_orders;  // log2 of successive residual ratios
};

enum class FdIdentity { dln_h, dp, hn, pv, btde, hn_ode };

std::vector<ConvergenceStudy> fd_convergence(FdIdentity which, const WeightParams& params, int n, const Real& t,
                                             const Real& coarse_step, int halvings, int order,
                                             const PrecisionContext& ctx);

struct RiccatiState {
  Real t;
  Real R;
  Real r;
};

/// (dr/dt, dR/dt) from the coupled Riccati equations. Throws SingularError
/// at t = 0 or R = 0.
std::pair<Real, Real> riccati_rhs(const RiccatiState& state, const WeightParams& params, int n);

/// r_n^2 + 2(t + alpha) r_n + 2t H_n' - H_n with H_n' = sum_{j<n} R_j' taken
/// from riccati_rhs at the pipeline values.
Real riccati_constraint_residual(const AuxTable& aux, int n);

struct RiccatiOptions {
  double rel_tol = 1e-13;
  double abs_tol = 1e-13;
  int samples = 33;  // dense-output points including both ends
};

struct RiccatiSolution {
  GridFunction R;
  GridFunction r;
  long steps = 0;
};

/// Integrates the Riccati system from t_start to t_end (either direction,
/// both > 0) with an embedded Runge-Kutta 5(4) pair and dense output, from
/// pipeline values at t_start.
RiccatiSolution riccati_integrate(const WeightParams& params, int n, const Real& t_start, const Real& t_end,
                                  const PrecisionContext& ctx, const RiccatiOptions& opts = {});

}  // namespace semijacobi

#endif  // SEMIJACOBI_EVOLUTION_HPP
