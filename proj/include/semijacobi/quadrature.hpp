// Double-exponential (tanh-sinh) quadrature on (-1, 1).
//
// Nodes carry 1 - x^2 computed as sech^2 directly, so algebraic endpoint
// factors (1 - x^2)^alpha stay accurate for every alpha > -1.

#ifndef SEMIJACOBI_QUADRATURE_HPP
#define SEMIJACOBI_QUADRATURE_HPP

#include <string>
#include <vector>

#include "semijacobi/errors.hpp"
#include "semijacobi/real.hpp"

namespace semijacobi {

struct QuadratureNode {
  Real x;
  Real one_minus_x2;
  Real weight;
};

class QuadratureRule {
 public:
  /// Step 2^-level at the working precision. `endpoint_exponent` e > 0 is the
  /// power of (1 - x^2) the integrands behave like at the endpoints; the node
  /// set is truncated once weight * (1 - x^2)^(e-1) drops below the working
  /// epsilon.
  static QuadratureRule tanh_sinh(int level, double endpoint_exponent = 1.0);

  int level() const noexcept { return level_; }
  mpfr_prec_t precision() const noexcept { return precision_; }
  const std::vector<QuadratureNode>& nodes() const noexcept { return nodes_; }

  /// sum_k w_k f(node_k); f receives the QuadratureNode.
  template <typename F>
  Real integrate(F&& f) const {
    Real sum;
    for (const auto& node : nodes_) sum.add_mul(node.weight, f(node));
    return sum;
  }

 private:
  int level_ = 0;
  mpfr_prec_t precision_ = 0;
  std::vector<QuadratureNode> nodes_;
};

struct QuadratureResult {
  Real value;
  int level = 0;
  double relative_change = 0.0;  // between the last two levels
};

/// Raises the level until two successive levels agree to `digits` digits
/// (relative, with an absolute floor of 10^-digits * `scale`).
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double endpoint_exponent, unsigned digits,
                                    const Real& scale = Real(0), int min_level = 3, int max_level = 14) {
  const Real tol = pow(Real(10), -static_cast<long>(digits));
  Real previous = QuadratureRule::tanh_sinh(min_level, endpoint_exponent).integrate(f);
  for (int level = min_level + 1; level <= max_level; ++level) {
    Real current = QuadratureRule::tanh_sinh(level, endpoint_exponent).integrate(f);
    Real change = abs(current - previous);
    Real bound = tol * max(abs(current), abs(scale));
    if (change <= bound) {
      Real rel = current.is_zero() ? change : change / abs(current);
      return {std::move(current), level, rel.to_double()};
    }
    previous = std::move(current);
  }
  throw PrecisionError("tanh-sinh quadrature did not converge by level " + std::to_string(max_level));
}

}  // namespace semijacobi

#endif  // SEMIJACOBI_QUADRATURE_HPP
