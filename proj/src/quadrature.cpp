#include "semijacobi/quadrature.hpp"

#include <stdexcept>

namespace semijacobi {

QuadratureRule QuadratureRule::tanh_sinh(int level, double endpoint_exponent) {
  if (level < 0 || level > 20) throw std::invalid_argument("quadrature level out of range");
  if (!(endpoint_exponent > 0)) throw DomainError("endpoint exponent must be positive");
  QuadratureRule rule;
  rule.level_ = level;
  rule.precision_ = working_precision();

  const Real h = Real::pow2(-level);
  const Real half_pi = Real::pi() / 2;
  const Real cutoff = Real::pow2(-working_precision() - 20);
  const Real exponent(endpoint_exponent);

  auto make = [&](const Real& u) {
    const Real v = half_pi * sinh(u);
    const Real c = cosh(v);
    QuadratureNode node;
    node.one_minus_x2 = 1 / square(c);
    node.x = tanh(v);
    node.weight = h * half_pi * cosh(u) * node.one_minus_x2;
    return node;
  };

  rule.nodes_.push_back(make(Real(0)));
  for (long k = 1;; ++k) {
    const Real u = k * h;
    QuadratureNode right = make(u);
    // Weighted endpoint behaviour ~ weight * (1 - x^2)^(e - 1).
    const Real size = right.weight * pow(right.one_minus_x2, exponent - 1);
    if (size < cutoff || right.one_minus_x2.is_zero()) break;
    QuadratureNode left{-right.x, right.one_minus_x2, right.weight};
    rule.nodes_.push_back(std::move(right));
    rule.nodes_.push_back(std::move(left));
    if (k > (40L << level)) break;
  }
  return rule;
}

}  // namespace semijacobi
