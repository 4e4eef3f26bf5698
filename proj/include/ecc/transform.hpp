#ifndef ECC_TRANSFORM_HPP_
#define ECC_TRANSFORM_HPP_

#include <cmath>
#include <vector>

#include "ecc/curves.hpp"
#include "ecc/error.hpp"

namespace ecc {

/*
 * Tail-equivalence map x -> x / ||x||^(1 - alpha_source / alpha_target).
 *
 * Only the scale of each curve changes: the output has norm
 * ||x||^(alpha_source / alpha_target) and the direction of x. A norm with
 * tail index alpha_source therefore acquires tail index alpha_target.
 * Zero curves stay zero.
 */
inline Curve power_transform(const Curve &x, double alpha_source, double alpha_target) {
  if (!(alpha_source > 0.0) || !(alpha_target > 0.0)) {
    throw error(error_kind::domain, "power_transform", "tail indexes must be positive");
  }
  const double r = norm(x);
  if (r == 0.0 || alpha_source == alpha_target) {
    return x;
  }
  const double factor = std::pow(r, alpha_source / alpha_target - 1.0);
  return x.scaled(factor);
}

inline FunctionalSample power_transform(const FunctionalSample &sample, double alpha_source,
                                        double alpha_target) {
  std::vector<Curve> out;
  out.reserve(sample.size());
  for (const Curve &c : sample) {
    out.push_back(power_transform(c, alpha_source, alpha_target));
  }
  return FunctionalSample(std::move(out));
}

} // namespace ecc

#endif // ECC_TRANSFORM_HPP_
