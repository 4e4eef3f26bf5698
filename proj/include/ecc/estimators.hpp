#ifndef ECC_ESTIMATORS_HPP_
#define ECC_ESTIMATORS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ecc/curves.hpp"
#include "ecc/error.hpp"

namespace ecc {

/*
 * Peaks-over-threshold estimates for one choice of k.
 *
 * The exceedance set is {i : R_i >= R_(k)}; under ties it can hold more
 * than k pairs. sigma_xy and gamma_xy keep the divisor k regardless.
 */
struct EccReport {
  double sigma_xy = 0.0;
  double rho_xy = 0.0;
  double gamma_xy = 0.0;
  std::size_t k = 0;
  double r_k = 0.0;
  std::vector<std::size_t> exceedance_indices;
};

/// Per-pair quantities every estimator needs: <x_i, y_i>, ||x_i||^2,
/// ||y_i||^2 and R_i. Computing these once lets callers sweep over k cheaply.
struct PairStatistics {
  std::vector<double> cross;
  std::vector<double> x_sq;
  std::vector<double> y_sq;
  std::vector<double> radius;

  std::size_t size() const noexcept { return radius.size(); }
};

inline PairStatistics pair_statistics(const PairedSample &pairs) {
  const std::size_t n = pairs.size();
  PairStatistics s;
  s.cross.resize(n);
  s.x_sq.resize(n);
  s.y_sq.resize(n);
  s.radius.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Curve &x = pairs.x()[i];
    const Curve &y = pairs.y()[i];
    s.cross[i] = inner_product(x, y);
    s.x_sq[i] = inner_product(x, x);
    s.y_sq[i] = inner_product(y, y);
    s.radius[i] = std::sqrt(std::max(s.x_sq[i], s.y_sq[i]));
  }
  return s;
}

/// k-th largest value, counted with multiplicity (k = 1 is the maximum).
inline double order_statistic(std::span<const double> values, std::size_t k) {
  if (k < 1 || k > values.size()) {
    throw error(error_kind::range, "order_statistic",
                "k = " + std::to_string(k) + " outside [1, " + std::to_string(values.size()) +
                    "]");
  }
  std::vector<double> work(values.begin(), values.end());
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(k - 1), work.end(),
                   std::greater<>());
  return work[k - 1];
}

namespace detail {

struct exceedances {
  double r_k;
  std::vector<std::size_t> indices;
};

inline exceedances find_exceedances(std::span<const double> radius, std::size_t k,
                                    const char *operation) {
  if (k < 1 || k > radius.size()) {
    throw error(error_kind::range, operation,
                "k = " + std::to_string(k) + " outside [1, " + std::to_string(radius.size()) +
                    "]");
  }
  exceedances e{order_statistic(radius, k), {}};
  if (!(e.r_k > 0.0)) {
    throw error(error_kind::degenerate_sample, operation,
                "R_(k) = 0: fewer than " + std::to_string(k) + " nonzero pairs");
  }
  for (std::size_t i = 0; i < radius.size(); ++i) {
    if (radius[i] >= e.r_k) {
      e.indices.push_back(i);
    }
  }
  return e;
}

} // namespace detail

/// sigma = (1/k) sum <X_i / R_(k), Y_i / R_(k)> over the exceedance set.
inline double extremal_covariance(const PairStatistics &s, std::size_t k) {
  const auto e = detail::find_exceedances(s.radius, k, "extremal_covariance");
  const double scale = e.r_k * e.r_k;
  const double total = detail::sum_over(
      e.indices.size(), [&](std::size_t t) { return s.cross[e.indices[t]] / scale; });
  return total / static_cast<double>(k);
}

/// gamma = (1/k) sum <X_i / R_i, Y_i / R_i> over the exceedance set.
inline double angular_dependence(const PairStatistics &s, std::size_t k) {
  const auto e = detail::find_exceedances(s.radius, k, "angular_dependence");
  const double total = detail::sum_over(e.indices.size(), [&](std::size_t t) {
    const std::size_t i = e.indices[t];
    return s.cross[i] / (s.radius[i] * s.radius[i]);
  });
  return total / static_cast<double>(k);
}

/*
 * rho = sum <X_i, Y_i> / (sum ||X_i||^2 sum ||Y_i||^2)^(1/2), all three sums
 * restricted to the exceedance set. Also fills sigma and gamma so a single
 * call yields the full report.
 */
inline EccReport extremal_correlation(const PairStatistics &s, std::size_t k) {
  constexpr const char *op = "extremal_correlation";
  auto e = detail::find_exceedances(s.radius, k, op);
  detail::compensated_sum cross, xx, yy, sigma, gamma;
  const double scale = e.r_k * e.r_k;
  for (const std::size_t i : e.indices) {
    cross.add(s.cross[i]);
    xx.add(s.x_sq[i]);
    yy.add(s.y_sq[i]);
    sigma.add(s.cross[i] / scale);
    gamma.add(s.cross[i] / (s.radius[i] * s.radius[i]));
  }
  if (!(xx.value() > 0.0) || !(yy.value() > 0.0)) {
    throw error(error_kind::degenerate_sample, op,
                "one margin is identically zero on the exceedance set");
  }
  double denom = std::sqrt(xx.value() * yy.value());
  if (!std::isfinite(denom)) {
    denom = std::sqrt(xx.value()) * std::sqrt(yy.value());
  }
  EccReport r;
  r.rho_xy = std::clamp(cross.value() / denom, -1.0, 1.0);
  r.sigma_xy = sigma.value() / static_cast<double>(k);
  r.gamma_xy = gamma.value() / static_cast<double>(k);
  r.k = k;
  r.r_k = e.r_k;
  r.exceedance_indices = std::move(e.indices);
  return r;
}

inline double extremal_covariance(const PairedSample &p, std::size_t k) {
  return extremal_covariance(pair_statistics(p), k);
}

inline double angular_dependence(const PairedSample &p, std::size_t k) {
  return angular_dependence(pair_statistics(p), k);
}

inline EccReport extremal_correlation(const PairedSample &p, std::size_t k) {
  return extremal_correlation(pair_statistics(p), k);
}

} // namespace ecc

#endif // ECC_ESTIMATORS_HPP_
