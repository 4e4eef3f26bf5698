#ifndef ECC_CHI_HPP_
#define ECC_CHI_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ecc/error.hpp"

namespace ecc {

/*
 * Empirical chi(q) and chibar(q) for a scalar pair (U, V).
 *
 *   chi(q)    = P(F_U(U) > q | F_V(V) > q)
 *   chibar(q) = 2 log P(F_U(U) > q) / log P(F_U(U) > q, F_V(V) > q) - 1
 *
 * F is the empirical CDF rank / n with average ranks for ties. Bands are 95%
 * normal approximations: binomial for chi, delta method on the log
 * proportions for chibar. chibar is clamped to [-1, 1]; `raw_chibar` keeps
 * the unclamped value.
 */
struct ChiEntry {
  double q = 0.0;
  bool defined = false;  // false when no v value exceeds q
  std::size_t v_exceedances = 0;
  std::size_t joint_exceedances = 0;
  double chi = 0.0;
  double chibar = 0.0;
  double chi_lo = 0.0;
  double chi_hi = 0.0;
  double chibar_lo = 0.0;
  double chibar_hi = 0.0;
  double raw_chibar = 0.0;
};

struct ChiSeries {
  std::vector<ChiEntry> entries;
};

/// Empirical CDF values rank_i / n using average ranks for ties.
inline std::vector<double> empirical_cdf(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> cdf(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t end = i + 1;
    while (end < n && values[order[end]] == values[order[i]]) {
      ++end;
    }
    // ranks i+1 .. end share their average
    const double rank = 0.5 * static_cast<double>(i + 1 + end);
    for (std::size_t t = i; t < end; ++t) {
      cdf[order[t]] = rank / static_cast<double>(n);
    }
    i = end;
  }
  return cdf;
}

inline ChiSeries chi_curve(std::span<const double> u, std::span<const double> v,
                           std::span<const double> q_grid) {
  constexpr const char *op = "chi_curve";
  if (u.size() != v.size()) {
    throw error(error_kind::shape, op,
                "u has " + std::to_string(u.size()) + " values, v has " +
                    std::to_string(v.size()));
  }
  const std::size_t n = u.size();
  // Around 20 pairs is the practical minimum for a readable plot, but small
  // inputs are still well defined.
  if (n == 0) {
    throw error(error_kind::range, op, "empty input");
  }
  for (std::size_t t = 0; t < q_grid.size(); ++t) {
    if (!(q_grid[t] > 0.0 && q_grid[t] < 1.0) || (t > 0 && !(q_grid[t] > q_grid[t - 1]))) {
      throw error(error_kind::range, op, "q grid must be strictly increasing inside (0, 1)");
    }
  }
  const auto fu = empirical_cdf(u);
  const auto fv = empirical_cdf(v);
  constexpr double z = 1.959963984540054;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double nd = static_cast<double>(n);

  ChiSeries series;
  series.entries.reserve(q_grid.size());
  for (const double q : q_grid) {
    ChiEntry e;
    e.q = q;
    std::size_t u_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool ue = fu[i] > q;
      const bool ve = fv[i] > q;
      u_count += ue;
      e.v_exceedances += ve;
      e.joint_exceedances += ue && ve;
    }
    if (e.v_exceedances == 0) {
      e.chi = e.chibar = e.chi_lo = e.chi_hi = e.chibar_lo = e.chibar_hi = e.raw_chibar = nan;
      series.entries.push_back(e);
      continue;
    }
    e.defined = true;

    const double m = static_cast<double>(e.v_exceedances);
    e.chi = static_cast<double>(e.joint_exceedances) / m;
    const double chi_se = std::sqrt(e.chi * (1.0 - e.chi) / m);
    e.chi_lo = std::max(0.0, e.chi - z * chi_se);
    e.chi_hi = std::min(1.0, e.chi + z * chi_se);

    const double pu = static_cast<double>(u_count) / nd;
    const double pj = static_cast<double>(e.joint_exceedances) / nd;
    if (e.joint_exceedances == 0) {
      // log P(joint) -> -inf, so chibar attains its lower limit.
      e.raw_chibar = -1.0;
      e.chibar_lo = e.chibar_hi = nan;
    } else if (pj >= 1.0 || pu <= 0.0) {
      e.raw_chibar = e.chibar_lo = e.chibar_hi = nan;
    } else {
      const double a = std::log(pu);
      const double b = std::log(pj);
      e.raw_chibar = 2.0 * a / b - 1.0;
      // Var(log p) ~ (1 - p) / (n p); Cov(log pu, log pj) ~ (1 - pu) / (n pu).
      const double var_a = (1.0 - pu) / (nd * pu);
      const double var_b = (1.0 - pj) / (nd * pj);
      const double cov_ab = (1.0 - pu) / (nd * pu);
      const double da = 2.0 / b;
      const double db = -2.0 * a / (b * b);
      const double var = std::max(0.0, da * da * var_a + db * db * var_b + 2.0 * da * db * cov_ab);
      const double half = z * std::sqrt(var);
      e.chibar_lo = std::clamp(e.raw_chibar - half, -1.0, 1.0);
      e.chibar_hi = std::clamp(e.raw_chibar + half, -1.0, 1.0);
    }
    e.chibar = std::isnan(e.raw_chibar) ? nan : std::clamp(e.raw_chibar, -1.0, 1.0);
    series.entries.push_back(e);
  }
  return series;
}

/// Evenly spaced q values start, start + step, ... up to stop (inclusive within 1e-9).
inline std::vector<double> q_range(double start, double stop, double step) {
  if (!(step > 0.0) || !(start > 0.0) || !(stop < 1.0) || start > stop) {
    throw error(error_kind::range, "q_range", "need 0 < start <= stop < 1 and step > 0");
  }
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double q = start + static_cast<double>(i) * step;
    if (q > stop + 1e-9) {
      break;
    }
    out.push_back(std::min(q, stop));
  }
  return out;
}

} // namespace ecc

#endif // ECC_CHI_HPP_
