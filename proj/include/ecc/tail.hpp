#ifndef ECC_TAIL_HPP_
#define ECC_TAIL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecc/curves.hpp"
#include "ecc/error.hpp"

namespace ecc {

enum class k_method { fixed, mindist, ks };

constexpr std::string_view to_string(k_method m) noexcept {
  switch (m) {
  case k_method::fixed:
    return "fixed";
  case k_method::mindist:
    return "mindist";
  case k_method::ks:
    return "ks";
  }
  return "unknown";
}

/*
 * Result of a tail-index fit.
 *
 * `k` is the number of upper order statistics used. For Hill-based fits
 * (fixed, mindist) `threshold` is the (k+1)-th largest value; for the KS
 * power-law fit it is x_min, the smallest of the k exceedances.
 * `distance` is the selection criterion at the chosen k (0 for fixed k).
 */
struct TailFit {
  double alpha_hat = 0.0;
  std::size_t k = 0;
  double threshold = 0.0;
  k_method method = k_method::fixed;
  double distance = 0.0;
};

struct HillEntry {
  std::size_t k;
  double alpha_hat;
  double ci_low;
  double ci_high;
};

struct HillSeries {
  std::vector<HillEntry> entries;
};

namespace detail {

inline std::vector<double> sorted_descending(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::stable_sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline void require_positive_top(const std::vector<double> &desc, std::size_t count,
                                  const char *operation) {
  for (std::size_t i = 0; i < count; ++i) {
    if (!(desc[i] > 0.0) || !std::isfinite(desc[i])) {
      throw error(error_kind::domain, operation,
                  "order statistic " + std::to_string(i + 1) + " is not a positive finite value");
    }
  }
}

// Mean log-excess of the top k values over desc[k]; the Hill estimate of 1/alpha.
inline double hill_gamma(const std::vector<double> &desc, std::size_t k) {
  const double base = desc[k];
  const double total =
      sum_over(k, [&](std::size_t i) { return std::log(desc[i] / base); });
  return total / static_cast<double>(k);
}

// Incrementally produces the Hill log-excess mean for k = 1, 2, ... from one
// descending sort: sum_{i<k} log V_i - k log V_k.
class hill_scan {
public:
  explicit hill_scan(const std::vector<double> &desc) : desc_(desc) {}

  double gamma(std::size_t k) {
    while (filled_ < k) {
      logs_.add(std::log(desc_[filled_]));
      ++filled_;
    }
    const double excess = logs_.value() - static_cast<double>(k) * std::log(desc_[k]);
    return std::max(0.0, excess) / static_cast<double>(k);
  }

private:
  const std::vector<double> &desc_;
  compensated_sum logs_;
  std::size_t filled_ = 0;
};

} // namespace detail

/// Hill estimate alpha = k / sum_{i<=k} ln(V_(i) / V_(k+1)).
inline TailFit hill(std::span<const double> values, std::size_t k) {
  const std::size_t n = values.size();
  if (n < 2 || k < 1 || k > n - 1) {
    throw error(error_kind::range, "hill",
                "k = " + std::to_string(k) + " outside [1, n-1] for n = " + std::to_string(n));
  }
  const auto desc = detail::sorted_descending(values);
  detail::require_positive_top(desc, k + 1, "hill");
  const double gamma = detail::hill_gamma(desc, k);
  if (!(gamma > 0.0)) {
    throw error(error_kind::degenerate_tail, "hill",
                "top " + std::to_string(k) + " values all equal the threshold");
  }
  return TailFit{1.0 / gamma, k, desc[k], k_method::fixed, 0.0};
}

/// Hill estimates for k = 1..k_max with 95% normal bands alpha ± 1.96 alpha / sqrt(k).
inline HillSeries hill_series(std::span<const double> values, std::size_t k_max) {
  const std::size_t n = values.size();
  if (k_max < 2 || n < 3 || k_max > n - 1) {
    throw error(error_kind::range, "hill_series",
                "k_max = " + std::to_string(k_max) + " outside [2, n-1] for n = " +
                    std::to_string(n));
  }
  const auto desc = detail::sorted_descending(values);
  detail::require_positive_top(desc, k_max + 1, "hill_series");
  HillSeries series;
  series.entries.reserve(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double gamma = detail::hill_gamma(desc, k);
    if (!(gamma > 0.0)) {
      throw error(error_kind::degenerate_tail, "hill_series",
                  "top " + std::to_string(k) + " values all equal the threshold");
    }
    const double alpha = 1.0 / gamma;
    const double half = 1.959963984540054 * alpha / std::sqrt(static_cast<double>(k));
    series.entries.push_back({k, alpha, alpha - half, alpha + half});
  }
  return series;
}

/*
 * Quantile-driven choice of k.
 *
 * For every candidate k in [k_min, k_max] the Hill fit gamma(k) = 1/alpha(k)
 * predicts the upper quantiles V_(k+1) (k/j)^gamma(k). The distance of a
 * candidate is the largest absolute gap between those predictions and the
 * observed V_(j) over the fixed window j = 1..T, T = floor(tail_fraction n).
 * The k with the smallest distance wins; ties go to the smaller k.
 */
struct MindistOptions {
  double tail_fraction = 0.15;
  std::size_t k_min = 2;
  // 0 selects max(T - 1, k_min + 1).
  std::size_t k_max = 0;
};

inline TailFit select_k_mindist(std::span<const double> values, MindistOptions options = {}) {
  constexpr const char *op = "select_k_mindist";
  const std::size_t n = values.size();
  if (n < 20) {
    throw error(error_kind::range, op, "need at least 20 values, got " + std::to_string(n));
  }
  if (!(options.tail_fraction > 0.0 && options.tail_fraction < 1.0)) {
    throw error(error_kind::range, op, "tail_fraction must lie in (0, 1)");
  }
  const auto window_default =
      static_cast<std::size_t>(std::floor(options.tail_fraction * static_cast<double>(n)));
  const std::size_t k_min = options.k_min;
  const std::size_t k_max =
      options.k_max != 0 ? options.k_max
                         : std::min(n - 1, std::max(window_default - 1, k_min + 1));
  if (k_min < 2 || k_min >= k_max || k_max > n - 1) {
    throw error(error_kind::range, op,
                "candidate range [" + std::to_string(k_min) + ", " + std::to_string(k_max) +
                    "] invalid for n = " + std::to_string(n));
  }
  const std::size_t window = std::min(n, std::max(window_default, k_max + 1));

  const auto desc = detail::sorted_descending(values);
  detail::require_positive_top(desc, std::max(window, k_max + 1), op);

  detail::hill_scan scan(desc);
  TailFit best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double gamma = scan.gamma(k);
    if (k < k_min || !(gamma > 0.0)) {
      continue;
    }
    const double base = desc[k];
    double dist = 0.0;
    for (std::size_t j = 1; j <= window; ++j) {
      const double fitted =
          base * std::pow(static_cast<double>(k) / static_cast<double>(j), gamma);
      dist = std::max(dist, std::abs(desc[j - 1] - fitted));
    }
    if (dist < best.distance) {
      best = TailFit{1.0 / gamma, k, base, k_method::mindist, dist};
    }
  }
  if (best.k == 0) {
    throw error(error_kind::degenerate_tail, op, "every candidate k has a flat tail");
  }
  return best;
}

inline TailFit select_k_mindist(std::span<const double> values, std::size_t k_min,
                                std::size_t k_max) {
  MindistOptions options;
  options.k_min = k_min;
  options.k_max = k_max;
  return select_k_mindist(values, options);
}

namespace detail {

// Sup distance between the empirical distribution of sorted exceedances and
// the continuous power law with density exponent `a` above x_min.
inline double power_law_ks(std::span<const double> exceedances, double x_min, double a) {
  const double m = static_cast<double>(exceedances.size());
  double dist = 0.0;
  std::size_t i = 0;
  while (i < exceedances.size()) {
    std::size_t end = i + 1;
    while (end < exceedances.size() && exceedances[end] == exceedances[i]) {
      ++end;
    }
    const double fitted = 1.0 - std::pow(exceedances[i] / x_min, 1.0 - a);
    const double below = static_cast<double>(i) / m;
    const double above = static_cast<double>(end) / m;
    dist = std::max({dist, std::abs(fitted - below), std::abs(above - fitted)});
    i = end;
  }
  return dist;
}

} // namespace detail

/*
 * KS-driven choice of the power-law threshold x_min.
 *
 * Each distinct order statistic above the sample minimum that leaves at least
 * `min_exceedances` values at or above it is a candidate. The density exponent
 * a = 1 + m / sum ln(v / x_min) is fitted by maximum likelihood on the m
 * exceedances and scored by the KS distance; the reported tail index is a - 1.
 */
struct KsOptions {
  std::size_t min_exceedances = 10;
};

inline TailFit select_k_ks(std::span<const double> values, KsOptions options = {}) {
  constexpr const char *op = "select_k_ks";
  const std::size_t n = values.size();
  if (n < 20) {
    throw error(error_kind::range, op, "need at least 20 values, got " + std::to_string(n));
  }
  std::vector<double> asc(values.begin(), values.end());
  std::sort(asc.begin(), asc.end());

  std::size_t distinct_positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(asc[i])) {
      throw error(error_kind::domain, op, "non-finite value");
    }
    if (asc[i] > 0.0 && (i == 0 || asc[i] != asc[i - 1])) {
      ++distinct_positive;
    }
  }
  if (distinct_positive < options.min_exceedances) {
    throw error(error_kind::degenerate_tail, op,
                "only " + std::to_string(distinct_positive) + " distinct positive values");
  }

  TailFit best;
  best.distance = std::numeric_limits<double>::infinity();
  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) {
    logs[i] = asc[i] > 0.0 ? std::log(asc[i]) : 0.0;
  }
  // Suffix sums of log values make every ML fit O(1).
  std::vector<double> suffix(n + 1, 0.0);
  {
    detail::compensated_sum acc;
    for (std::size_t i = n; i-- > 0;) {
      acc.add(logs[i]);
      suffix[i] = acc.value();
    }
  }
  for (std::size_t s = 1; s < n; ++s) {
    const std::size_t m = n - s;
    if (m < options.min_exceedances) {
      break;
    }
    const double x_min = asc[s];
    if (!(x_min > 0.0) || asc[s] == asc[s - 1]) {
      continue;
    }
    const double log_excess = suffix[s] - static_cast<double>(m) * logs[s];
    if (!(log_excess > 0.0)) {
      continue;
    }
    const double a = 1.0 + static_cast<double>(m) / log_excess;
    const double dist =
        detail::power_law_ks(std::span<const double>(asc).subspan(s), x_min, a);
    if (dist < best.distance) {
      best = TailFit{a - 1.0, m, x_min, k_method::ks, dist};
    }
  }
  if (best.k == 0) {
    throw error(error_kind::degenerate_tail, op, "no threshold admits a power-law fit");
  }
  return best;
}

} // namespace ecc

#endif // ECC_TAIL_HPP_
