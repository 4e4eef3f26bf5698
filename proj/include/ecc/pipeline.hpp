#ifndef ECC_PIPELINE_HPP_
#define ECC_PIPELINE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecc/curves.hpp"
#include "ecc/error.hpp"
#include "ecc/estimators.hpp"
#include "ecc/parallel.hpp"
#include "ecc/tail.hpp"
#include "ecc/transform.hpp"

namespace ecc {

struct KSelection {
  k_method method = k_method::mindist;
  std::size_t fixed_k = 0;
  MindistOptions mindist;
  KsOptions ks;

  static KSelection fixed(std::size_t k) {
    KSelection s;
    s.method = k_method::fixed;
    s.fixed_k = k;
    return s;
  }
  static KSelection mindist_default() { return KSelection{}; }
  static KSelection ks_default() {
    KSelection s;
    s.method = k_method::ks;
    return s;
  }
};

/// Chooses k on positive scalars (norms or radii) by the configured rule.
inline TailFit select_k(std::span<const double> values, const KSelection &selection) {
  switch (selection.method) {
  case k_method::fixed:
    return hill(values, selection.fixed_k);
  case k_method::mindist:
    return select_k_mindist(values, selection.mindist);
  case k_method::ks:
    return select_k_ks(values, selection.ks);
  }
  throw error(error_kind::domain, "select_k", "unknown k-selection method");
}

struct PipelineOptions {
  KSelection k_selection;
  double alpha_target = 3.0;
  // Margins whose Hill estimates differ by more than tau are transformed.
  double tau = 0.5;
  bool center = true;
  // Largest k of the attached Hill plots; 0 picks n / 2.
  std::size_t hill_k_max = 0;
  unsigned threads = 1;
};

struct TransformRecord {
  bool applied = false;
  double alpha_source_x = 0.0;
  double alpha_source_y = 0.0;
  double alpha_target = 0.0;
};

struct PipelineReport {
  std::size_t n = 0;
  std::size_t grid_size = 0;
  bool centered = false;
  HillSeries hill_x;
  HillSeries hill_y;
  TailFit tail_x;
  TailFit tail_y;
  TransformRecord transform;
  TailFit radius_fit;
  EccReport ecc;
};

namespace detail {

inline HillSeries advisory_hill_series(std::span<const double> norms, std::size_t k_max) {
  const std::size_t n = norms.size();
  if (n < 3) {
    return {};
  }
  if (k_max == 0) {
    k_max = std::max<std::size_t>(2, n / 2);
  }
  k_max = std::min(k_max, n - 1);
  try {
    return hill_series(norms, k_max);
  } catch (const error &) {
    // Hill plots only inform a visual check; a flat or non-positive tail
    // leaves the plot empty rather than stopping the estimate.
    return {};
  }
}

} // namespace detail

/*
 * The four-step estimate of the extremal correlation between two curve
 * samples:
 *   1. optionally center both margins and attach Hill plots of the norms;
 *   2. fit marginal tail indexes with the chosen k-selection rule;
 *   3. if they differ by more than tau, power-transform both margins to
 *      alpha_target;
 *   4. choose k on R_i = ||X_i|| v ||Y_i|| and evaluate the estimators.
 */
inline PipelineReport estimate_pipeline(const PairedSample &pairs,
                                        const PipelineOptions &options = {}) {
  if (!(options.alpha_target > 0.0)) {
    throw error(error_kind::domain, "estimate_pipeline", "alpha_target must be positive");
  }
  if (!(options.tau >= 0.0)) {
    throw error(error_kind::domain, "estimate_pipeline", "tau must be nonnegative");
  }
  PipelineReport report;
  report.n = pairs.size();
  report.grid_size = pairs.grid_size();
  report.centered = options.center;

  FunctionalSample x = options.center ? center(pairs.x()) : pairs.x();
  FunctionalSample y = options.center ? center(pairs.y()) : pairs.y();

  const auto norms_x = norms(x);
  const auto norms_y = norms(y);
  report.hill_x = detail::advisory_hill_series(norms_x, options.hill_k_max);
  report.hill_y = detail::advisory_hill_series(norms_y, options.hill_k_max);

  report.tail_x = select_k(norms_x, options.k_selection);
  report.tail_y = select_k(norms_y, options.k_selection);

  if (std::abs(report.tail_x.alpha_hat - report.tail_y.alpha_hat) > options.tau) {
    x = power_transform(x, report.tail_x.alpha_hat, options.alpha_target);
    y = power_transform(y, report.tail_y.alpha_hat, options.alpha_target);
    report.transform = {true, report.tail_x.alpha_hat, report.tail_y.alpha_hat,
                        options.alpha_target};
  }

  const PairStatistics stats = pair_statistics(PairedSample(std::move(x), std::move(y)));
  report.radius_fit = select_k(stats.radius, options.k_selection);
  report.ecc = extremal_correlation(stats, report.radius_fit.k);
  return report;
}

/// Symmetric m x m matrix of pipeline rho estimates; unit diagonal.
struct PairwiseMatrix {
  std::size_t m = 0;
  std::vector<double> rho;       // row-major
  std::vector<std::size_t> k;    // selected k per entry, 0 on the diagonal

  double at(std::size_t a, std::size_t b) const { return rho[a * m + b]; }
  std::size_t k_at(std::size_t a, std::size_t b) const { return k[a * m + b]; }
};

inline PairwiseMatrix pairwise_matrix(std::span<const FunctionalSample> samples,
                                      const PipelineOptions &options = {}) {
  const std::size_t m = samples.size();
  if (m < 2) {
    throw error(error_kind::shape, "pairwise_matrix", "need at least two samples");
  }
  for (std::size_t a = 1; a < m; ++a) {
    if (samples[a].size() != samples[0].size() ||
        samples[a].grid_size() != samples[0].grid_size()) {
      throw error(error_kind::grid_mismatch, "pairwise_matrix",
                  "sample " + std::to_string(a + 1) + " does not match the shape of sample 1");
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      jobs.emplace_back(a, b);
    }
  }
  PairwiseMatrix out{m, std::vector<double>(m * m, 1.0), std::vector<std::size_t>(m * m, 0)};
  parallel_for(jobs.size(), options.threads, [&](std::size_t j) {
    const auto [a, b] = jobs[j];
    const auto report = estimate_pipeline(PairedSample(samples[a], samples[b]), options);
    out.rho[a * m + b] = out.rho[b * m + a] = report.ecc.rho_xy;
    out.k[a * m + b] = out.k[b * m + a] = report.ecc.k;
  });
  return out;
}

} // namespace ecc

#endif // ECC_PIPELINE_HPP_
