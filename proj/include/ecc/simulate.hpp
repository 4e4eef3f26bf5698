#ifndef ECC_SIMULATE_HPP_
#define ECC_SIMULATE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "ecc/curves.hpp"
#include "ecc/error.hpp"
#include "ecc/estimators.hpp"
#include "ecc/parallel.hpp"
#include "ecc/pipeline.hpp"

namespace ecc {

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// splitmix64 finalizer; used to derive well-separated stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) noexcept {
  return mix64(mix64(mix64(mix64(master) ^ a) ^ b) ^ c);
}

/// One reproducible random stream. Bit-identical for a given seed within a build.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal(double variance) {
    return std::sqrt(variance) * standard_normal_(engine_);
  }

  bool bernoulli(double p) { return uniform() < p; }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> standard_normal_{0.0, 1.0};
};

// ---------------------------------------------------------------------------
// Building blocks
// ---------------------------------------------------------------------------

/// phi_j(t) = sqrt(2) sin((j - 1/2) pi t) sampled at t = 1/J, ..., J/J.
inline Curve basis(std::size_t j, std::size_t grid_size) {
  if (j < 1 || grid_size < 2) {
    throw error(error_kind::range, "basis", "need j >= 1 and J >= 2");
  }
  std::vector<double> v(grid_size);
  const double freq = (static_cast<double>(j) - 0.5) * std::numbers::pi;
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double t = static_cast<double>(g + 1) / static_cast<double>(grid_size);
    v[g] = std::numbers::sqrt2 * std::sin(freq * t);
  }
  return Curve(std::move(v));
}

/// Inverse-transform draw with P(|Z| > z) = z^-alpha on [1, inf) and a fair sign.
inline double draw_symmetric_pareto(double alpha, double u, double s) {
  if (!(alpha > 0.0)) {
    throw error(error_kind::domain, "draw_symmetric_pareto", "alpha must be positive");
  }
  if (!(u > 0.0 && u <= 1.0)) {
    throw error(error_kind::domain, "draw_symmetric_pareto", "u must lie in (0, 1]");
  }
  if (!(s >= 0.0 && s < 1.0)) {
    throw error(error_kind::domain, "draw_symmetric_pareto", "s must lie in [0, 1)");
  }
  const double magnitude = std::pow(u, -1.0 / alpha);
  return s < 0.5 ? magnitude : -magnitude;
}

/// Delays every curve by delta with zero fill: out(j) = 0 for j <= round(delta J).
inline Curve phase_shift(const Curve &c, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw error(error_kind::domain, "phase_shift", "delta must lie in [0, 1)");
  }
  const std::size_t grid = c.grid_size();
  const auto shift =
      static_cast<std::size_t>(std::llround(delta * static_cast<double>(grid)));
  std::vector<double> v(grid, 0.0);
  for (std::size_t g = shift; g < grid; ++g) {
    v[g] = c[g - shift];
  }
  return Curve(std::move(v));
}

inline FunctionalSample phase_shift(const FunctionalSample &s, double delta) {
  std::vector<Curve> out;
  out.reserve(s.size());
  for (const Curve &c : s) {
    out.push_back(phase_shift(c, delta));
  }
  return FunctionalSample(std::move(out));
}

// ---------------------------------------------------------------------------
// Closed-form extremal correlations
// ---------------------------------------------------------------------------

/// rho_XY = rho / (rho^2 + (1 - rho^2)^(alpha/2))^(1/2) for the three-component model.
inline double oracle_rho(double rho, double alpha) {
  if (!(std::abs(rho) <= 1.0) || !(alpha > 2.0)) {
    throw error(error_kind::domain, "oracle_rho", "need |rho| <= 1 and alpha > 2");
  }
  const double r2 = rho * rho;
  return rho / std::sqrt(r2 + std::pow(1.0 - r2, alpha / 2.0));
}

/// Solves oracle_rho(rho, alpha) = target by bisection on [0, 1].
inline double invert_oracle(double target, double alpha) {
  if (!(std::abs(target) <= 1.0) || !(alpha > 2.0)) {
    throw error(error_kind::domain, "invert_oracle", "need |target| <= 1 and alpha > 2");
  }
  const double goal = std::abs(target);
  if (goal == 0.0 || goal == 1.0) {
    return target;
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 0x1.0p-52; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (oracle_rho(mid, alpha) < goal) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double rho = 0.5 * (lo + hi);
  return target < 0.0 ? -rho : rho;
}

/// rho_XY = sqrt(p_A p_B) for the randomly gated two-component model.
inline double oracle_rho_bernoulli(double p_a, double p_b) {
  if (!(p_a >= 0.0 && p_a <= 1.0) || !(p_b >= 0.0 && p_b <= 1.0)) {
    throw error(error_kind::domain, "oracle_rho_bernoulli", "probabilities must lie in [0, 1]");
  }
  return std::sqrt(p_a * p_b);
}

// ---------------------------------------------------------------------------
// Data-generating processes
// ---------------------------------------------------------------------------

/// X = Z1 phi1 + N1 phi2 + N2 phi3,  Y = rho Z1 phi1 + (1 - rho^2)^(1/2) Z2 phi2 + N3 phi3.
struct BaseDgp {};

/// X = sum_{i=1,2} phi_i (Z_i A_i + N_i (1 - A_i)), Y likewise with gates B_i.
struct BernoulliDgp {
  double p_a = 0.5;
  double p_b = 0.5;
};

/// Base model with the Y basis functions delayed by delta (zero before delta).
struct PhaseShiftDgp {
  double delta = 0.3;
};

/// X = Z1 phi1 + N1 phi2,  Y = Z1 phi2 + N2 phi1: simultaneous extremes, orthogonal shapes.
struct SharedScoreDgp {};

using DgpVariant = std::variant<BaseDgp, BernoulliDgp, PhaseShiftDgp, SharedScoreDgp>;

struct DgpConfig {
  double rho = 0.0;
  double alpha = 3.0;
  std::size_t n = 100;
  std::size_t grid_size = 100;
  std::uint64_t seed = 0;
  double noise_variance = 0.25;
  DgpVariant variant = BaseDgp{};
};

inline void validate(const DgpConfig &cfg) {
  constexpr const char *op = "generate_paired";
  if (!(std::abs(cfg.rho) <= 1.0)) {
    throw error(error_kind::domain, op, "|rho| must not exceed 1");
  }
  if (!(cfg.alpha > 2.0)) {
    throw error(error_kind::domain, op, "alpha must exceed 2");
  }
  if (cfg.n < 1 || cfg.grid_size < 2) {
    throw error(error_kind::range, op, "need n >= 1 and J >= 2");
  }
  if (!(cfg.noise_variance >= 0.0)) {
    throw error(error_kind::domain, op, "noise variance must be nonnegative");
  }
  if (const auto *b = std::get_if<BernoulliDgp>(&cfg.variant)) {
    if (!(b->p_a >= 0.0 && b->p_a <= 1.0 && b->p_b >= 0.0 && b->p_b <= 1.0)) {
      throw error(error_kind::domain, op, "gate probabilities must lie in [0, 1]");
    }
  }
  if (const auto *p = std::get_if<PhaseShiftDgp>(&cfg.variant)) {
    if (!(p->delta >= 0.0 && p->delta < 1.0)) {
      throw error(error_kind::domain, op, "delta must lie in [0, 1)");
    }
  }
}

/// Closed-form rho_XY of a configuration (phase-shifted data reports its unshifted value).
inline double oracle_for(const DgpConfig &cfg) {
  return std::visit(
      [&](const auto &v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, BernoulliDgp>) {
          return oracle_rho_bernoulli(v.p_a, v.p_b);
        } else if constexpr (std::is_same_v<V, SharedScoreDgp>) {
          return 0.0;
        } else {
          return oracle_rho(cfg.rho, cfg.alpha);
        }
      },
      cfg.variant);
}

namespace detail {

inline void add_scaled(std::vector<double> &acc, const Curve &phi, double w) {
  const auto v = phi.values();
  for (std::size_t g = 0; g < acc.size(); ++g) {
    acc[g] += w * v[g];
  }
}

} // namespace detail

/// n paired curves on grid J, fully determined by cfg.seed.
inline PairedSample generate_paired(const DgpConfig &cfg) {
  validate(cfg);
  const std::size_t grid = cfg.grid_size;
  const Curve phi1 = basis(1, grid);
  const Curve phi2 = basis(2, grid);
  const Curve phi3 = basis(3, grid);
  RandomStream rng(cfg.seed);
  auto pareto = [&] {
    const double u = 1.0 - rng.uniform();
    const double s = rng.uniform();
    return draw_symmetric_pareto(cfg.alpha, u, s);
  };
  auto noise = [&] { return rng.normal(cfg.noise_variance); };

  std::vector<Curve> xs, ys;
  xs.reserve(cfg.n);
  ys.reserve(cfg.n);
  std::visit(
      [&](const auto &variant) {
        using V = std::decay_t<decltype(variant)>;
        const bool shifted = std::is_same_v<V, PhaseShiftDgp>;
        double delta = 0.0;
        if constexpr (std::is_same_v<V, PhaseShiftDgp>) {
          delta = variant.delta;
        }
        const Curve y1 = shifted ? phase_shift(phi1, delta) : phi1;
        const Curve y2 = shifted ? phase_shift(phi2, delta) : phi2;
        const Curve y3 = shifted ? phase_shift(phi3, delta) : phi3;
        const double rho = cfg.rho;
        const double orth = std::sqrt(std::max(0.0, 1.0 - rho * rho));

        for (std::size_t i = 0; i < cfg.n; ++i) {
          std::vector<double> x(grid, 0.0), y(grid, 0.0);
          if constexpr (std::is_same_v<V, BernoulliDgp>) {
            const double z1 = pareto(), z2 = pareto();
            const double n1 = noise(), n2 = noise();
            const bool a1 = rng.bernoulli(variant.p_a), a2 = rng.bernoulli(variant.p_a);
            const bool b1 = rng.bernoulli(variant.p_b), b2 = rng.bernoulli(variant.p_b);
            detail::add_scaled(x, phi1, a1 ? z1 : n1);
            detail::add_scaled(x, phi2, a2 ? z2 : n2);
            detail::add_scaled(y, phi1, b1 ? z1 : n1);
            detail::add_scaled(y, phi2, b2 ? z2 : n2);
          } else if constexpr (std::is_same_v<V, SharedScoreDgp>) {
            const double z1 = pareto();
            const double n1 = noise(), n2 = noise();
            detail::add_scaled(x, phi1, z1);
            detail::add_scaled(x, phi2, n1);
            detail::add_scaled(y, phi2, z1);
            detail::add_scaled(y, phi1, n2);
          } else {
            const double z1 = pareto(), z2 = pareto();
            const double n1 = noise(), n2 = noise(), n3 = noise();
            detail::add_scaled(x, phi1, z1);
            detail::add_scaled(x, phi2, n1);
            detail::add_scaled(x, phi3, n2);
            detail::add_scaled(y, y1, rho * z1);
            detail::add_scaled(y, y2, orth * z2);
            detail::add_scaled(y, y3, n3);
          }
          xs.emplace_back(std::move(x));
          ys.emplace_back(std::move(y));
        }
      },
      cfg.variant);
  return PairedSample(FunctionalSample(std::move(xs)), FunctionalSample(std::move(ys)));
}

/*
 * Nine-component illustration: X = sum_{j=1..9} Z_j phi_j where component
 * `heavy` (1, 2 or 3) is Pareto(alpha) and the others are N(0, noise_variance).
 * The angular measure of X concentrates on phi_heavy.
 */
inline FunctionalSample generate_nine_component(std::size_t heavy, double alpha, std::size_t n,
                                                std::size_t grid_size, std::uint64_t seed,
                                                double noise_variance = 0.5) {
  if (heavy < 1 || heavy > 9 || n < 1 || !(alpha > 0.0)) {
    throw error(error_kind::range, "generate_nine_component", "invalid configuration");
  }
  std::vector<Curve> phis;
  for (std::size_t j = 1; j <= 9; ++j) {
    phis.push_back(basis(j, grid_size));
  }
  RandomStream rng(seed);
  std::vector<Curve> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(grid_size, 0.0);
    for (std::size_t j = 1; j <= 9; ++j) {
      const double w = j == heavy ? std::pow(1.0 - rng.uniform(), -1.0 / alpha)
                                  : rng.normal(noise_variance);
      detail::add_scaled(x, phis[j - 1], w);
    }
    out.emplace_back(std::move(x));
  }
  return FunctionalSample(std::move(out));
}

// ---------------------------------------------------------------------------
// Monte Carlo bias experiment
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::vector<double> targets;            // rho_XY values
  double alpha = 3.0;
  std::vector<std::size_t> sample_sizes;  // n values
  std::size_t reps = 1000;
  KSelection k_selection;
  std::uint64_t seed = 0;
  std::size_t grid_size = 100;
  double noise_variance = 0.25;
  DgpVariant variant = BaseDgp{};
  unsigned threads = 1;
};

struct ExperimentRow {
  double target = 0.0;
  double alpha = 0.0;
  std::size_t n = 0;
  double rho = 0.0;  // generating parameter
  double mean = 0.0;
  double abs_bias = 0.0;
  double standard_error = 0.0;
  std::size_t replications = 0;
  std::size_t failed = 0;
  double mean_k = 0.0;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;
};

/// One replication: simulate, choose k on the radii and estimate rho directly
/// (margins are tail-equivalent by construction, so no marginal fit or transform).
struct ReplicationResult {
  bool ok = false;
  double rho_hat = 0.0;
  std::size_t k = 0;
};

inline ReplicationResult run_replication(const DgpConfig &cfg, const KSelection &selection) {
  ReplicationResult r;
  try {
    const PairStatistics stats = pair_statistics(generate_paired(cfg));
    const TailFit fit = select_k(stats.radius, selection);
    r.rho_hat = extremal_correlation(stats, fit.k).rho_xy;
    r.k = fit.k;
    r.ok = true;
  } catch (const error &e) {
    if (e.kind() != error_kind::degenerate_sample && e.kind() != error_kind::degenerate_tail) {
      throw;
    }
  }
  return r;
}

inline ExperimentTable bias_experiment(const ExperimentConfig &cfg) {
  if (cfg.reps < 1) {
    throw error(error_kind::range, "bias_experiment", "reps must be at least 1");
  }
  if (!(cfg.alpha > 2.0)) {
    throw error(error_kind::domain, "bias_experiment", "alpha must exceed 2");
  }
  std::vector<double> targets = cfg.targets;
  if (const auto *b = std::get_if<BernoulliDgp>(&cfg.variant)) {
    targets = {oracle_rho_bernoulli(b->p_a, b->p_b)};
  } else if (std::holds_alternative<SharedScoreDgp>(cfg.variant)) {
    targets = {0.0};
  }
  if (targets.empty() || cfg.sample_sizes.empty()) {
    throw error(error_kind::empty_input, "bias_experiment", "no targets or sample sizes");
  }

  struct Cell {
    double target;
    std::size_t n;
    DgpConfig dgp;
  };
  std::vector<Cell> cells;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const bool gated = std::holds_alternative<BernoulliDgp>(cfg.variant) ||
                       std::holds_alternative<SharedScoreDgp>(cfg.variant);
    const double rho = gated ? 0.0 : invert_oracle(targets[t], cfg.alpha);
    for (std::size_t s = 0; s < cfg.sample_sizes.size(); ++s) {
      DgpConfig dgp;
      dgp.rho = rho;
      dgp.alpha = cfg.alpha;
      dgp.n = cfg.sample_sizes[s];
      dgp.grid_size = cfg.grid_size;
      dgp.noise_variance = cfg.noise_variance;
      dgp.variant = cfg.variant;
      validate(dgp);
      cells.push_back({targets[t], cfg.sample_sizes[s], dgp});
    }
  }

  const std::size_t total = cells.size() * cfg.reps;
  std::vector<ReplicationResult> results(total);
  parallel_for(total, cfg.threads, [&](std::size_t job) {
    const std::size_t c = job / cfg.reps;
    const std::size_t rep = job % cfg.reps;
    DgpConfig dgp = cells[c].dgp;
    dgp.seed = stream_seed(cfg.seed, c, rep);
    results[job] = run_replication(dgp, cfg.k_selection);
  });

  ExperimentTable table;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    ExperimentRow row;
    row.target = cells[c].target;
    row.alpha = cfg.alpha;
    row.n = cells[c].n;
    row.rho = cells[c].dgp.rho;
    detail::compensated_sum sum, ksum;
    std::size_t ok = 0;
    for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
      const auto &r = results[c * cfg.reps + rep];
      if (r.ok) {
        sum.add(r.rho_hat);
        ksum.add(static_cast<double>(r.k));
        ++ok;
      }
    }
    row.replications = ok;
    row.failed = cfg.reps - ok;
    if (ok > 0) {
      row.mean = sum.value() / static_cast<double>(ok);
      row.mean_k = ksum.value() / static_cast<double>(ok);
      row.abs_bias = std::abs(row.mean - row.target);
      if (ok > 1) {
        detail::compensated_sum sq;
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
          const auto &r = results[c * cfg.reps + rep];
          if (r.ok) {
            const double d = r.rho_hat - row.mean;
            sq.add(d * d);
          }
        }
        row.standard_error = std::sqrt(sq.value() / static_cast<double>(ok - 1));
      }
    } else {
      row.mean = row.abs_bias = row.mean_k = std::nan("");
    }
    table.rows.push_back(row);
  }
  return table;
}

} // namespace ecc

#endif // ECC_SIMULATE_HPP_
