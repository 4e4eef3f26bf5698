#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ecc/tail.hpp"

namespace ecc {
namespace {

std::vector<double> pareto_draws(std::mt19937_64 &gen, std::size_t n, double alpha) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(n);
  for (auto &v : out) {
    v = std::pow(1.0 - unif(gen), -1.0 / alpha);
  }
  return out;
}

TEST(Hill, PowersOfTwo) {
  const std::vector<double> v{8, 4, 2, 1};
  EXPECT_NEAR(hill(v, 3).alpha_hat, 1.0 / (2.0 * std::numbers::ln2), 1e-12);
  EXPECT_EQ(hill(v, 3).threshold, 1.0);
  EXPECT_EQ(hill(v, 3).k, 3u);
}

TEST(Hill, PowersOfE) {
  const std::vector<double> v{std::exp(3.0), std::exp(2.0), std::exp(1.0), 1.0};
  EXPECT_NEAR(hill(v, 3).alpha_hat, 0.5, 1e-12);
}

TEST(Hill, ScaledValuesGiveTheSameEstimate) {
  EXPECT_NEAR(hill(std::vector<double>{80, 40, 20, 10}, 3).alpha_hat,
              hill(std::vector<double>{8, 4, 2, 1}, 3).alpha_hat, 1e-15);
}

TEST(Hill, OrderOfInputIsIrrelevant) {
  EXPECT_EQ(hill(std::vector<double>{2, 8, 1, 4}, 3).alpha_hat,
            hill(std::vector<double>{8, 4, 2, 1}, 3).alpha_hat);
}

TEST(Hill, Errors) {
  const std::vector<double> v{8, 4, 2, 1};
  EXPECT_THROW(hill(v, 0), error);
  EXPECT_THROW(hill(v, 4), error);
  try {
    hill(std::vector<double>{8, 4, 0, 1}, 3);
    FAIL();
  } catch (const error &e) {
    EXPECT_EQ(e.kind(), error_kind::domain);
  }
  try {
    hill(std::vector<double>{5, 5, 5, 5}, 2);
    FAIL();
  } catch (const error &e) {
    EXPECT_EQ(e.kind(), error_kind::degenerate_tail);
  }
}

TEST(HillSeries, PerKEntries) {
  const std::vector<double> v{std::exp(3.0), std::exp(2.0), std::exp(1.0), 1.0};
  const auto s = hill_series(v, 3);
  ASSERT_EQ(s.entries.size(), 3u);
  // k = 1: log(e^3 / e^2) = 1; k = 2: (2 + 1) / 2; k = 3: 6 / 3
  EXPECT_NEAR(s.entries[0].alpha_hat, 1.0, 1e-12);
  EXPECT_NEAR(s.entries[1].alpha_hat, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.entries[2].alpha_hat, 0.5, 1e-12);
  for (const auto &e : s.entries) {
    const double half = 1.959963984540054 * e.alpha_hat / std::sqrt(double(e.k));
    EXPECT_NEAR(e.ci_low, e.alpha_hat - half, 1e-12);
    EXPECT_NEAR(e.ci_high, e.alpha_hat + half, 1e-12);
  }
}

TEST(HillSeries, ScaleInvariantColumn) {
  std::mt19937_64 gen(3);
  auto v = pareto_draws(gen, 200, 3.0);
  const auto base = hill_series(v, 100);
  for (auto &x : v) {
    x *= 10.0;
  }
  const auto scaled = hill_series(v, 100);
  for (std::size_t i = 0; i < base.entries.size(); ++i) {
    EXPECT_NEAR(scaled.entries[i].alpha_hat, base.entries[i].alpha_hat,
                1e-12 * base.entries[i].alpha_hat);
  }
}

TEST(HillSeries, RangeErrors) {
  const std::vector<double> v{8, 4, 2, 1};
  EXPECT_THROW(hill_series(v, 1), error);
  EXPECT_THROW(hill_series(v, 4), error);
}

class HillProperties : public ::testing::TestWithParam<int> {};

TEST_P(HillProperties, PowerOfTwoScalingIsExact) {
  std::mt19937_64 gen(static_cast<std::uint64_t>(GetParam()));
  const auto v = pareto_draws(gen, 300, 2.5);
  for (const double c : {0.25, 2.0, 1024.0}) {
    std::vector<double> scaled(v);
    for (auto &x : scaled) {
      x *= c;
    }
    for (const std::size_t k : {1u, 17u, 150u, 299u}) {
      EXPECT_EQ(hill(scaled, k).alpha_hat, hill(v, k).alpha_hat);
    }
  }
}

TEST_P(HillProperties, ArbitraryScalingWithinRounding) {
  std::mt19937_64 gen(static_cast<std::uint64_t>(GetParam()) + 50);
  const auto v = pareto_draws(gen, 300, 4.0);
  std::uniform_real_distribution<double> cdist(1e-3, 1e3);
  for (int t = 0; t < 10; ++t) {
    const double c = cdist(gen);
    std::vector<double> scaled(v);
    for (auto &x : scaled) {
      x *= c;
    }
    const double a = hill(v, 40).alpha_hat;
    EXPECT_NEAR(hill(scaled, 40).alpha_hat, a, 1e-12 * a);
  }
}

TEST_P(HillProperties, GeometricClosedForm) {
  std::mt19937_64 gen(static_cast<std::uint64_t>(GetParam()) + 90);
  std::uniform_real_distribution<double> rdist(1.05, 6.0);
  std::uniform_int_distribution<std::size_t> kdist(1, 60);
  for (int t = 0; t < 20; ++t) {
    const double r = rdist(gen);
    const std::size_t k = kdist(gen);
    std::vector<double> v;
    for (std::size_t i = 0; i <= k; ++i) {
      v.push_back(std::pow(r, static_cast<double>(k - i)));
    }
    // log-excesses are k ln r, (k-1) ln r, ..., ln r
    const double expected = 2.0 / (double(k + 1) * std::log(r));
    EXPECT_NEAR(hill(v, k).alpha_hat, expected, 1e-10 * expected);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, HillProperties, ::testing::Range(1, 6));

TEST(Hill, ConsistentOnLargeParetoSamples) {
  std::mt19937_64 gen(20240501);
  for (int rep = 0; rep < 20; ++rep) {
    const auto v = pareto_draws(gen, 100000, 3.0);
    EXPECT_NEAR(hill(v, 10000).alpha_hat, 3.0, 0.1) << "replication " << rep;
  }
}

// Independent evaluation of the quantile sup-distance over a window.
double mindist_distance(std::vector<double> desc, std::size_t k, std::size_t window) {
  double s = 0;
  for (std::size_t i = 0; i < k; ++i) {
    s += std::log(desc[i]) - std::log(desc[k]);
  }
  const double gamma = s / double(k);
  double d = 0;
  for (std::size_t j = 1; j <= window; ++j) {
    d = std::max(d, std::abs(desc[j - 1] - desc[k] * std::pow(double(k) / double(j), gamma)));
  }
  return d;
}

std::size_t mindist_oracle(std::vector<double> v, std::size_t k_min, std::size_t k_max,
                           std::size_t window) {
  std::sort(v.begin(), v.end(), std::greater<>());
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = k_min; k <= k_max; ++k) {
    const double d = mindist_distance(v, k, window);
    if (best == 0 || d < best_d - 1e-12 * std::max(1.0, best_d)) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

TEST(SelectKMindist, MatchesBruteForceOnGeometricTail) {
  // Top 21 values follow V_(k+1) (k/i)^(1/2) for k* = 20, the rest shrink fast.
  const std::size_t n = 200;
  const std::size_t k_star = 20;
  std::vector<double> v;
  for (std::size_t i = 1; i <= k_star + 1; ++i) {
    v.push_back(10.0 * std::sqrt(double(k_star) / double(i)));
  }
  while (v.size() < n) {
    v.push_back(v.back() * 0.97);
  }
  const auto fit = select_k_mindist(v);
  const std::size_t window = 30;
  EXPECT_EQ(fit.k, mindist_oracle(v, 2, window - 1, window));
  EXPECT_NEAR(fit.distance, mindist_distance(std::vector<double>(v), fit.k, window),
              1e-9);
}

TEST(SelectKMindist, MatchesBruteForceOnParetoSamples) {
  std::mt19937_64 gen(77);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 100 + 50 * static_cast<std::size_t>(t);
    const auto v = pareto_draws(gen, n, 3.0);
    const std::size_t window = n * 15 / 100;
    const auto fit = select_k_mindist(v);
    EXPECT_EQ(fit.k, mindist_oracle(v, 2, window - 1, window)) << "n = " << n;
    EXPECT_EQ(fit.method, k_method::mindist);
    EXPECT_GE(fit.k, 2u);
    EXPECT_LE(fit.k, window - 1);
  }
}

TEST(SelectKMindist, ExplicitRangeIsRespected) {
  std::mt19937_64 gen(5);
  const auto v = pareto_draws(gen, 500, 3.0);
  const auto fit = select_k_mindist(v, 40, 60);
  EXPECT_GE(fit.k, 40u);
  EXPECT_LE(fit.k, 60u);
}

TEST(SelectKMindist, Deterministic) {
  std::mt19937_64 gen(6);
  const auto v = pareto_draws(gen, 700, 3.0);
  const auto a = select_k_mindist(v);
  const auto b = select_k_mindist(v);
  EXPECT_EQ(a.k, b.k);
  EXPECT_EQ(a.alpha_hat, b.alpha_hat);
  EXPECT_EQ(a.distance, b.distance);
}

TEST(SelectKMindist, TooFewValues) {
  const std::vector<double> v{10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
  try {
    select_k_mindist(v);
    FAIL();
  } catch (const error &e) {
    EXPECT_EQ(e.kind(), error_kind::range);
  }
}

TEST(SelectKMindist, FlatTailIsDegenerate) {
  const std::vector<double> v(100, 2.0);
  try {
    select_k_mindist(v);
    FAIL();
  } catch (const error &e) {
    EXPECT_EQ(e.kind(), error_kind::degenerate_tail);
  }
}

// Direct O(m^2) KS distance from the empirical CDF of the exceedances.
double ks_distance(const std::vector<double> &exc, double x_min, double a) {
  double d = 0;
  const double m = double(exc.size());
  for (const double x : exc) {
    double below = 0, at_or_below = 0;
    for (const double y : exc) {
      below += y < x;
      at_or_below += y <= x;
    }
    const double f = 1.0 - std::pow(x / x_min, 1.0 - a);
    d = std::max({d, std::abs(f - below / m), std::abs(at_or_below / m - f)});
  }
  return d;
}

TEST(SelectKKs, ExactParetoQuantilesPickAGlobalFit) {
  const std::size_t n = 100;
  std::vector<double> v;
  for (std::size_t i = 1; i <= n; ++i) {
    v.push_back(std::pow(double(i) / double(n), -1.0 / 3.0));
  }
  std::vector<double> asc(v);
  std::sort(asc.begin(), asc.end());
  double best_d = std::numeric_limits<double>::infinity();
  double best_x = 0;
  for (std::size_t s = 1; n - s >= 10; ++s) {
    std::vector<double> exc(asc.begin() + static_cast<std::ptrdiff_t>(s), asc.end());
    double logs = 0;
    for (const double x : exc) {
      logs += std::log(x / asc[s]);
    }
    const double a = 1.0 + double(exc.size()) / logs;
    const double d = ks_distance(exc, asc[s], a);
    if (d < best_d) {
      best_d = d;
      best_x = asc[s];
    }
  }
  const auto fit = select_k_ks(v);
  EXPECT_EQ(fit.threshold, best_x);
  EXPECT_NEAR(fit.distance, best_d, 1e-12);
  EXPECT_LE(fit.threshold, asc[n / 10]);
  EXPECT_EQ(fit.method, k_method::ks);
  EXPECT_NEAR(fit.alpha_hat, 3.0, 0.6);
}

TEST(SelectKKs, CandidateRangeAndDeterminism) {
  std::mt19937_64 gen(8);
  for (int t = 0; t < 10; ++t) {
    const auto v = pareto_draws(gen, 300, 3.0);
    const auto a = select_k_ks(v);
    const auto b = select_k_ks(v);
    EXPECT_GE(a.k, 10u);
    EXPECT_LE(a.k, v.size() - 1);
    EXPECT_EQ(a.k, b.k);
    EXPECT_EQ(a.alpha_hat, b.alpha_hat);
  }
}

TEST(SelectKKs, AllEqualIsDegenerate) {
  const std::vector<double> v(50, 3.0);
  try {
    select_k_ks(v);
    FAIL();
  } catch (const error &e) {
    EXPECT_EQ(e.kind(), error_kind::degenerate_tail);
  }
}

} // namespace
} // namespace ecc
