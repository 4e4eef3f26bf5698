#ifndef ECC_TESTS_TEST_SUPPORT_HPP_
#define ECC_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ecc/curves.hpp"

namespace ecc::testing {

inline Curve scalar(double v) { return Curve(std::vector<double>{v}); }

/// Paired sample of J = 1 curves from value pairs.
inline PairedSample scalar_pairs(const std::vector<std::pair<double, double>> &values) {
  std::vector<Curve> xs, ys;
  for (const auto &[x, y] : values) {
    xs.push_back(scalar(x));
    ys.push_back(scalar(y));
  }
  return PairedSample(FunctionalSample(xs), FunctionalSample(ys));
}

/// Random curves with heavy-tailed amplitudes, for property checks.
inline FunctionalSample random_sample(std::mt19937_64 &gen, std::size_t n, std::size_t grid) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::vector<Curve> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double amp = std::pow(unif(gen), -0.5);
    std::vector<double> v(grid);
    for (auto &x : v) {
      x = amp * normal(gen);
    }
    out.emplace_back(std::move(v));
  }
  return FunctionalSample(std::move(out));
}

} // namespace ecc::testing

#endif // ECC_TESTS_TEST_SUPPORT_HPP_
