#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ecc/curves.hpp"
#include "test_support.hpp"

namespace ecc {
namespace {

using testing::random_sample;
using testing::scalar_pairs;

TEST(InnerProduct, ConstantCurves) {
  EXPECT_DOUBLE_EQ(inner_product(Curve({1, 1}), Curve({2, 2})), 2.0);
}

TEST(InnerProduct, Orthogonal) {
  EXPECT_DOUBLE_EQ(inner_product(Curve({1, -1}), Curve({1, 1})), 0.0);
}

TEST(InnerProduct, HandSum) {
  EXPECT_DOUBLE_EQ(inner_product(Curve({3, 4}), Curve({3, 4})), 12.5);
}

TEST(InnerProduct, GridMismatchIsRejected) {
  try {
    inner_product(Curve({1, 2}), Curve({1, 2, 3}));
    FAIL() << "expected grid mismatch";
  } catch (const error &e) {
    EXPECT_EQ(e.kind(), error_kind::grid_mismatch);
    EXPECT_EQ(e.operation(), "inner_product");
  }
}

TEST(Norm, ZeroCurve) {
  EXPECT_EQ(norm(Curve::zero(7)), 0.0);
  EXPECT_EQ(norm(Curve::zero(1)), 0.0);
}

TEST(Norm, HandComputation) { EXPECT_NEAR(norm(Curve({3, 4})), 3.5355339059327378, 1e-12); }

TEST(Norm, FirstSineBasisIsNearlyUnit) {
  // sqrt(2) sin(pi t / 2) on t = j/100; the Riemann sum of 2 sin^2 is ~1.
  std::vector<double> v(100);
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = std::numbers::sqrt2 * std::sin(0.5 * std::numbers::pi * (j + 1) / 100.0);
  }
  EXPECT_NEAR(norm(Curve(v)), 1.0, 0.02);
}

TEST(Curve, RejectsNonFiniteAndEmpty) {
  EXPECT_THROW(Curve(std::vector<double>{}), error);
  EXPECT_THROW(Curve({1.0, std::nan("")}), error);
  EXPECT_THROW(Curve({INFINITY}), error);
}

TEST(FunctionalSample, RejectsMixedGrids) {
  EXPECT_THROW(FunctionalSample({Curve({1, 2}), Curve({1})}), error);
  EXPECT_THROW(FunctionalSample(std::vector<Curve>{}), error);
}

TEST(PairedSample, RejectsMisalignedMargins) {
  const FunctionalSample two({Curve({1, 2}), Curve({3, 4})});
  const FunctionalSample one({Curve({1, 2})});
  const FunctionalSample wide({Curve({1, 2, 3}), Curve({3, 4, 5})});
  EXPECT_THROW(PairedSample(two, one), error);
  EXPECT_THROW(PairedSample(two, wide), error);
}

TEST(Center, TwoCurves) {
  const auto c = center(FunctionalSample({Curve({0, 0}), Curve({2, 2})}));
  EXPECT_EQ(c[0], Curve({-1, -1}));
  EXPECT_EQ(c[1], Curve({1, 1}));
}

TEST(Center, SingleCurveBecomesZero) {
  const auto c = center(FunctionalSample({Curve({5, -3, 2})}));
  EXPECT_EQ(c[0], Curve::zero(3));
}

TEST(Center, HandMean) {
  const auto c = center(FunctionalSample({Curve({1, 2}), Curve({3, 4}), Curve({5, 6})}));
  EXPECT_EQ(c[0], Curve({-2, -2}));
  EXPECT_EQ(c[1], Curve({0, 0}));
  EXPECT_EQ(c[2], Curve({2, 2}));
}

TEST(PairRadii, MaxOfNorms) {
  const PairedSample p(FunctionalSample({Curve({3, 3})}), FunctionalSample({Curve({1, -1})}));
  EXPECT_DOUBLE_EQ(pair_radii(p)[0], 3.0);
}

TEST(PairRadii, ZeroFirstMargin) {
  const PairedSample p(FunctionalSample({Curve::zero(2)}), FunctionalSample({Curve({2, -2})}));
  EXPECT_DOUBLE_EQ(pair_radii(p)[0], 2.0);
}

TEST(PairRadii, ScalarPairs) {
  const auto r = pair_radii(scalar_pairs({{3, 3}, {1, -1}, {0.5, 0.5}}));
  EXPECT_EQ(r, (std::vector<double>{3, 1, 0.5}));
}

class CurveProperties : public ::testing::TestWithParam<int> {};

TEST_P(CurveProperties, InnerProductAxioms) {
  std::mt19937_64 gen(static_cast<std::uint64_t>(GetParam()));
  std::uniform_int_distribution<std::size_t> grid_dist(1, 64);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t grid = grid_dist(gen);
    const auto s = random_sample(gen, 2, grid);
    const Curve &x = s[0];
    const Curve &y = s[1];
    EXPECT_EQ(inner_product(x, y), inner_product(y, x));
    const double nx = norm(x);
    EXPECT_NEAR(nx * nx, inner_product(x, x), 1e-12 * inner_product(x, x));
    EXPECT_LE(std::abs(inner_product(x, y)), nx * norm(y) * (1 + 1e-12));
  }
}

TEST_P(CurveProperties, CenteringIsIdempotent) {
  std::mt19937_64 gen(static_cast<std::uint64_t>(GetParam()) + 100);
  const auto once = center(random_sample(gen, 25, 17));
  const auto twice = center(once);
  for (std::size_t i = 0; i < once.size(); ++i) {
    for (std::size_t j = 0; j < once.grid_size(); ++j) {
      EXPECT_NEAR(once[i][j], twice[i][j], 1e-12);
    }
  }
  for (std::size_t j = 0; j < once.grid_size(); ++j) {
    double mean = 0;
    for (const auto &c : once) {
      mean += c[j];
    }
    EXPECT_NEAR(mean / once.size(), 0.0, 1e-12);
  }
}

TEST_P(CurveProperties, RadiiScaleWithCurves) {
  std::mt19937_64 gen(static_cast<std::uint64_t>(GetParam()) + 200);
  const auto x = random_sample(gen, 30, 9);
  const auto y = random_sample(gen, 30, 9);
  const double c = 2.75;
  std::vector<Curve> cx, cy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cx.push_back(x[i].scaled(c));
    cy.push_back(y[i].scaled(c));
  }
  const auto base = pair_radii(PairedSample(x, y));
  const auto scaled =
      pair_radii(PairedSample(FunctionalSample(cx), FunctionalSample(cy)));
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_NEAR(scaled[i], c * base[i], 1e-12 * c * base[i]);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, CurveProperties, ::testing::Range(1, 6));

} // namespace
} // namespace ecc
