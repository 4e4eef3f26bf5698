#ifndef ECC_CURVES_HPP_
#define ECC_CURVES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ecc/error.hpp"

namespace ecc {

namespace detail {

// Neumaier-compensated accumulator.
class compensated_sum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

template <typename F> double sum_over(std::size_t count, F &&term) {
  compensated_sum acc;
  for (std::size_t i = 0; i < count; ++i) {
    acc.add(term(i));
  }
  return acc.value();
}

} // namespace detail

/*
 * A real function sampled on the regular grid {j/J, j = 1..J} of [0,1].
 * The grid is implicit; only the J values are stored.
 */
class Curve {
public:
  Curve() = default;

  explicit Curve(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
      throw error(error_kind::shape, "Curve", "a curve needs at least one grid point");
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (!std::isfinite(values_[j])) {
        throw error(error_kind::domain, "Curve",
                    "non-finite value at grid point " + std::to_string(j + 1));
      }
    }
  }

  static Curve zero(std::size_t grid_size) {
    return Curve(std::vector<double>(grid_size, 0.0));
  }

  std::size_t grid_size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }

  Curve scaled(double factor) const {
    std::vector<double> out(values_);
    for (double &v : out) {
      v *= factor;
    }
    return Curve(std::move(out));
  }

  friend bool operator==(const Curve &, const Curve &) = default;

private:
  std::vector<double> values_;
};

/// n curves sharing one grid.
class FunctionalSample {
public:
  FunctionalSample() = default;

  explicit FunctionalSample(std::vector<Curve> curves) : curves_(std::move(curves)) {
    if (curves_.empty()) {
      throw error(error_kind::empty_input, "FunctionalSample", "a sample needs at least one curve");
    }
    const std::size_t grid = curves_.front().grid_size();
    for (std::size_t i = 1; i < curves_.size(); ++i) {
      if (curves_[i].grid_size() != grid) {
        throw error(error_kind::grid_mismatch, "FunctionalSample",
                    "curve " + std::to_string(i + 1) + " has " +
                        std::to_string(curves_[i].grid_size()) + " grid points, expected " +
                        std::to_string(grid));
      }
    }
  }

  std::size_t size() const noexcept { return curves_.size(); }
  std::size_t grid_size() const noexcept {
    return curves_.empty() ? 0 : curves_.front().grid_size();
  }
  const Curve &operator[](std::size_t i) const { return curves_[i]; }
  std::span<const Curve> curves() const noexcept { return curves_; }
  auto begin() const noexcept { return curves_.begin(); }
  auto end() const noexcept { return curves_.end(); }

  friend bool operator==(const FunctionalSample &, const FunctionalSample &) = default;

private:
  std::vector<Curve> curves_;
};

/// Index-aligned pairs (x_i, y_i) on a common grid.
class PairedSample {
public:
  PairedSample(FunctionalSample x, FunctionalSample y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size()) {
      throw error(error_kind::shape, "PairedSample",
                  "margins have " + std::to_string(x_.size()) + " and " +
                      std::to_string(y_.size()) + " curves");
    }
    if (x_.grid_size() != y_.grid_size()) {
      throw error(error_kind::grid_mismatch, "PairedSample",
                  "margins have grid sizes " + std::to_string(x_.grid_size()) + " and " +
                      std::to_string(y_.grid_size()));
    }
  }

  const FunctionalSample &x() const noexcept { return x_; }
  const FunctionalSample &y() const noexcept { return y_; }
  std::size_t size() const noexcept { return x_.size(); }
  std::size_t grid_size() const noexcept { return x_.grid_size(); }

  PairedSample swapped() const { return PairedSample(y_, x_); }

private:
  FunctionalSample x_;
  FunctionalSample y_;
};

/// <x, y> = (1/J) sum_j x(j/J) y(j/J)
inline double inner_product(const Curve &x, const Curve &y) {
  if (x.grid_size() != y.grid_size()) {
    throw error(error_kind::grid_mismatch, "inner_product",
                "curves have grid sizes " + std::to_string(x.grid_size()) + " and " +
                    std::to_string(y.grid_size()));
  }
  const auto a = x.values();
  const auto b = y.values();
  const double total = detail::sum_over(a.size(), [&](std::size_t j) { return a[j] * b[j]; });
  return total / static_cast<double>(a.size());
}

inline double norm(const Curve &x) { return std::sqrt(inner_product(x, x)); }

/// Subtracts the pointwise sample mean from every curve.
inline FunctionalSample center(const FunctionalSample &sample) {
  const std::size_t n = sample.size();
  const std::size_t grid = sample.grid_size();
  std::vector<double> mean(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    mean[j] = detail::sum_over(n, [&](std::size_t i) { return sample[i][j]; }) /
              static_cast<double>(n);
  }
  std::vector<Curve> out;
  out.reserve(n);
  for (const Curve &c : sample) {
    std::vector<double> v(grid);
    for (std::size_t j = 0; j < grid; ++j) {
      v[j] = c[j] - mean[j];
    }
    out.emplace_back(std::move(v));
  }
  return FunctionalSample(std::move(out));
}

inline std::vector<double> norms(const FunctionalSample &sample) {
  std::vector<double> out;
  out.reserve(sample.size());
  for (const Curve &c : sample) {
    out.push_back(norm(c));
  }
  return out;
}

/// R_i = max(||x_i||, ||y_i||)
inline std::vector<double> pair_radii(const PairedSample &pairs) {
  std::vector<double> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out[i] = std::max(norm(pairs.x()[i]), norm(pairs.y()[i]));
  }
  return out;
}

} // namespace ecc

#endif // ECC_CURVES_HPP_
