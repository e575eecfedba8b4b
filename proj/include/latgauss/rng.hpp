#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace latgauss {

/// Deterministic random source used by every stochastic component.
///
/// mt19937_64 output is fixed by the standard, and all derived draws
/// (uniform doubles, Gaussians) are computed here rather than through
/// std::*_distribution, whose algorithms differ between standard
/// libraries. A given seed therefore produces the same stream on every
/// platform this project builds on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Modulo bias is below 2^-50 for n <= 2^13.
  std::uint64_t below(std::uint64_t n) {
    assert(n > 0);
    return eng_() % n;
  }

  /// One N(0, sigma^2) draw via Box-Muller (cosine branch).
  double gaussian(double sigma) {
    double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    double u2 = uniform01();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  bool operator==(const Rng& other) const { return eng_ == other.eng_; }

 private:
  std::mt19937_64 eng_;
};

/// Inverse-CDF sampler for the discrete Gaussian on Z with parameter
/// sigma, mass proportional to exp(-x^2 / (2 sigma^2)). Support is
/// truncated at +/- ceil(12 sigma); the discarded tail mass is below
/// 1e-31 for any sigma >= 1 and shrinks further for smaller sigma.
class DiscreteGaussianTable {
 public:
  explicit DiscreteGaussianTable(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (sigma > 1e6)
      throw std::invalid_argument("sigma too large for a tabulated CDF");
    radius_ = static_cast<long long>(std::ceil(12.0 * sigma));
    const double inv = 1.0 / (2.0 * sigma * sigma);
    cdf_.reserve(static_cast<std::size_t>(2 * radius_ + 1));
    double total = 0.0;
    for (long long x = -radius_; x <= radius_; ++x) {
      total += std::exp(-static_cast<double>(x) * static_cast<double>(x) * inv);
      cdf_.push_back(total);
    }
    for (double& c : cdf_) c /= total;
  }

  long long sample(Rng& rng) const {
    const double u = rng.uniform01();
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cdf_[mid] <= u)
        lo = mid + 1;
      else
        hi = mid;
    }
    return static_cast<long long>(lo) - radius_;
  }

  long long radius() const { return radius_; }

 private:
  long long radius_;
  std::vector<double> cdf_;
};

}  // namespace latgauss
