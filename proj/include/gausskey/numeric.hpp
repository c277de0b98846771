#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>

#include <boost/math/distributions/normal.hpp>

namespace gausskey::numeric {

inline constexpr double kLn2 = std::numbers::ln2;

/// Dense symmetric matrix of fixed (small) order, row-major.
template <std::size_t N>
using SymMatrix = std::array<std::array<double, N>, N>;

/// Residual variance of component `target` after linear regression on the
/// components listed in `given` (Schur complement). `given` may be empty.
template <std::size_t N>
double conditional_variance(const SymMatrix<N>& cov, std::size_t target,
                            std::span<const std::size_t> given) {
  const std::size_t k = given.size();
  if (k == 0) return cov[target][target];

  // Cholesky of the k x k block, then v^T A^{-1} v = |L^{-1} v|^2.
  std::array<std::array<double, N>, N> l{};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = cov[given[i]][given[j]];
      for (std::size_t m = 0; m < j; ++m) sum -= l[i][m] * l[j][m];
      if (i == j) {
        l[i][i] = std::sqrt(sum);
      } else {
        l[i][j] = sum / l[j][j];
      }
    }
  }
  std::array<double, N> w{};
  double quad = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double sum = cov[target][given[i]];
    for (std::size_t m = 0; m < i; ++m) sum -= l[i][m] * w[m];
    w[i] = sum / l[i][i];
    quad += w[i] * w[i];
  }
  return cov[target][target] - quad;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Standard normal quantile; returns +-infinity at the endpoints.
inline double normal_quantile(double p) {
  if (p <= 0.0) return -INFINITY;
  if (p >= 1.0) return INFINITY;
  static const boost::math::normal_distribution<double> standard{};
  return boost::math::quantile(standard, p);
}

/// log of the N(mean, var) density at v.
inline double log_normal_pdf(double v, double mean, double var) {
  const double d = v - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

/// Gauss-Legendre rule on [-1, 1], computed by Newton iteration on P_n.
template <std::size_t Order>
struct GaussLegendre {
  std::array<double, Order> nodes{};
  std::array<double, Order> weights{};

  GaussLegendre() {
    constexpr double kPi = std::numbers::pi;
    for (std::size_t i = 0; i < (Order + 1) / 2; ++i) {
      double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(Order) + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= Order; ++k) {
          const double kk = static_cast<double>(k);
          const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
          p0 = p1;
          p1 = p2;
        }
        dp = static_cast<double>(Order) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = -x;
      nodes[Order - 1 - i] = x;
      weights[i] = weights[Order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

}  // namespace gausskey::numeric
