#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "gausskey/error.hpp"
#include "gausskey/numeric.hpp"

namespace gausskey {

/// Covariance of the zero-mean jointly Gaussian (X, Y, Z) observed by
/// Alice, Bob and Eve respectively.
struct CovarianceTriple {
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  double sigma_z = 1.0;
  double sigma_xy = 0.0;
  double sigma_xz = 0.0;
  double sigma_yz = 0.0;

  friend bool operator==(const CovarianceTriple&, const CovarianceTriple&) = default;

  /// Index order X=0, Y=1, Z=2.
  numeric::SymMatrix<3> matrix() const {
    return {{{sigma_x, sigma_xy, sigma_xz}, {sigma_xy, sigma_y, sigma_yz}, {sigma_xz, sigma_yz, sigma_z}}};
  }
};

/// Floor applied to every leading principal minor.
inline constexpr double kMinorFloor = 1e-12;

inline CovarianceTriple validate(const CovarianceTriple& c) {
  for (double v : {c.sigma_x, c.sigma_y, c.sigma_z, c.sigma_xy, c.sigma_xz, c.sigma_yz}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "covariance entries must be finite");
  }
  const double m1 = c.sigma_x;
  const double m2 = c.sigma_x * c.sigma_y - c.sigma_xy * c.sigma_xy;
  const double m3 = c.sigma_x * (c.sigma_y * c.sigma_z - c.sigma_yz * c.sigma_yz) -
                    c.sigma_xy * (c.sigma_xy * c.sigma_z - c.sigma_yz * c.sigma_xz) +
                    c.sigma_xz * (c.sigma_xy * c.sigma_yz - c.sigma_y * c.sigma_xz);
  if (!(m1 > kMinorFloor && m2 > kMinorFloor && m3 > kMinorFloor)) {
    throw Error(ErrorCode::NotPositiveDefinite, "leading principal minors must be positive");
  }
  if (c.sigma_xy == 0.0) {
    throw Error(ErrorCode::ZeroXYCorrelation, "sigma_xy = 0 admits no secret key");
  }
  return c;
}

/// X = k_xz Z + W1 and Y = k_yx X + k_yz Z + W2 with W1 independent of Z and
/// W2 independent of (X, Z). var_z is kept so the full covariance can be
/// rebuilt from the decomposition alone.
struct GaussianDecomposition {
  double k_xz = 0.0;
  double k_yx = 0.0;
  double k_yz = 0.0;
  double var_w1 = 0.0;
  double var_w2 = 0.0;
  double cond_var_x_given_z = 0.0;
  double cond_var_y_given_z = 0.0;
  double cond_var_y_given_xz = 0.0;
  double var_z = 0.0;
};

inline GaussianDecomposition decompose(const CovarianceTriple& c) {
  GaussianDecomposition d;
  d.var_z = c.sigma_z;
  d.k_xz = c.sigma_xz / c.sigma_z;

  // [k_yz k_yx] = [s_yz s_yx] * inv([[s_z, s_zx], [s_xz, s_x]])
  const double det = c.sigma_z * c.sigma_x - c.sigma_xz * c.sigma_xz;
  d.k_yz = (c.sigma_yz * c.sigma_x - c.sigma_xy * c.sigma_xz) / det;
  d.k_yx = (c.sigma_xy * c.sigma_z - c.sigma_yz * c.sigma_xz) / det;

  d.cond_var_x_given_z = c.sigma_x - d.k_xz * c.sigma_xz;
  d.cond_var_y_given_xz = c.sigma_y - d.k_yx * c.sigma_xy - d.k_yz * c.sigma_yz;
  d.cond_var_y_given_z = c.sigma_y - c.sigma_yz * c.sigma_yz / c.sigma_z;
  d.var_w1 = d.cond_var_x_given_z;
  d.var_w2 = d.cond_var_y_given_xz;
  return d;
}

/// Inverse of decompose(): the covariance implied by the linear model.
inline CovarianceTriple reconstruct(const GaussianDecomposition& d) {
  CovarianceTriple c;
  c.sigma_z = d.var_z;
  c.sigma_xz = d.k_xz * d.var_z;
  c.sigma_x = d.k_xz * d.k_xz * d.var_z + d.var_w1;
  c.sigma_yz = (d.k_yx * d.k_xz + d.k_yz) * d.var_z;
  c.sigma_xy = d.k_yx * c.sigma_x + d.k_yz * c.sigma_xz;
  c.sigma_y = d.k_yx * d.k_yx * c.sigma_x + d.k_yz * d.k_yz * d.var_z + 2.0 * d.k_yx * d.k_yz * c.sigma_xz +
              d.var_w2;
  return c;
}

enum class DegradednessClass { DegradableXYZ, Useless };

inline std::string to_string(DegradednessClass cls) {
  return cls == DegradednessClass::DegradableXYZ ? "DEGRADABLE_XYZ" : "USELESS";
}

struct DegradednessReport {
  double rho2_xy = 0.0;
  double rho2_xz = 0.0;
  DegradednessClass cls = DegradednessClass::Useless;
  /// Jointly Gaussian triple with X - Y - Z̄ Markov and the (X,Y), (X,Z)
  /// marginals of the input; present iff cls == DegradableXYZ.
  std::optional<CovarianceTriple> reduced;
  /// Variance of the independent noise N̂ in Z̄ = (sigma_xz / sigma_xy) Y + N̂.
  std::optional<double> reduced_noise_var;
};

/// True when sigma_xz * sigma_y == sigma_xy * sigma_yz up to rounding.
inline bool is_degraded(const CovarianceTriple& c, double rel_tol = 1e-14) {
  const double lhs = c.sigma_xz * c.sigma_y;
  const double rhs = c.sigma_xy * c.sigma_yz;
  return std::abs(lhs - rhs) <= rel_tol * (std::abs(lhs) + std::abs(rhs));
}

/// Degradation classification by squared correlation, with the Gaussian
/// reduction Z̄ = (sigma_xz / sigma_xy) Y + N̂ when rho2_xy > rho2_xz.
/// The tie rho2_xy == rho2_xz is classified USELESS.
inline DegradednessReport classify_and_reduce(const CovarianceTriple& c) {
  DegradednessReport r;
  r.rho2_xy = c.sigma_xy * c.sigma_xy / (c.sigma_x * c.sigma_y);
  r.rho2_xz = c.sigma_xz * c.sigma_xz / (c.sigma_x * c.sigma_z);

  // Cross-multiplied form of rho2_xy > rho2_xz avoids two divisions.
  const bool degradable = c.sigma_xy * c.sigma_xy * c.sigma_z > c.sigma_xz * c.sigma_xz * c.sigma_y;
  if (!degradable) {
    r.cls = DegradednessClass::Useless;
    return r;
  }
  r.cls = DegradednessClass::DegradableXYZ;
  const double slope = c.sigma_xz / c.sigma_xy;
  r.reduced_noise_var = c.sigma_z - slope * slope * c.sigma_y;
  if (is_degraded(c)) {
    r.reduced = c;
  } else {
    CovarianceTriple red = c;
    red.sigma_yz = slope * c.sigma_y;
    r.reduced = red;
  }
  return r;
}

}  // namespace gausskey
