#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <span>
#include <vector>

#include "gausskey/covariance.hpp"
#include "gausskey/error.hpp"
#include "gausskey/format.hpp"
#include "gausskey/numeric.hpp"

namespace gausskey {

// All rates are in nats per source symbol.

struct RatePoint {
  double r_p = 0.0;
  double r_k = 0.0;
};

/// Test channel U = X + W, W ~ N(0, noise_var) independent of (X, Y, Z).
struct AuxiliaryChannel {
  double noise_var = 1.0;
};

/// I(X;Y|Z) = 1/2 ln(Σ_{y|z} / Σ_{y|xz}); bounds the key rate at any public rate.
inline double key_rate_upper_bound(const GaussianDecomposition& dec) {
  return 0.5 * std::log(dec.cond_var_y_given_z / dec.cond_var_y_given_xz);
}

/// Optimal key rate of degraded Gaussian sources at public rate r_p:
///   1/2 ln[(Σ_{y|xz} e^{-2 r_p} + Σ_{y|z} (1 - e^{-2 r_p})) / Σ_{y|xz}].
inline double optimal_key_rate(const GaussianDecomposition& dec, double r_p) {
  if (!(r_p >= 0.0)) throw Error(ErrorCode::NegativePublicRate, "public rate must be non-negative");
  const double excess = (dec.cond_var_y_given_z - dec.cond_var_y_given_xz) / dec.cond_var_y_given_xz;
  return 0.5 * std::log1p(excess * -std::expm1(-2.0 * r_p));
}

/// I(X;Y|Z) - R_k(r_p) = -1/2 ln(1 - (1 - Σ_{y|xz}/Σ_{y|z}) e^{-2 r_p}), without
/// the cancellation of subtracting the two rates.
inline double key_rate_gap(const GaussianDecomposition& dec, double r_p) {
  if (!(r_p >= 0.0)) throw Error(ErrorCode::NegativePublicRate, "public rate must be non-negative");
  const double shrink = (dec.cond_var_y_given_z - dec.cond_var_y_given_xz) / dec.cond_var_y_given_z;
  return -0.5 * std::log1p(-shrink * std::exp(-2.0 * r_p));
}

/// Smallest public rate that supports key rate r_k (inverse of optimal_key_rate).
inline double required_public_rate(const GaussianDecomposition& dec, double r_k) {
  if (!(r_k >= 0.0)) throw Error(ErrorCode::InvalidArgument, "key rate must be non-negative");
  const double diff = dec.cond_var_y_given_z - dec.cond_var_y_given_xz;
  // Σ_{y|z} e^{-2 r_k} - Σ_{y|xz}, written to keep precision near r_k = 0.
  const double denom = diff + dec.cond_var_y_given_z * std::expm1(-2.0 * r_k);
  if (!(denom > 0.0) || r_k >= key_rate_upper_bound(dec)) {
    throw Error(ErrorCode::KeyRateAtOrAboveBound, "key rate is not below I(X;Y|Z)");
  }
  return 0.5 * std::log(diff / denom) - r_k;
}

struct MutualInformations {
  double i_ux = 0.0;
  double i_uy = 0.0;
  double i_uz = 0.0;
  double i_ux_given_y = 0.0;
  double i_uy_given_z = 0.0;
  double i_ux_given_z = 0.0;
};

/// Covariance of (U, X, Y, Z) in that index order.
inline numeric::SymMatrix<4> joint_covariance(const GaussianDecomposition& dec, const AuxiliaryChannel& aux) {
  const CovarianceTriple c = reconstruct(dec);
  return {{{c.sigma_x + aux.noise_var, c.sigma_x, c.sigma_xy, c.sigma_xz},
           {c.sigma_x, c.sigma_x, c.sigma_xy, c.sigma_xz},
           {c.sigma_xy, c.sigma_xy, c.sigma_y, c.sigma_yz},
           {c.sigma_xz, c.sigma_xz, c.sigma_yz, c.sigma_z}}};
}

/// Each quantity is evaluated independently as 1/2 ln(Var(U|B) / Var(U|A,B)),
/// so the chain-rule identities between them are genuine checks.
inline MutualInformations gaussian_mutual_informations(const GaussianDecomposition& dec,
                                                       const AuxiliaryChannel& aux) {
  constexpr std::size_t U = 0, X = 1, Y = 2, Z = 3;
  const auto cov = joint_covariance(dec, aux);
  auto cmi = [&cov](std::span<const std::size_t> given, std::span<const std::size_t> given_plus) {
    return 0.5 * std::log(numeric::conditional_variance<4>(cov, U, given) /
                          numeric::conditional_variance<4>(cov, U, given_plus));
  };
  const std::array<std::size_t, 0> none{};
  const std::array<std::size_t, 1> x{X}, y{Y}, z{Z};
  const std::array<std::size_t, 2> xy{Y, X}, yz{Z, Y}, xz{Z, X};

  MutualInformations mi;
  mi.i_ux = cmi(none, x);
  mi.i_uy = cmi(none, y);
  mi.i_uz = cmi(none, z);
  mi.i_ux_given_y = cmi(y, xy);
  mi.i_uy_given_z = cmi(z, yz);
  mi.i_ux_given_z = cmi(z, xz);
  return mi;
}

/// Noise variance for which the Gaussian test channel spends exactly r_p of
/// public rate: I(U;X|Y) = 1/2 ln(1 + Σ_{x|y}/noise_var) = r_p.
inline AuxiliaryChannel design_auxiliary_noise(const GaussianDecomposition& dec, double r_p) {
  if (!(r_p > 0.0) || !std::isfinite(r_p)) {
    throw Error(ErrorCode::NoSolution, "auxiliary channel needs a finite public rate > 0");
  }
  const CovarianceTriple c = reconstruct(dec);
  const double var_x_given_y = c.sigma_x - c.sigma_xy * c.sigma_xy / c.sigma_y;
  const double nv = var_x_given_y / std::expm1(2.0 * r_p);
  if (!(nv > 0.0)) throw Error(ErrorCode::NoSolution, "public rate too large for double precision");
  return AuxiliaryChannel{nv};
}

struct EpiCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

/// Compares I(U;X|Z) - I(U;Y|Z) against the entropy-power lower bound
///   1/2 ln[(Σ_{y|z} - Σ_{y|xz}) / (Σ_{y|z} e^{-2a} - Σ_{y|xz})] - a,  a = I(U;Y|Z).
/// The gap is zero for Gaussian auxiliaries.
inline EpiCheck epi_converse_check(const GaussianDecomposition& dec, const AuxiliaryChannel& aux) {
  const MutualInformations mi = gaussian_mutual_informations(dec, aux);
  const double a = mi.i_uy_given_z;
  const double diff = dec.cond_var_y_given_z - dec.cond_var_y_given_xz;
  const double denom = diff + dec.cond_var_y_given_z * std::expm1(-2.0 * a);
  EpiCheck r;
  r.lhs = mi.i_ux_given_z - mi.i_uy_given_z;
  r.rhs = 0.5 * std::log(diff / denom) - a;
  r.gap = r.lhs - r.rhs;
  return r;
}

struct TradeoffRow {
  double r_p = 0.0;
  double r_k = 0.0;
  double upper_bound = 0.0;
};

struct TradeoffCurve {
  DegradednessClass cls = DegradednessClass::Useless;
  std::vector<TradeoffRow> rows;
};

/// Optimal key rate over a public-rate grid. Degradable triples are first
/// reduced to their degraded equivalent; the upper_bound column is I(X;Y|Z)
/// of the triple the curve is evaluated on. USELESS triples give r_k = 0.
inline TradeoffCurve tradeoff_curve(const CovarianceTriple& sigma, std::span<const double> grid) {
  const CovarianceTriple valid = validate(sigma);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
      throw Error(ErrorCode::NegativePublicRate, "grid entries must be finite and non-negative");
    }
    if (i > 0 && grid[i] < grid[i - 1]) throw Error(ErrorCode::InvalidArgument, "grid must be ascending");
  }

  const DegradednessReport report = classify_and_reduce(valid);
  TradeoffCurve curve;
  curve.cls = report.cls;
  curve.rows.reserve(grid.size());
  if (report.cls == DegradednessClass::Useless) {
    const double bound = key_rate_upper_bound(decompose(valid));
    for (double r_p : grid) curve.rows.push_back({r_p, 0.0, bound});
    return curve;
  }
  const GaussianDecomposition dec = decompose(*report.reduced);
  const double bound = key_rate_upper_bound(dec);
  for (double r_p : grid) curve.rows.push_back({r_p, optimal_key_rate(dec, r_p), bound});
  return curve;
}

inline void write_tradeoff_csv(std::ostream& out, const TradeoffCurve& curve, RateUnit unit) {
  const auto suffix = unit_suffix(unit);
  out << "r_p_" << suffix << ",r_k_" << suffix << ",upper_bound_" << suffix << '\n';
  for (const auto& row : curve.rows) {
    out << fmt12(convert_rate(row.r_p, unit)) << ',' << fmt12(convert_rate(row.r_k, unit)) << ','
        << fmt12(convert_rate(row.upper_bound, unit)) << '\n';
  }
}

}  // namespace gausskey
