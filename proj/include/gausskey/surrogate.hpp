#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gausskey/covariance.hpp"
#include "gausskey/error.hpp"
#include "gausskey/format.hpp"
#include "gausskey/numeric.hpp"
#include "gausskey/parallel.hpp"
#include "gausskey/rate_region.hpp"
#include "gausskey/rng.hpp"
#include "gausskey/universal_hash.hpp"

namespace gausskey {

/// Finite stand-in for (U, X, Y, Z): each variable cut into `cells`
/// equiprobable cells, with block length n for the protocol maps.
struct DiscreteSurrogate {
  std::size_t cells = 2;
  std::size_t n = 1;
  /// P(u, x, y, z), index ((u*c + x)*c + y)*c + z.
  std::vector<double> table;

  double operator()(std::size_t u, std::size_t x, std::size_t y, std::size_t z) const {
    return table[((u * cells + x) * cells + y) * cells + z];
  }
  std::size_t sequences() const {
    std::size_t s = 1;
    for (std::size_t i = 0; i < n; ++i) s *= cells;
    return s;
  }
  /// Digit i of a block sequence index in base `cells`.
  std::size_t digit(std::size_t seq, std::size_t i) const {
    for (std::size_t k = 0; k < i; ++k) seq /= cells;
    return seq % cells;
  }
};

inline constexpr std::size_t kMaxCells = 16;
inline constexpr std::size_t kMaxSurrogateBlock = 4;
inline constexpr double kMaxEnumerationTerms = 1e8;

namespace detail {

/// Φ(b) - Φ(a) without cancellation in the upper tail.
inline double interval_prob(double a, double b) {
  if (a > 0.0) return numeric::normal_cdf(-a) - numeric::normal_cdf(-b);
  return numeric::normal_cdf(b) - numeric::normal_cdf(a);
}

inline const numeric::GaussLegendre<32>& gl32() {
  static const numeric::GaussLegendre<32> rule;
  return rule;
}

/// Vector-valued adaptive Gauss-Legendre: accepts a panel once the 32-node
/// rule and its two-panel refinement agree to `tol` in every component.
template <class F>
void integrate_adaptive(const F& f, double lo, double hi, std::size_t dim, double tol, int depth,
                        std::vector<double>& acc) {
  auto rule = [&](double a, double b, std::vector<double>& out) {
    const auto& gl = gl32();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    out.assign(dim, 0.0);
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < 32; ++i) {
      f(mid + half * gl.nodes[i], v);
      for (std::size_t k = 0; k < dim; ++k) out[k] += half * gl.weights[i] * v[k];
    }
  };
  std::vector<double> whole, left, right;
  rule(lo, hi, whole);
  const double mid = 0.5 * (lo + hi);
  rule(lo, mid, left);
  rule(mid, hi, right);
  double err = 0.0;
  for (std::size_t k = 0; k < dim; ++k) err = std::max(err, std::abs(whole[k] - left[k] - right[k]));
  if (!std::isfinite(err)) throw Error(ErrorCode::IntegrationFailure, "non-finite integrand");
  if (err <= tol || depth <= 0) {
    for (std::size_t k = 0; k < dim; ++k) acc[k] += left[k] + right[k];
    return;
  }
  integrate_adaptive(f, lo, mid, dim, 0.5 * tol, depth - 1, acc);
  integrate_adaptive(f, mid, hi, dim, 0.5 * tol, depth - 1, acc);
}

inline std::vector<double> equiprobable_edges(std::size_t cells, double var) {
  std::vector<double> e(cells + 1);
  const double sd = std::sqrt(var);
  for (std::size_t k = 0; k <= cells; ++k) {
    e[k] = sd * numeric::normal_quantile(static_cast<double>(k) / static_cast<double>(cells));
  }
  return e;
}

}  // namespace detail

/// Cell probabilities of (U, X, Y, Z), U = X + W. Each marginal is cut at
/// its own quantiles. The mass of a cell box is
///   ∫_{x-cell} ∫_{y-cell} P(U∈a|x) P(Z∈d|x,y) dP(y|x) dP(x),
/// with the two outer integrals truncated at 12 standard deviations. The table is checked to sum to
/// 1 and to reproduce each 1/cells marginal within 1e-9, then renormalised.
inline DiscreteSurrogate discretize(const CovarianceTriple& sigma, const AuxiliaryChannel& aux, std::size_t cells,
                                   std::size_t n = 1) {
  if (cells < 2 || cells > kMaxCells) throw Error(ErrorCode::InvalidArgument, "cells must be in [2, 16]");
  if (n < 1 || n > kMaxSurrogateBlock) throw Error(ErrorCode::InvalidArgument, "surrogate block length must be in [1, 4]");
  if (!(aux.noise_var > 0.0)) throw Error(ErrorCode::InvalidArgument, "noise_var must be > 0");
  const CovarianceTriple s = validate(sigma);
  const std::size_t c = cells;

  const auto eu = detail::equiprobable_edges(c, s.sigma_x + aux.noise_var);
  const auto ey = detail::equiprobable_edges(c, s.sigma_y);
  const auto ez = detail::equiprobable_edges(c, s.sigma_z);
  const double sd_x = std::sqrt(s.sigma_x);
  const double sd_w = std::sqrt(aux.noise_var);
  const double y_slope = s.sigma_xy / s.sigma_x;
  const double sd_y_x = std::sqrt(s.sigma_y - s.sigma_xy * y_slope);
  const double det = s.sigma_x * s.sigma_y - s.sigma_xy * s.sigma_xy;
  const double zx = (s.sigma_xz * s.sigma_y - s.sigma_yz * s.sigma_xy) / det;
  const double zy = (s.sigma_yz * s.sigma_x - s.sigma_xz * s.sigma_xy) / det;
  const double sd_z_xy = std::sqrt(s.sigma_z - zx * s.sigma_xz - zy * s.sigma_yz);
  constexpr double kTol = 1e-13;
  constexpr int kDepth = 24;
  constexpr double kSpan = 12.0;  // standard deviations kept; the tails hold < 1e-32

  DiscreteSurrogate out;
  out.cells = c;
  out.n = n;
  out.table.assign(c * c * c * c, 0.0);
  const double cd = static_cast<double>(c);

  const auto ex = detail::equiprobable_edges(c, s.sigma_x);
  for (std::size_t bx = 0; bx < c; ++bx) {
    // Outer integrand at x: density times the vector over (u, y, z).
    auto outer = [&](double x, std::vector<double>& v) {
      const double wx = std::exp(numeric::log_normal_pdf(x, 0.0, s.sigma_x));
      std::vector<double> pu(c);
      for (std::size_t a = 0; a < c; ++a) pu[a] = detail::interval_prob((eu[a] - x) / sd_w, (eu[a + 1] - x) / sd_w);
      const double my = y_slope * x;
      for (std::size_t cy = 0; cy < c; ++cy) {
        const double ylo = std::max(ey[cy], my - kSpan * sd_y_x);
        const double yhi = std::min(ey[cy + 1], my + kSpan * sd_y_x);
        std::vector<double> iz(c, 0.0);
        if (yhi > ylo) {
          auto inner = [&](double y, std::vector<double>& w) {
            const double wy = std::exp(numeric::log_normal_pdf(y, my, sd_y_x * sd_y_x));
            const double mz = zx * x + zy * y;
            for (std::size_t d = 0; d < c; ++d) {
              w[d] = wy * detail::interval_prob((ez[d] - mz) / sd_z_xy, (ez[d + 1] - mz) / sd_z_xy);
            }
          };
          detail::integrate_adaptive(inner, ylo, yhi, c, kTol, kDepth, iz);
        }
        for (std::size_t a = 0; a < c; ++a) {
          for (std::size_t d = 0; d < c; ++d) v[(a * c + cy) * c + d] = wx * pu[a] * iz[d];
        }
      }
    };
    std::vector<double> acc(c * c * c, 0.0);
    const double xlo = std::max(ex[bx], -kSpan * sd_x);
    const double xhi = std::min(ex[bx + 1], kSpan * sd_x);
    detail::integrate_adaptive(outer, xlo, xhi, c * c * c, kTol, kDepth, acc);
    for (std::size_t a = 0; a < c; ++a) {
      for (std::size_t cy = 0; cy < c; ++cy) {
        for (std::size_t d = 0; d < c; ++d) out.table[((a * c + bx) * c + cy) * c + d] = acc[(a * c + cy) * c + d];
      }
    }
  }

  double total = 0.0;
  for (double v : out.table) total += v;
  if (!(std::abs(total - 1.0) <= 1e-9)) {
    throw Error(ErrorCode::IntegrationFailure, "cell masses sum to " + fmt12(total));
  }
  std::vector<double> marg(4 * c, 0.0);
  for (std::size_t a = 0; a < c; ++a)
    for (std::size_t b = 0; b < c; ++b)
      for (std::size_t y = 0; y < c; ++y)
        for (std::size_t d = 0; d < c; ++d) {
          const double v = out(a, b, y, d);
          marg[a] += v;
          marg[c + b] += v;
          marg[2 * c + y] += v;
          marg[3 * c + d] += v;
        }
  for (double m : marg) {
    if (!(std::abs(m - 1.0 / cd) <= 1e-9)) {
      throw Error(ErrorCode::IntegrationFailure, "marginal cell mass " + fmt12(m) + " misses 1/cells");
    }
  }
  for (double& v : out.table) v /= total;
  return out;
}

/// I(U;X|Z) of the single-letter table (nats).
inline double surrogate_mi_ux_given_z(const DiscreteSurrogate& s) {
  const std::size_t c = s.cells;
  std::vector<double> uxz(c * c * c, 0.0), uz(c * c, 0.0), xz(c * c, 0.0), z(c, 0.0);
  for (std::size_t u = 0; u < c; ++u)
    for (std::size_t x = 0; x < c; ++x)
      for (std::size_t y = 0; y < c; ++y)
        for (std::size_t d = 0; d < c; ++d) {
          const double v = s(u, x, y, d);
          uxz[(u * c + x) * c + d] += v;
          uz[u * c + d] += v;
          xz[x * c + d] += v;
          z[d] += v;
        }
  double mi = 0.0;
  for (std::size_t u = 0; u < c; ++u)
    for (std::size_t x = 0; x < c; ++x)
      for (std::size_t d = 0; d < c; ++d) {
        const double v = uxz[(u * c + x) * c + d];
        if (v > 0.0) mi += v * std::log(v * z[d] / (uz[u * c + d] * xz[x * c + d]));
      }
  return mi;
}

/// Protocol maps on the surrogate's finite spaces. Q is a list of U-sequences
/// (indices into cells^n); g maps every X-sequence to a position in Q and phi
/// maps positions in Q to public messages.
struct SurrogateCode {
  std::vector<std::size_t> words;
  std::vector<std::size_t> g;
  std::vector<std::size_t> phi;
  std::size_t size_c = 1;

  std::size_t size_q() const { return words.size(); }
};

/// g(x^n) = argmax over Q of sum_i ln P(u_i|x_i)/P(u_i); ties to the lowest position.
inline std::vector<std::size_t> max_density_quantizer(const DiscreteSurrogate& s, std::span<const std::size_t> words) {
  const std::size_t c = s.cells;
  std::vector<double> ux(c * c, 0.0), pu(c, 0.0), px(c, 0.0);
  for (std::size_t u = 0; u < c; ++u)
    for (std::size_t x = 0; x < c; ++x)
      for (std::size_t y = 0; y < c; ++y)
        for (std::size_t d = 0; d < c; ++d) {
          const double v = s(u, x, y, d);
          ux[u * c + x] += v;
          pu[u] += v;
          px[x] += v;
        }
  std::vector<double> letter(c * c);
  for (std::size_t u = 0; u < c; ++u)
    for (std::size_t x = 0; x < c; ++x) {
      const double joint = ux[u * c + x];
      letter[u * c + x] = joint > 0.0 ? std::log(joint / (pu[u] * px[x])) : -std::numeric_limits<double>::infinity();
    }
  const std::size_t seqs = s.sequences();
  std::vector<std::size_t> g(seqs, 0);
  for (std::size_t xs = 0; xs < seqs; ++xs) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < words.size(); ++q) {
      double score = 0.0;
      for (std::size_t i = 0; i < s.n; ++i) score += letter[s.digit(words[q], i) * c + s.digit(xs, i)];
      if (score > best) {
        best = score;
        g[xs] = q;
      }
    }
  }
  return g;
}

/// Table of an affine hash over [0, domain).
inline std::vector<std::size_t> hash_table(const AffineHash& h, std::size_t domain) {
  std::vector<std::size_t> t(domain);
  for (std::size_t q = 0; q < domain; ++q) t[q] = static_cast<std::size_t>(h(q));
  return t;
}

/// Code with Q = all of U^n, max-density quantizer and a seeded affine binning.
inline SurrogateCode make_surrogate_code(const DiscreteSurrogate& s, std::size_t size_c, std::uint64_t bin_seed) {
  if (size_c == 0) throw Error(ErrorCode::InvalidArgument, "size_c must be >= 1");
  const double seqs = static_cast<double>(s.sequences());
  if (seqs * seqs * static_cast<double>(s.n) > kMaxEnumerationTerms) {
    throw Error(ErrorCode::StateSpaceTooLarge, "quantizer table needs " + fmt12(seqs * seqs) + " scores");
  }
  SurrogateCode code;
  code.words.resize(s.sequences());
  for (std::size_t i = 0; i < code.words.size(); ++i) code.words[i] = i;
  code.g = max_density_quantizer(s, code.words);
  code.size_c = size_c;
  code.phi = hash_table(AffineHash::binning(code.size_q(), size_c, bin_seed), code.size_q());
  return code;
}

struct SecurityMetrics {
  double mu_exact = 0.0;
  double nu_exact = 0.0;
  double epsilon_exact = 0.0;
};


/// Block-level tables shared by every evaluation of a fixed (surrogate, g, phi).
class SurrogateEnumeration {
 public:
  SurrogateEnumeration(const DiscreteSurrogate& s, const SurrogateCode& code) : s_(s), code_(code) {
    const std::size_t c = s.cells;
    seqs_ = s.sequences();
    const double seqs = static_cast<double>(seqs_);
    const double terms = seqs * seqs * seqs + 2.0 * static_cast<double>(code.size_q()) * seqs * seqs;
    if (terms > kMaxEnumerationTerms) {
      throw Error(ErrorCode::StateSpaceTooLarge, "enumeration needs " + fmt12(terms) + " terms");
    }
    if (code.g.size() != seqs_ || code.phi.size() != code.size_q() || code.size_q() == 0) {
      throw Error(ErrorCode::InvalidArgument, "code tables do not match the surrogate");
    }
    for (std::size_t q : code.g) {
      if (q >= code.size_q()) throw Error(ErrorCode::InvalidArgument, "g maps outside Q");
    }
    for (std::size_t m : code.phi) {
      if (m >= code.size_c) throw Error(ErrorCode::InvalidArgument, "phi maps outside C");
    }

    // Single-letter marginals.
    xy_.assign(c * c, 0.0);
    uxz_.assign(c * c * c, 0.0);
    uy_.assign(c * c, 0.0);
    uz_.assign(c * c, 0.0);
    xz_.assign(c * c, 0.0);
    u_.assign(c, 0.0);
    z_.assign(c, 0.0);
    for (std::size_t u = 0; u < c; ++u)
      for (std::size_t x = 0; x < c; ++x)
        for (std::size_t y = 0; y < c; ++y)
          for (std::size_t d = 0; d < c; ++d) {
            const double v = s(u, x, y, d);
            xy_[x * c + y] += v;
            uxz_[(u * c + x) * c + d] += v;
            uy_[u * c + y] += v;
            uz_[u * c + d] += v;
            xz_[x * c + d] += v;
            u_[u] += v;
            z_[d] += v;
          }

    // P(x^n, z^n) and P(q, z^n).
    pxz_.assign(seqs_ * seqs_, 0.0);
    pqz_.assign(code.size_q() * seqs_, 0.0);
    for (std::size_t xs = 0; xs < seqs_; ++xs) {
      for (std::size_t zs = 0; zs < seqs_; ++zs) {
        double p = 1.0;
        for (std::size_t i = 0; i < s.n; ++i) p *= xz_[s.digit(xs, i) * c + s.digit(zs, i)];
        pxz_[xs * seqs_ + zs] = p;
        pqz_[code.g[xs] * seqs_ + zs] += p;
      }
    }
  }

  /// Pr{(g(X^n), X^n, Z^n) not in B_n} for threshold beta.
  double prob_not_in_b(double beta) const {
    const std::size_t c = s_.cells;
    const double nd = static_cast<double>(s_.n);
    double miss = 0.0;
    for (std::size_t xs = 0; xs < seqs_; ++xs) {
      const std::size_t word = code_.words[code_.g[xs]];
      for (std::size_t zs = 0; zs < seqs_; ++zs) {
        const double p = pxz_[xs * seqs_ + zs];
        if (p <= 0.0) continue;
        double llr = 0.0;
        for (std::size_t i = 0; i < s_.n; ++i) {
          const std::size_t u = s_.digit(word, i), x = s_.digit(xs, i), d = s_.digit(zs, i);
          const double num = uxz_[(u * c + x) * c + d] / uz_[u * c + d];  // P(x|u,z)
          const double den = xz_[x * c + d] / z_[d];                      // P(x|z)
          llr += num > 0.0 ? std::log(num / den) : -std::numeric_limits<double>::infinity();
        }
        if (!(llr / nd >= beta)) miss += p;
      }
    }
    return miss;
  }

  /// μ (z-averaged L1 distance to uniform-and-independent) and
  /// ν = ln|S| - H(S|C,Z^n) for key map f on Q.
  std::pair<double, double> mu_nu(std::span<const std::size_t> f, std::size_t size_s) const {
    const std::size_t nq = code_.size_q();
    const std::size_t nc = code_.size_c;
    std::vector<double> psc(size_s * nc), pc(nc);
    double mu = 0.0;
    double cond_entropy = 0.0;
    for (std::size_t zs = 0; zs < seqs_; ++zs) {
      std::fill(psc.begin(), psc.end(), 0.0);
      std::fill(pc.begin(), pc.end(), 0.0);
      for (std::size_t q = 0; q < nq; ++q) {
        const double p = pqz_[q * seqs_ + zs];
        psc[f[q] * nc + code_.phi[q]] += p;
        pc[code_.phi[q]] += p;
      }
      const double inv_s = 1.0 / static_cast<double>(size_s);
      for (std::size_t sk = 0; sk < size_s; ++sk) {
        for (std::size_t m = 0; m < nc; ++m) {
          const double p = psc[sk * nc + m];
          mu += std::abs(p - pc[m] * inv_s);
          if (p > 0.0) cond_entropy -= p * std::log(p / pc[m]);
        }
      }
    }
    return {mu, std::log(static_cast<double>(size_s)) - cond_entropy};
  }

  /// Key disagreement probability with Bob's in-bin maximum-likelihood decoder.
  double epsilon(std::span<const std::size_t> f) const {
    const std::size_t c = s_.cells;
    const std::size_t nq = code_.size_q();
    // ln P(y^n | u^n) for every codeword and Y-sequence.
    std::vector<double> loglik(nq * seqs_);
    for (std::size_t q = 0; q < nq; ++q) {
      for (std::size_t ys = 0; ys < seqs_; ++ys) {
        double l = 0.0;
        for (std::size_t i = 0; i < s_.n; ++i) {
          const std::size_t u = s_.digit(code_.words[q], i);
          const double joint = uy_[u * c + s_.digit(ys, i)];
          l += joint > 0.0 ? std::log(joint / u_[u]) : -std::numeric_limits<double>::infinity();
        }
        loglik[q * seqs_ + ys] = l;
      }
    }
    std::vector<std::size_t> decoded(code_.size_c * seqs_, 0);
    for (std::size_t m = 0; m < code_.size_c; ++m) {
      for (std::size_t ys = 0; ys < seqs_; ++ys) {
        double best = -std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t q = 0; q < nq; ++q) {
          if (code_.phi[q] != m) continue;
          const double l = loglik[q * seqs_ + ys];
          if (!found || l > best) {
            best = l;
            decoded[m * seqs_ + ys] = q;
            found = true;
          }
        }
      }
    }
    double eps = 0.0;
    for (std::size_t xs = 0; xs < seqs_; ++xs) {
      const std::size_t q = code_.g[xs];
      const std::size_t m = code_.phi[q];
      for (std::size_t ys = 0; ys < seqs_; ++ys) {
        if (f[decoded[m * seqs_ + ys]] == f[q]) continue;
        double p = 1.0;
        for (std::size_t i = 0; i < s_.n; ++i) p *= xy_[s_.digit(xs, i) * c + s_.digit(ys, i)];
        eps += p;
      }
    }
    return eps;
  }

  std::size_t sequences() const noexcept { return seqs_; }

 private:
  const DiscreteSurrogate& s_;
  const SurrogateCode& code_;
  std::size_t seqs_ = 0;
  std::vector<double> xy_, uxz_, uy_, uz_, xz_, u_, z_;
  std::vector<double> pxz_, pqz_;
};

inline SecurityMetrics exact_security(const DiscreteSurrogate& s, const SurrogateCode& code,
                                      std::span<const std::size_t> f, std::size_t size_s) {
  if (size_s == 0 || f.size() != code.size_q()) throw Error(ErrorCode::InvalidArgument, "f must map Q into S");
  for (std::size_t k : f) {
    if (k >= size_s) throw Error(ErrorCode::InvalidArgument, "f maps outside S");
  }
  const SurrogateEnumeration e(s, code);
  SecurityMetrics m;
  std::tie(m.mu_exact, m.nu_exact) = e.mu_nu(f, size_s);
  m.epsilon_exact = e.epsilon(f);
  return m;
}

struct PrivacyAmplificationReport {
  double bound = 0.0;
  double average_mu = 0.0;
  double best_mu = 0.0;
  double worst_mu = 0.0;
  double prob_not_in_b = 0.0;
  std::size_t hashes = 0;
  bool exhaustive = false;
  bool average_holds = false;
  bool existence_holds = false;
};

inline constexpr double kBoundSlack = 1e-9;

/// Evaluates exact μ for hash functions drawn from the affine universal
/// family Q -> S and compares their mean with
///   sqrt(|S| |C| e^{-beta n}) + 2 Pr{(g(X^n), X^n, Z^n) not in B_n}.
/// trials == 0 (or >= the family size) averages over the entire family.
inline PrivacyAmplificationReport verify_pa_lemma(const DiscreteSurrogate& s, const SurrogateCode& code,
                                                  std::size_t size_s, double beta, std::size_t trials,
                                                  std::uint64_t seed, unsigned threads = 1) {
  if (size_s == 0) throw Error(ErrorCode::InvalidArgument, "|S| must be >= 1");
  const SurrogateEnumeration e(s, code);
  const std::uint64_t family = AffineHash::family_size(code.size_q());
  const bool exhaustive = trials == 0 || trials >= family;
  const std::size_t count = exhaustive ? static_cast<std::size_t>(family) : trials;

  std::vector<double> mus(count);
  parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const AffineHash h = exhaustive ? AffineHash::from_index(code.size_q(), size_s, k)
                                      : AffineHash::from_seed(code.size_q(), size_s, rng::mix64(seed + k));
      mus[k] = e.mu_nu(hash_table(h, code.size_q()), size_s).first;
    }
  });

  PrivacyAmplificationReport r;
  r.hashes = count;
  r.exhaustive = exhaustive;
  r.prob_not_in_b = e.prob_not_in_b(beta);
  r.bound = std::sqrt(static_cast<double>(size_s) * static_cast<double>(code.size_c) *
                      std::exp(-beta * static_cast<double>(s.n))) +
            2.0 * r.prob_not_in_b;
  double sum = 0.0;
  r.best_mu = std::numeric_limits<double>::infinity();
  r.worst_mu = 0.0;
  for (double m : mus) {
    sum += m;
    r.best_mu = std::min(r.best_mu, m);
    r.worst_mu = std::max(r.worst_mu, m);
  }
  r.average_mu = sum / static_cast<double>(count);
  r.average_holds = r.average_mu <= r.bound + kBoundSlack;
  r.existence_holds = r.best_mu <= r.bound + kBoundSlack;
  return r;
}

inline void write_pa_report(std::ostream& out, const PrivacyAmplificationReport& r) {
  out << "bound = " << fmt12(r.bound) << '\n'
      << "average_mu = " << fmt12(r.average_mu) << '\n'
      << "best_mu = " << fmt12(r.best_mu) << '\n'
      << "worst_mu = " << fmt12(r.worst_mu) << '\n'
      << "prob_not_in_B = " << fmt12(r.prob_not_in_b) << '\n'
      << "hashes = " << r.hashes << '\n'
      << "exhaustive = " << (r.exhaustive ? 1 : 0) << '\n'
      << "average_clause = " << (r.average_holds ? "PASS" : "FAIL") << '\n'
      << "existence_clause = " << (r.existence_holds ? "PASS" : "FAIL") << '\n';
}

}  // namespace gausskey
