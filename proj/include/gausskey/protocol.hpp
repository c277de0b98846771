#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gausskey/covariance.hpp"
#include "gausskey/error.hpp"
#include "gausskey/format.hpp"
#include "gausskey/parallel.hpp"
#include "gausskey/rate_region.hpp"
#include "gausskey/rng.hpp"
#include "gausskey/source_sim.hpp"
#include "gausskey/universal_hash.hpp"

namespace gausskey {

// ---------------------------------------------------------------------------
// Information densities
// ---------------------------------------------------------------------------

/// Per-symbol log-likelihood ratios of the Gaussian test channel U = X + W.
/// Block densities are the per-symbol averages over the block.
class InformationDensity {
 public:
  InformationDensity(const GaussianDecomposition& dec, const AuxiliaryChannel& aux)
      : sigma_(reconstruct(dec)), noise_var_(aux.noise_var) {
    var_u_ = sigma_.sigma_x + noise_var_;
    yu_slope_ = sigma_.sigma_xy / var_u_;
    yu_var_ = sigma_.sigma_y - sigma_.sigma_xy * sigma_.sigma_xy / var_u_;
    xz_slope_ = sigma_.sigma_xz / sigma_.sigma_z;
    xz_var_ = sigma_.sigma_x - sigma_.sigma_xz * xz_slope_;
    const double det = var_u_ * sigma_.sigma_z - sigma_.sigma_xz * sigma_.sigma_xz;
    xuz_u_ = (sigma_.sigma_x * sigma_.sigma_z - sigma_.sigma_xz * sigma_.sigma_xz) / det;
    xuz_z_ = sigma_.sigma_xz * noise_var_ / det;
    xuz_var_ = sigma_.sigma_x - xuz_u_ * sigma_.sigma_x - xuz_z_ * sigma_.sigma_xz;
    ux_const_ = 0.5 * std::log(var_u_ / noise_var_);
    yu_const_ = 0.5 * std::log(sigma_.sigma_y / yu_var_);
    xuz_const_ = 0.5 * std::log(xz_var_ / xuz_var_);
    inv_var_u_ = 1.0 / var_u_;
    inv_noise_ = 1.0 / noise_var_;
    inv_var_y_ = 1.0 / sigma_.sigma_y;
    inv_yu_var_ = 1.0 / yu_var_;
    inv_xz_var_ = 1.0 / xz_var_;
    inv_xuz_var_ = 1.0 / xuz_var_;
  }

  /// ln p(u|x) / p(u)
  double ux(double u, double x) const {
    const double d = u - x;
    return ux_const_ + 0.5 * (u * u * inv_var_u_ - d * d * inv_noise_);
  }
  /// ln p(y|u) / p(y)
  double yu(double y, double u) const {
    const double d = y - yu_slope_ * u;
    return yu_const_ + 0.5 * (y * y * inv_var_y_ - d * d * inv_yu_var_);
  }
  /// ln p(x|u,z) / p(x|z)
  double x_uz(double x, double u, double z) const {
    const double d1 = x - xuz_u_ * u - xuz_z_ * z;
    const double d0 = x - xz_slope_ * z;
    return xuz_const_ + 0.5 * (d0 * d0 * inv_xz_var_ - d1 * d1 * inv_xuz_var_);
  }

  double block_ux(std::span<const double> u, std::span<const double> x) const {
    check_lengths(u.size(), x.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += ux(u[i], x[i]);
    return sum / static_cast<double>(u.size());
  }
  double block_yu(std::span<const double> u, std::span<const double> y) const {
    check_lengths(u.size(), y.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += yu(y[i], u[i]);
    return sum / static_cast<double>(u.size());
  }
  double block_x_uz(std::span<const double> u, std::span<const double> x, std::span<const double> z) const {
    check_lengths(u.size(), x.size());
    check_lengths(u.size(), z.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += x_uz(x[i], u[i], z[i]);
    return sum / static_cast<double>(u.size());
  }

  double var_u() const noexcept { return var_u_; }
  double noise_var() const noexcept { return noise_var_; }
  const CovarianceTriple& sigma() const noexcept { return sigma_; }

 private:
  static void check_lengths(std::size_t a, std::size_t b) {
    if (a != b || a == 0) throw Error(ErrorCode::InvalidArgument, "sequences must have equal, non-zero length");
  }

  CovarianceTriple sigma_;
  double noise_var_;
  double var_u_ = 0.0;
  double yu_slope_ = 0.0, yu_var_ = 0.0;
  double xz_slope_ = 0.0, xz_var_ = 0.0;
  double xuz_u_ = 0.0, xuz_z_ = 0.0, xuz_var_ = 0.0;
  double ux_const_ = 0.0, yu_const_ = 0.0, xuz_const_ = 0.0;
  double inv_var_u_ = 0.0, inv_noise_ = 0.0, inv_var_y_ = 0.0;
  double inv_yu_var_ = 0.0, inv_xz_var_ = 0.0, inv_xuz_var_ = 0.0;
};

/// Free-function forms of the three block densities.
inline double info_density_ux(std::span<const double> u, std::span<const double> x, const AuxiliaryChannel& aux,
                              const GaussianDecomposition& dec) {
  return InformationDensity(dec, aux).block_ux(u, x);
}
inline double info_density_yu(std::span<const double> u, std::span<const double> y, const AuxiliaryChannel& aux,
                              const GaussianDecomposition& dec) {
  return InformationDensity(dec, aux).block_yu(u, y);
}
inline double info_density_x_uz(std::span<const double> u, std::span<const double> x, std::span<const double> z,
                                const AuxiliaryChannel& aux, const GaussianDecomposition& dec) {
  return InformationDensity(dec, aux).block_x_uz(u, x, z);
}

// ---------------------------------------------------------------------------
// Plan
// ---------------------------------------------------------------------------

struct ProtocolPlan {
  std::size_t n = 0;
  double gamma = 0.0;
  std::uint64_t size_q = 1;
  std::uint64_t size_c = 1;
  std::uint64_t size_s = 1;
  double t = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  AuxiliaryChannel aux;
  MutualInformations mi;

  double public_rate() const { return std::log(static_cast<double>(size_c)) / static_cast<double>(n); }
  double key_rate() const { return std::log(static_cast<double>(size_s)) / static_cast<double>(n); }
};

struct PlanLimits {
  std::uint64_t max_codebook = std::uint64_t{1} << 21;
};

/// Code sizes and thresholds for block length n and slack gamma:
///   |Q| = ceil(e^{n(I(U;X)+2γ)}),  |C| = ceil(e^{n(I(U;X)-I(U;Y)+4γ)}),
///   |S| = floor(e^{n(I(U;Y)-I(U;Z)-6γ)}),
///   t = I(U;X)+γ,  α = I(U;Y)-γ,  β = I(U;X|Z)-γ.
/// |S| rounds down so the key alphabet never exceeds the secrecy budget.
inline ProtocolPlan plan(const GaussianDecomposition& dec, const AuxiliaryChannel& aux, std::size_t n, double gamma,
                         const PlanLimits& limits = {}) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "block length must be >= 1");
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be > 0");
  if (!(aux.noise_var > 0.0)) throw Error(ErrorCode::InvalidArgument, "noise_var must be > 0");

  ProtocolPlan p;
  p.n = n;
  p.gamma = gamma;
  p.aux = aux;
  p.mi = gaussian_mutual_informations(dec, aux);
  const double nd = static_cast<double>(n);
  const double secrecy = p.mi.i_uy - p.mi.i_uz;
  if (!(secrecy > 6.0 * gamma)) {
    throw Error(ErrorCode::KeyRateNonpositive,
                "I(U;Y)-I(U;Z)=" + fmt12(secrecy) + " does not exceed 6*gamma=" + fmt12(6.0 * gamma));
  }
  const double log_q = nd * (p.mi.i_ux + 2.0 * gamma);
  if (log_q > std::log(static_cast<double>(limits.max_codebook)) + 1e-12) {
    throw Error(ErrorCode::CodebookTooLarge,
                "|Q| = e^" + fmt12(log_q) + " exceeds cap " + std::to_string(limits.max_codebook));
  }
  p.size_q = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(std::exp(log_q))));
  p.size_c = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::ceil(std::exp(nd * (p.mi.i_ux - p.mi.i_uy + 4.0 * gamma)))));
  p.size_s = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(std::exp(nd * (secrecy - 6.0 * gamma)))));
  p.t = p.mi.i_ux + gamma;
  p.alpha = p.mi.i_uy - gamma;
  p.beta = (p.mi.i_ux - p.mi.i_uz) - gamma;
  return p;
}

/// Plan in the flat `key = value` config format.
inline void write_plan(std::ostream& out, const ProtocolPlan& p) {
  out << "n = " << p.n << '\n'
      << "gamma = " << fmt12(p.gamma) << '\n'
      << "size_q = " << p.size_q << '\n'
      << "size_c = " << p.size_c << '\n'
      << "size_s = " << p.size_s << '\n'
      << "t = " << fmt12(p.t) << '\n'
      << "alpha = " << fmt12(p.alpha) << '\n'
      << "beta = " << fmt12(p.beta) << '\n'
      << "noise_var = " << fmt12(p.aux.noise_var) << '\n';
}

// ---------------------------------------------------------------------------
// Codebook and protocol maps
// ---------------------------------------------------------------------------

/// size entries of length n drawn i.i.d. from N(0, var_u). Entry k, symbol j
/// is normal number k*n + j of the seed's stream 0.
class Codebook {
 public:
  Codebook(std::uint64_t size, std::size_t n, double var_u, std::uint64_t seed, unsigned threads = 1)
      : size_(size), n_(n), seed_(seed), data_(size * n) {
    if (size == 0 || n == 0) throw Error(ErrorCode::InvalidArgument, "codebook must be non-empty");
    const rng::CounterRng gen(seed, 0);
    const double sd = std::sqrt(var_u);
    parallel_for(data_.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) data_[i] = sd * gen.normal(i);
    });
  }

  /// Codebook with explicit entries (row-major, size x n).
  Codebook(std::vector<double> entries, std::size_t n) : n_(n), data_(std::move(entries)) {
    if (n == 0 || data_.empty() || data_.size() % n != 0) {
      throw Error(ErrorCode::InvalidArgument, "entries must be a non-empty multiple of n");
    }
    size_ = data_.size() / n;
  }

  std::span<const double> entry(std::uint64_t k) const { return {data_.data() + k * n_, n_}; }
  std::uint64_t size() const noexcept { return size_; }
  std::size_t n() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t size_ = 0;
  std::size_t n_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> data_;
};

/// Index of the entry maximising the block density ln p(u|x)/p(u); ties go to
/// the lowest index.
inline std::uint64_t quantize(const Codebook& codebook, std::span<const double> x, const InformationDensity& density) {
  if (x.size() != codebook.n()) throw Error(ErrorCode::InvalidArgument, "x length must match codebook");
  std::uint64_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < codebook.size(); ++k) {
    const auto u = codebook.entry(k);
    double score = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) score += density.ux(u[j], x[j]);
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

inline std::uint64_t quantize(const Codebook& codebook, std::span<const double> x, const AuxiliaryChannel& aux,
                              const GaussianDecomposition& dec) {
  return quantize(codebook, x, InformationDensity(dec, aux));
}

/// Bin index φ(q): seeded 2-universal hash Q -> C.
inline AffineHash bin_hash(const ProtocolPlan& p, std::uint64_t bin_seed) {
  return AffineHash::binning(p.size_q, p.size_c, bin_seed);
}

inline std::uint64_t bin_encode(const AffineHash& phi, std::uint64_t quantizer_index) { return phi(quantizer_index); }

/// Key f(q): seeded 2-universal hash Q -> S.
inline std::uint64_t privacy_amplify(const ProtocolPlan& p, std::uint64_t index, std::uint64_t hash_seed) {
  if (index >= p.size_q) throw Error(ErrorCode::InvalidArgument, "index outside Q");
  return AffineHash::from_seed(p.size_q, p.size_s, hash_seed)(index);
}

/// Members of each bin, in increasing index order (CSR layout).
class BinTable {
 public:
  BinTable(const AffineHash& phi, std::uint64_t size_q) : offsets_(phi.range() + 1, 0), members_(size_q) {
    for (std::uint64_t q = 0; q < size_q; ++q) ++offsets_[phi(q) + 1];
    for (std::size_t c = 1; c < offsets_.size(); ++c) offsets_[c] += offsets_[c - 1];
    std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::uint64_t q = 0; q < size_q; ++q) members_[cursor[phi(q)]++] = q;
  }

  std::span<const std::uint64_t> bin(std::uint64_t message) const {
    if (message + 1 >= offsets_.size()) return {};
    return {members_.data() + offsets_[message], offsets_[message + 1] - offsets_[message]};
  }

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint64_t> members_;
};

/// Bob's decoder ψ: maximum ln p(y|u)/p(y) inside the announced bin. Returns
/// nullopt when the bin is empty.
inline std::optional<std::uint64_t> try_decode(std::span<const std::uint64_t> candidates, const Codebook& codebook,
                                               std::span<const double> y, const InformationDensity& density) {
  if (candidates.empty()) return std::nullopt;
  std::uint64_t best = candidates.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::uint64_t k : candidates) {
    const auto u = codebook.entry(k);
    double score = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) score += density.yu(y[j], u[j]);
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

/// Scanning decoder; throws EmptyBin when no entry hashes to `message`.
inline std::uint64_t decode(const AffineHash& phi, const Codebook& codebook, std::uint64_t message,
                            std::span<const double> y, const InformationDensity& density) {
  if (y.size() != codebook.n()) throw Error(ErrorCode::InvalidArgument, "y length must match codebook");
  std::vector<std::uint64_t> candidates;
  for (std::uint64_t k = 0; k < codebook.size(); ++k) {
    if (phi(k) == message) candidates.push_back(k);
  }
  auto r = try_decode(candidates, codebook, y, density);
  if (!r) throw Error(ErrorCode::EmptyBin, "no codebook entry in bin " + std::to_string(message));
  return *r;
}

// ---------------------------------------------------------------------------
// Trials
// ---------------------------------------------------------------------------

struct ProtocolSeeds {
  std::uint64_t codebook = 0;
  std::uint64_t bin = 0;
  std::uint64_t hash = 0;
  std::uint64_t source = 0;

  static ProtocolSeeds from_master(std::uint64_t master) {
    return {rng::derive_seed(master, "codebook"), rng::derive_seed(master, "bin"), rng::derive_seed(master, "hash"),
            rng::derive_seed(master, "source")};
  }
};

struct Transcript {
  std::uint64_t quantizer_index = 0;
  std::uint64_t public_message = 0;
  std::uint64_t key_alice = 0;
  std::optional<std::uint64_t> decoded_index;
  std::optional<std::uint64_t> key_bob;
  bool empty_bin = false;
  bool in_t = false;
  bool in_a = false;
  bool in_b = false;

  /// Reconciliation succeeded: Bob recovered Alice's quantizer index (and so
  /// holds her key under every hash).
  bool agree() const { return decoded_index && *decoded_index == quantizer_index; }
  bool keys_equal() const { return key_bob && *key_bob == key_alice; }
};

/// Everything fixed across trials: plan, codebook, φ, f and Bob's bin table.
class ProtocolInstance {
 public:
  ProtocolInstance(const CovarianceTriple& sigma, const ProtocolPlan& p, const ProtocolSeeds& seeds,
                   unsigned threads = 1)
      : sigma_(validate(sigma)),
        plan_(p),
        seeds_(seeds),
        density_(decompose(sigma_), p.aux),
        codebook_(std::make_shared<const Codebook>(p.size_q, p.n, density_.var_u(), seeds.codebook, threads)),
        phi_(bin_hash(p, seeds.bin)),
        key_hash_(AffineHash::from_seed(p.size_q, p.size_s, seeds.hash)),
        bins_(std::make_shared<const BinTable>(phi_, p.size_q)) {}

  /// Same codebook, hashes and seeds with a different public alphabet. φ keeps
  /// its (p, a, b) so a multiple of size_c refines the original bins; an
  /// alphabet covering Q switches to the injective member.
  ProtocolInstance with_public_alphabet(std::uint64_t size_c) const {
    if (size_c == 0) throw Error(ErrorCode::InvalidArgument, "size_c must be >= 1");
    ProtocolInstance copy = *this;
    copy.plan_.size_c = size_c;
    copy.phi_ = size_c >= plan_.size_q ? AffineHash(plan_.size_q, size_c, 1, 0) : phi_.with_range(size_c);
    copy.bins_ = std::make_shared<const BinTable>(copy.phi_, plan_.size_q);
    return copy;
  }

  /// One run of quantize -> bin_encode -> decode -> privacy_amplify on
  /// source block number `trial`.
  Transcript run(std::uint64_t trial) const {
    const SourceBlock b = sample_block(sigma_, plan_.n, seeds_.source, trial);
    return run_on(b.x, b.y, b.z);
  }

  Transcript run_on(std::span<const double> x, std::span<const double> y, std::span<const double> z) const {
    Transcript tr;
    tr.quantizer_index = quantize(*codebook_, x, density_);
    const auto u = codebook_->entry(tr.quantizer_index);
    tr.in_t = density_.block_ux(u, x) <= plan_.t;
    tr.in_a = density_.block_yu(u, y) >= plan_.alpha;
    tr.in_b = density_.block_x_uz(u, x, z) >= plan_.beta;
    tr.public_message = bin_encode(phi_, tr.quantizer_index);
    tr.key_alice = key_hash_(tr.quantizer_index);
    tr.decoded_index = try_decode(bins_->bin(tr.public_message), *codebook_, y, density_);
    if (tr.decoded_index) {
      tr.key_bob = key_hash_(*tr.decoded_index);
    } else {
      tr.empty_bin = true;
    }
    return tr;
  }

  const ProtocolPlan& plan() const noexcept { return plan_; }
  const Codebook& codebook() const noexcept { return *codebook_; }
  const InformationDensity& density() const noexcept { return density_; }
  const AffineHash& bin_map() const noexcept { return phi_; }
  const AffineHash& key_map() const noexcept { return key_hash_; }
  const BinTable& bins() const noexcept { return *bins_; }
  const CovarianceTriple& sigma() const noexcept { return sigma_; }

 private:
  CovarianceTriple sigma_;
  ProtocolPlan plan_;
  ProtocolSeeds seeds_;
  InformationDensity density_;
  std::shared_ptr<const Codebook> codebook_;
  AffineHash phi_;
  AffineHash key_hash_;
  std::shared_ptr<const BinTable> bins_;
};

/// Single trial from explicit seeds.
inline Transcript run_trial(const CovarianceTriple& sigma, const ProtocolPlan& p, const ProtocolSeeds& seeds) {
  return ProtocolInstance(sigma, p, seeds).run(0);
}

inline std::vector<Transcript> run_batch(const ProtocolInstance& inst, std::size_t trials, unsigned threads = 1) {
  std::vector<Transcript> out(trials);
  parallel_for(trials, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) out[t] = inst.run(t);
  });
  return out;
}

struct BatchCounts {
  std::size_t trials = 0;
  std::size_t agree = 0;
  std::size_t keys_equal = 0;
  std::size_t empty_bin = 0;
  std::size_t in_t = 0;
  std::size_t in_a = 0;
  std::size_t in_b = 0;

  double rate(std::size_t count) const { return trials ? static_cast<double>(count) / static_cast<double>(trials) : 0.0; }
};

inline BatchCounts tally(std::span<const Transcript> transcripts) {
  BatchCounts c;
  c.trials = transcripts.size();
  for (const auto& t : transcripts) {
    c.agree += t.agree();
    c.keys_equal += t.keys_equal();
    c.empty_bin += t.empty_bin;
    c.in_t += t.in_t;
    c.in_a += t.in_a;
    c.in_b += t.in_b;
  }
  return c;
}

inline void write_trial_csv(std::ostream& out, std::span<const Transcript> transcripts) {
  out << "trial,agree,empty_bin,in_T,in_A,in_B\n";
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    const auto& t = transcripts[i];
    out << i << ',' << int{t.agree()} << ',' << int{t.empty_bin} << ',' << int{t.in_t} << ',' << int{t.in_a} << ','
        << int{t.in_b} << '\n';
  }
}

// ---------------------------------------------------------------------------
// Numeric bound estimates
// ---------------------------------------------------------------------------

/// Monte Carlo estimates of the quantities in the quantizer and bin-coding
/// error bounds, from i.i.d. draws of (U^n, X^n, Y^n, Z^n).
struct ErrorBoundEstimates {
  std::size_t samples = 0;
  double delta = 0.0;          ///< Pr{(U,Y) not in A or (U,X,Z) not in B}
  double not_in_t = 0.0;       ///< Pr{(U,X) not in T}
  double covering_term = 0.0;  ///< exp{-|Q| e^{-tn}}
  double binning_term = 0.0;   ///< |Q|/|C| e^{-alpha n}

  double quantizer_bound() const { return 2.0 * std::sqrt(delta) + not_in_t + covering_term; }
  /// Bin-coding bound given a measured Pr{(g(X),Y) not in A}.
  double binning_bound(double quantized_not_in_a) const { return binning_term + quantized_not_in_a; }
};

inline ErrorBoundEstimates estimate_error_bounds(const CovarianceTriple& sigma, const ProtocolPlan& p,
                                           std::size_t samples, std::uint64_t seed, unsigned threads = 1) {
  const InformationDensity density(decompose(validate(sigma)), p.aux);
  const double sd_w = std::sqrt(p.aux.noise_var);
  std::vector<unsigned char> miss_ab(samples), miss_t(samples);
  parallel_for(samples, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> u(p.n);
    for (std::size_t s = begin; s < end; ++s) {
      const SourceBlock b = sample_block(sigma, p.n, seed, 2 * s);
      const rng::CounterRng noise(seed, 2 * s + 1);
      for (std::size_t j = 0; j < p.n; ++j) u[j] = b.x[j] + sd_w * noise.normal(j);
      miss_t[s] = density.block_ux(u, b.x) > p.t;
      miss_ab[s] = density.block_yu(u, b.y) < p.alpha || density.block_x_uz(u, b.x, b.z) < p.beta;
    }
  });
  ErrorBoundEstimates e;
  e.samples = samples;
  std::size_t ab = 0, t = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    ab += miss_ab[s];
    t += miss_t[s];
  }
  const double nd = static_cast<double>(p.n);
  e.delta = samples ? static_cast<double>(ab) / static_cast<double>(samples) : 0.0;
  e.not_in_t = samples ? static_cast<double>(t) / static_cast<double>(samples) : 0.0;
  e.covering_term = std::exp(-static_cast<double>(p.size_q) * std::exp(-p.t * nd));
  e.binning_term = static_cast<double>(p.size_q) / static_cast<double>(p.size_c) * std::exp(-p.alpha * nd);
  return e;
}

// ---------------------------------------------------------------------------
// Scalar quantizer mode (heuristic)
// ---------------------------------------------------------------------------

/// Per-symbol dithered uniform quantizer with modulo binning. Bob resolves
/// the coset using his linear estimate of X from Y. No claim of reaching the
/// optimal trade-off is made for this mode.
struct ScalarQuantizer {
  double step = 0.25;
  std::int64_t modulus = 16;
};

struct ScalarTranscript {
  bool agree = false;
  std::size_t symbol_errors = 0;
  std::uint64_t key_alice = 0;
  std::uint64_t key_bob = 0;
};

namespace detail {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t reduce61(unsigned __int128 v) {
  std::uint64_t r = static_cast<std::uint64_t>(v & kMersenne61) + static_cast<std::uint64_t>(v >> 61);
  r = (r & kMersenne61) + (r >> 61);
  return r >= kMersenne61 ? r - kMersenne61 : r;
}

/// Multilinear hash of an integer sequence over GF(2^61 - 1).
inline std::uint64_t multilinear_key(std::span<const std::int64_t> symbols, const rng::CounterRng& coeffs) {
  std::uint64_t acc = coeffs.bits(0) % kMersenne61;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const std::uint64_t a = coeffs.bits(i + 1) % kMersenne61;
    const std::uint64_t v = static_cast<std::uint64_t>(symbols[i]) % kMersenne61;
    acc = reduce61(static_cast<unsigned __int128>(acc) + static_cast<unsigned __int128>(a) * v);
  }
  return acc;
}

}  // namespace detail

inline ScalarTranscript run_scalar_trial(const CovarianceTriple& sigma, const ScalarQuantizer& q, std::size_t n,
                                         const ProtocolSeeds& seeds, std::uint64_t trial) {
  if (!(q.step > 0.0) || q.modulus < 1) throw Error(ErrorCode::InvalidArgument, "bad scalar quantizer");
  const SourceBlock b = sample_block(sigma, n, seeds.source, trial);
  const rng::CounterRng dither(seeds.bin, trial);
  const rng::CounterRng coeffs(seeds.hash, 0);
  const double slope = sigma.sigma_xy / sigma.sigma_y;
  const auto m = static_cast<double>(q.modulus);

  std::vector<std::int64_t> alice(n), bob(n);
  ScalarTranscript tr;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (dither.uniform(i) - 0.5) * q.step;
    alice[i] = static_cast<std::int64_t>(std::llround((b.x[i] + d) / q.step));
    const std::int64_t coset = ((alice[i] % q.modulus) + q.modulus) % q.modulus;
    const double target = (slope * b.y[i] + d) / q.step;
    bob[i] = coset + q.modulus * static_cast<std::int64_t>(std::llround((target - static_cast<double>(coset)) / m));
    tr.symbol_errors += alice[i] != bob[i];
  }
  tr.agree = tr.symbol_errors == 0;
  tr.key_alice = detail::multilinear_key(alice, coeffs);
  tr.key_bob = detail::multilinear_key(bob, coeffs);
  return tr;
}

}  // namespace gausskey
