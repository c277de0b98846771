#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "gausskey/config.hpp"
#include "gausskey/covariance.hpp"
#include "gausskey/error.hpp"
#include "gausskey/format.hpp"
#include "gausskey/protocol.hpp"
#include "gausskey/rate_region.hpp"
#include "gausskey/rng.hpp"
#include "gausskey/surrogate.hpp"

// Subcommand bodies. Each is a pure function of (config, master seed) to the
// bytes it writes; the thread count never changes the output.

namespace gausskey::commands {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kValidation = 2,
  kInfeasible = 3,
};

inline constexpr double kDefaultGamma = 0.05;
inline constexpr std::size_t kDefaultCodebookN = 12;
inline constexpr std::size_t kDefaultScalarN = 10000;

/// Maps an error to its exit status and prints the error name on `err`.
inline int report_error(const Error& e, std::ostream& err) {
  err << "error: " << e.name() << ": " << e.what() << '\n';
  switch (e.code()) {
    case ErrorCode::KeyRateNonpositive:
    case ErrorCode::CodebookTooLarge:
      return kInfeasible;
    default:
      return kValidation;
  }
}

inline unsigned threads_of(const Config& cfg) { return static_cast<unsigned>(cfg.get_uint("threads", 1)); }
inline std::uint64_t seed_of(const Config& cfg) { return cfg.get_uint("seed", 0); }
inline RateUnit units_of(const Config& cfg) { return parse_rate_unit(cfg.get_string("units", "nats")); }

/// `region`: tradeoff CSV on `out`.
inline int region(const Config& cfg, std::ostream& out, std::ostream& err) {
  try {
    const CovarianceTriple sigma = covariance_from_config(cfg);
    const RateUnit unit = units_of(cfg);
    const std::vector<double> grid = cfg.get_list("grid");
    const TradeoffCurve curve = tradeoff_curve(sigma, grid);
    if (curve.cls == DegradednessClass::Useless) {
      err << "warning: rho2_xy <= rho2_xz (USELESS); key rate is 0 at every public rate\n";
    }
    write_tradeoff_csv(out, curve, unit);
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

/// `decompose`: coefficients and conditional variances of the linear model.
inline int decompose(const Config& cfg, std::ostream& out, std::ostream& err) {
  try {
    const GaussianDecomposition d = gausskey::decompose(validate(covariance_from_config(cfg)));
    const RateUnit unit = units_of(cfg);
    out << "k_xz = " << fmt12(d.k_xz) << '\n'
        << "k_yx = " << fmt12(d.k_yx) << '\n'
        << "k_yz = " << fmt12(d.k_yz) << '\n'
        << "var_w1 = " << fmt12(d.var_w1) << '\n'
        << "var_w2 = " << fmt12(d.var_w2) << '\n'
        << "cond_var_x_given_z = " << fmt12(d.cond_var_x_given_z) << '\n'
        << "cond_var_y_given_z = " << fmt12(d.cond_var_y_given_z) << '\n'
        << "cond_var_y_given_xz = " << fmt12(d.cond_var_y_given_xz) << '\n'
        << "i_xy_given_z_" << unit_suffix(unit) << " = " << fmt12(convert_rate(key_rate_upper_bound(d), unit))
        << '\n';
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

/// `classify`: degradation class and, when degradable, the reduced triple.
inline int classify(const Config& cfg, std::ostream& out, std::ostream& err) {
  try {
    const DegradednessReport r = classify_and_reduce(validate(covariance_from_config(cfg)));
    out << "rho2_xy = " << fmt12(r.rho2_xy) << '\n'
        << "rho2_xz = " << fmt12(r.rho2_xz) << '\n'
        << "class = " << to_string(r.cls) << '\n';
    if (r.reduced) {
      const auto& c = *r.reduced;
      out << "reduced.sigma_x = " << fmt12(c.sigma_x) << '\n'
          << "reduced.sigma_y = " << fmt12(c.sigma_y) << '\n'
          << "reduced.sigma_z = " << fmt12(c.sigma_z) << '\n'
          << "reduced.sigma_xy = " << fmt12(c.sigma_xy) << '\n'
          << "reduced.sigma_xz = " << fmt12(c.sigma_xz) << '\n'
          << "reduced.sigma_yz = " << fmt12(c.sigma_yz) << '\n'
          << "reduced.noise_var = " << fmt12(*r.reduced_noise_var) << '\n';
    } else {
      err << "warning: USELESS triple; key rate is 0 at every public rate\n";
    }
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

namespace detail {

/// Degraded triple to simulate on: the reduction preserves the (X,Y) and
/// (X,Z) laws that a one-way protocol's error and leakage depend on.
inline CovarianceTriple simulation_triple(const Config& cfg) {
  const DegradednessReport r = classify_and_reduce(validate(covariance_from_config(cfg)));
  if (r.cls == DegradednessClass::Useless) {
    throw Error(ErrorCode::KeyRateNonpositive, "USELESS triple admits no positive key rate");
  }
  return *r.reduced;
}

inline AuxiliaryChannel auxiliary_of(const Config& cfg, const GaussianDecomposition& dec) {
  if (cfg.has("noise_var")) {
    const double nv = cfg.get_double("noise_var");
    if (!(nv > 0.0)) throw Error(ErrorCode::InvalidArgument, "noise_var must be > 0");
    return AuxiliaryChannel{nv};
  }
  return design_auxiliary_noise(dec, cfg.get_double("r_p", 0.5));
}

inline double binomial_se(double p, std::size_t trials) {
  return trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
}

}  // namespace detail

/// `simulate`: trial CSV on `csv` (if non-null) and a `key = value` summary on
/// `summary`.
inline int simulate(const Config& cfg, std::ostream& summary, std::ostream* csv, std::ostream& err) {
  try {
    const CovarianceTriple sigma = detail::simulation_triple(cfg);
    const GaussianDecomposition dec = gausskey::decompose(sigma);
    const AuxiliaryChannel aux = detail::auxiliary_of(cfg, dec);
    const MutualInformations mi = gaussian_mutual_informations(dec, aux);
    const std::uint64_t master = seed_of(cfg);
    const ProtocolSeeds seeds = ProtocolSeeds::from_master(master);
    const std::size_t trials = cfg.get_uint("trials", 1000);
    const unsigned threads = threads_of(cfg);
    const RateUnit unit = units_of(cfg);
    const std::string mode = cfg.get_string("mode", "codebook");
    auto rate = [unit](double nats) { return fmt12(convert_rate(nats, unit)); };
    const std::string sfx = "_" + std::string(unit_suffix(unit));

    if (mode == "scalar") {
      const std::size_t n = cfg.get_uint("n", kDefaultScalarN);
      ScalarQuantizer q;
      q.step = cfg.get_double("scalar_step", 0.25 * std::sqrt(sigma.sigma_x));
      q.modulus = static_cast<std::int64_t>(cfg.get_uint("scalar_modulus", 16));
      std::vector<ScalarTranscript> results(trials);
      parallel_for(trials, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t t = b; t < e; ++t) results[t] = run_scalar_trial(sigma, q, n, seeds, t);
      });
      std::size_t agree = 0, keys = 0, symbol_errors = 0;
      for (const auto& r : results) {
        agree += r.agree;
        keys += r.key_alice == r.key_bob;
        symbol_errors += r.symbol_errors;
      }
      if (csv) {
        *csv << "trial,agree,symbol_errors\n";
        for (std::size_t t = 0; t < trials; ++t) {
          *csv << t << ',' << int{results[t].agree} << ',' << results[t].symbol_errors << '\n';
        }
      }
      const double td = static_cast<double>(trials);
      summary << "mode = scalar\n"
              << "heuristic = 1\n"
              << "n = " << n << '\n'
              << "trials = " << trials << '\n'
              << "scalar_step = " << fmt12(q.step) << '\n'
              << "scalar_modulus = " << q.modulus << '\n'
              << "agreement_rate = " << fmt12(trials ? agree / td : 0.0) << '\n'
              << "key_agreement_rate = " << fmt12(trials ? keys / td : 0.0) << '\n'
              << "symbol_error_rate = " << fmt12(trials ? symbol_errors / (td * static_cast<double>(n)) : 0.0) << '\n'
              << "public_rate" << sfx << " = " << rate(std::log(static_cast<double>(q.modulus))) << '\n'
              << "target_public_rate" << sfx << " = " << rate(mi.i_ux_given_y) << '\n'
              << "target_key_rate" << sfx << " = " << rate(optimal_key_rate(dec, mi.i_ux_given_y)) << '\n';
      return kOk;
    }
    if (mode != "codebook") throw Error(ErrorCode::ConfigError, "mode must be 'codebook' or 'scalar'");

    const std::size_t n = cfg.get_uint("n", kDefaultCodebookN);
    const double gamma = cfg.get_double("gamma", kDefaultGamma);
    PlanLimits limits;
    limits.max_codebook = cfg.get_uint("max_codebook", limits.max_codebook);
    ProtocolPlan p = plan(dec, aux, n, gamma, limits);
    if (cfg.has("size_c")) {
      const std::string v = cfg.get_string("size_c", "");
      p.size_c = v == "size_q" ? p.size_q : cfg.get_uint("size_c", p.size_c);
      if (p.size_c == 0) throw Error(ErrorCode::InvalidArgument, "size_c must be >= 1");
    }

    const ProtocolInstance inst(sigma, p, seeds, threads);
    const std::vector<Transcript> transcripts = run_batch(inst, trials, threads);
    const BatchCounts counts = tally(transcripts);
    if (csv) write_trial_csv(*csv, transcripts);

    const std::size_t bound_samples = cfg.get_uint("bound_samples", trials);
    const ErrorBoundEstimates est =
        estimate_error_bounds(sigma, p, bound_samples, rng::derive_seed(master, "bounds"), threads);
    const double not_in_a = 1.0 - counts.rate(counts.in_a);
    const double agreement = counts.rate(counts.agree);
    const double floor = 1.0 - est.quantizer_bound() - est.binning_bound(not_in_a) -
                         3.0 * detail::binomial_se(agreement, trials);

    summary << "mode = codebook\n"
            << "n = " << p.n << '\n'
            << "gamma = " << fmt12(p.gamma) << '\n'
            << "trials = " << trials << '\n'
            << "size_q = " << p.size_q << '\n'
            << "size_c = " << p.size_c << '\n'
            << "size_s = " << p.size_s << '\n'
            << "noise_var = " << fmt12(aux.noise_var) << '\n'
            << "agreement_rate = " << fmt12(agreement) << '\n'
            << "key_agreement_rate = " << fmt12(counts.rate(counts.keys_equal)) << '\n'
            << "empty_bin_rate = " << fmt12(counts.rate(counts.empty_bin)) << '\n'
            << "in_T_rate = " << fmt12(counts.rate(counts.in_t)) << '\n'
            << "in_A_rate = " << fmt12(counts.rate(counts.in_a)) << '\n'
            << "in_B_rate = " << fmt12(counts.rate(counts.in_b)) << '\n'
            << "public_rate" << sfx << " = " << rate(p.public_rate()) << '\n'
            << "key_rate" << sfx << " = " << rate(p.key_rate()) << '\n'
            << "target_public_rate" << sfx << " = " << rate(mi.i_ux_given_y) << '\n'
            << "target_key_rate" << sfx << " = " << rate(optimal_key_rate(dec, mi.i_ux_given_y)) << '\n'
            << "quantizer_bound = " << fmt12(est.quantizer_bound()) << '\n'
            << "binning_bound = " << fmt12(est.binning_bound(not_in_a)) << '\n'
            << "agreement_floor = " << fmt12(floor) << '\n';
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

/// `oracle`: exact privacy-amplification check on a discretised surrogate.
/// Exit 0 iff the hash-averaged bound holds.
inline int oracle(const Config& cfg, std::ostream& out, std::ostream& err) {
  try {
    const CovarianceTriple sigma = validate(covariance_from_config(cfg));
    const GaussianDecomposition dec = gausskey::decompose(sigma);
    const AuxiliaryChannel aux = detail::auxiliary_of(cfg, dec);
    const std::size_t cells = cfg.get_uint("cells", 4);
    const std::size_t block = cfg.get_uint("block_n", 2);
    const std::size_t size_c = cfg.get_uint("size_c", 4);
    const std::size_t size_s = cfg.get_uint("size_s", 2);
    const std::size_t trials = cfg.get_uint("trials", 0);
    const std::uint64_t master = seed_of(cfg);
    if (size_c == 0 || size_s == 0) throw Error(ErrorCode::InvalidArgument, "size_c and size_s must be >= 1");

    const DiscreteSurrogate s = discretize(sigma, aux, cells, block);
    const SurrogateCode code = make_surrogate_code(s, size_c, rng::derive_seed(master, "bin"));
    const double mi_ux_z = surrogate_mi_ux_given_z(s);
    const double beta = cfg.has("beta") ? cfg.get_double("beta") : mi_ux_z - cfg.get_double("beta_offset", 0.1);

    const PrivacyAmplificationReport r =
        verify_pa_lemma(s, code, size_s, beta, trials, rng::derive_seed(master, "hash"), threads_of(cfg));
    const AffineHash f = AffineHash::from_seed(code.size_q(), size_s, rng::derive_seed(master, "hash"));
    const SecurityMetrics m = exact_security(s, code, hash_table(f, code.size_q()), size_s);

    out << "cells = " << cells << '\n'
        << "block_n = " << block << '\n'
        << "size_q = " << code.size_q() << '\n'
        << "size_c = " << size_c << '\n'
        << "size_s = " << size_s << '\n'
        << "noise_var = " << fmt12(aux.noise_var) << '\n'
        << "i_ux_given_z = " << fmt12(mi_ux_z) << '\n'
        << "beta = " << fmt12(beta) << '\n';
    write_pa_report(out, r);
    out << "seeded_hash.mu = " << fmt12(m.mu_exact) << '\n'
        << "seeded_hash.nu = " << fmt12(m.nu_exact) << '\n'
        << "seeded_hash.epsilon = " << fmt12(m.epsilon_exact) << '\n';
    return r.average_holds ? kOk : kCheckFailed;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

}  // namespace gausskey::commands
