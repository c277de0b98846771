#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "gausskey/protocol.hpp"
#include "gausskey/source_sim.hpp"
#include "gausskey/surrogate.hpp"
#include "test_support.hpp"

using namespace gausskey;
using gausskey::testing::worked_triple;

namespace {

const GaussianDecomposition& worked() {
  static const GaussianDecomposition d = decompose(worked_triple());
  return d;
}

const AuxiliaryChannel& worked_aux() {
  static const AuxiliaryChannel a = design_auxiliary_noise(worked(), 0.5);
  return a;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::InvalidArgument;
}

double se(double p, std::size_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

}  // namespace

TEST(InformationDensity, SingleSymbolAtOrigin) {
  const InformationDensity d(worked(), worked_aux());
  const double nv = worked_aux().noise_var;
  EXPECT_NEAR(d.ux(0, 0), 0.5 * std::log((1 + nv) / nv), 1e-14);
  const std::vector<double> zero{0.0};
  EXPECT_DOUBLE_EQ(info_density_ux(zero, zero, worked_aux(), worked()), d.ux(0, 0));
  // Matches the explicit density ratio.
  const double u = 0.3, x = -0.7, y = 0.2, z = 1.1;
  EXPECT_NEAR(d.ux(u, x), numeric::log_normal_pdf(u, x, nv) - numeric::log_normal_pdf(u, 0, 1 + nv), 1e-13);
  EXPECT_THROW(d.block_ux(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), Error);
  (void)y;
  (void)z;
}

TEST(InformationDensity, ConcentratesAtMutualInformation) {
  const std::size_t n = 100000;
  const auto b = sample_block(worked_triple(), n, 3);
  const rng::CounterRng noise(4, 0);
  std::vector<double> u(n), indep(n);
  const double sd = std::sqrt(worked_aux().noise_var);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = b.x[i] + sd * noise.normal(i);
    indep[i] = std::sqrt(1 + worked_aux().noise_var) * noise.normal(n + i + (n & 1));
  }
  const InformationDensity d(worked(), worked_aux());
  const auto mi = gaussian_mutual_informations(worked(), worked_aux());
  EXPECT_NEAR(d.block_ux(u, b.x), mi.i_ux, 0.01);
  EXPECT_NEAR(d.block_yu(u, b.y), mi.i_uy, 0.01);
  EXPECT_NEAR(d.block_x_uz(u, b.x, b.z), mi.i_ux_given_z, 0.01);
  EXPECT_LT(d.block_ux(indep, b.x), 0.01);
  const auto p = plan(worked(), worked_aux(), 12, 0.05);
  EXPECT_LT(d.block_ux(indep, b.x), p.t);
}

TEST(InformationDensity, MeansWithinThreeStandardErrors) {
  const std::size_t n = 20000;
  const auto b = sample_block(worked_triple(), n, 12);
  const rng::CounterRng noise(13, 0);
  const InformationDensity d(worked(), worked_aux());
  const auto mi = gaussian_mutual_informations(worked(), worked_aux());
  std::vector<double> s1(n), s2(n), s3(n);
  const double sd = std::sqrt(worked_aux().noise_var);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = b.x[i] + sd * noise.normal(i);
    s1[i] = d.ux(u, b.x[i]);
    s2[i] = d.yu(b.y[i], u);
    s3[i] = d.x_uz(b.x[i], u, b.z[i]);
  }
  auto check = [n](const std::vector<double>& v, double target) {
    double m = 0, q = 0;
    for (double x : v) m += x;
    m /= static_cast<double>(n);
    for (double x : v) q += (x - m) * (x - m);
    const double sem = std::sqrt(q / static_cast<double>(n - 1) / static_cast<double>(n));
    EXPECT_LT(std::abs(m - target), 3 * sem) << m << " vs " << target;
  };
  check(s1, mi.i_ux);
  check(s2, mi.i_uy);
  check(s3, mi.i_ux_given_z);
}

TEST(InformationDensity, TailsDecayExponentiallyOnSurrogate) {
  // Single-letter law of (U, X) from a 4-cell surrogate. The frequency of
  // block averages exceeding I(U;X) + eps must stay under the Chernoff bound
  // exp(-n sup_l [l (I + eps) - ln E e^{l i}]) and fall with n.
  const auto s = discretize(worked_triple(), worked_aux(), 4, 1);
  const std::size_t c = 4;
  std::vector<double> pux(c * c, 0.0), pu(c, 0.0), px(c, 0.0);
  for (std::size_t u = 0; u < c; ++u)
    for (std::size_t x = 0; x < c; ++x)
      for (std::size_t y = 0; y < c; ++y)
        for (std::size_t z = 0; z < c; ++z) pux[u * c + x] += s(u, x, y, z);
  for (std::size_t u = 0; u < c; ++u)
    for (std::size_t x = 0; x < c; ++x) {
      pu[u] += pux[u * c + x];
      px[x] += pux[u * c + x];
    }
  std::vector<double> val(c * c), cdf(c * c);
  double mi = 0.0, acc = 0.0;
  for (std::size_t k = 0; k < c * c; ++k) {
    val[k] = std::log(pux[k] / (pu[k / c] * px[k % c]));
    mi += pux[k] * val[k];
    acc += pux[k];
    cdf[k] = acc;
  }
  const double level = mi + 0.15;
  double rate = 0.0;
  for (double l = 0.01; l < 20.0; l += 0.01) {
    double mgf = 0.0;
    for (std::size_t k = 0; k < c * c; ++k) mgf += pux[k] * std::exp(l * val[k]);
    rate = std::max(rate, l * level - std::log(mgf));
  }
  ASSERT_GT(rate, 0.0);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0.0, acc);
  const std::size_t samples = 200000;
  double prev = 1.0;
  for (std::size_t n : {8U, 16U, 32U, 64U}) {
    std::size_t hits = 0;
    for (std::size_t t = 0; t < samples; ++t) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = unif(rng);
        std::size_t k = 0;
        while (k + 1 < c * c && cdf[k] < r) ++k;
        sum += val[k];
      }
      hits += sum / static_cast<double>(n) > level;
    }
    const double freq = static_cast<double>(hits) / samples;
    const double chernoff = std::exp(-static_cast<double>(n) * rate);
    EXPECT_LE(freq, chernoff + 3 * se(chernoff, samples)) << n;
    EXPECT_LT(freq, prev) << n;
    prev = std::max(freq, 1.0 / samples);
  }
}

TEST(Plan, WorkedTripleSizes) {
  const auto p = plan(worked(), worked_aux(), 12, 0.05);
  EXPECT_EQ(p.size_q, 122904U);
  EXPECT_EQ(p.size_c, 4448U);
  EXPECT_EQ(p.size_s, 1U);
  EXPECT_NEAR(p.t, 0.8765963779363903 + 0.05, 1e-12);
  EXPECT_NEAR(p.alpha, 0.3765963779363903 - 0.05, 1e-12);
  EXPECT_NEAR(p.beta, 0.8765963779363903 - 0.07094586341895237 - 0.05, 1e-12);
  std::ostringstream out;
  write_plan(out, p);
  EXPECT_NE(out.str().find("size_q = 122904\n"), std::string::npos);
}

TEST(Plan, GammaNearSecrecyLimit) {
  const auto mi = gaussian_mutual_informations(worked(), worked_aux());
  const double limit = (mi.i_uy - mi.i_uz) / 6.0;
  EXPECT_EQ(plan(worked(), worked_aux(), 12, limit * (1 - 1e-9)).size_s, 1U);
  EXPECT_EQ(code_of([&] { plan(worked(), worked_aux(), 12, limit * (1 + 1e-9)); }), ErrorCode::KeyRateNonpositive);
  EXPECT_EQ(code_of([&] { plan(worked(), worked_aux(), 12, 0.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { plan(worked(), worked_aux(), 0, 0.05); }), ErrorCode::InvalidArgument);
}

TEST(Plan, CodebookCap) {
  EXPECT_EQ(code_of([&] { plan(worked(), worked_aux(), 20, 0.05); }), ErrorCode::CodebookTooLarge);
  PlanLimits tight;
  tight.max_codebook = 1000;
  EXPECT_EQ(code_of([&] { plan(worked(), worked_aux(), 12, 0.05, tight); }), ErrorCode::CodebookTooLarge);
}

TEST(Plan, LogSizesScaleWithN) {
  const auto mi = gaussian_mutual_informations(worked(), worked_aux());
  const double gamma = 0.01;
  for (std::size_t n : {3U, 5U, 8U}) {
    PlanLimits big;
    big.max_codebook = std::uint64_t{1} << 40;
    const auto p = plan(worked(), worked_aux(), n, gamma, big);
    const auto p2 = plan(worked(), worked_aux(), 2 * n, gamma, big);
    const double eq = mi.i_ux + 2 * gamma, ec = mi.i_ux - mi.i_uy + 4 * gamma;
    // ceil adds at most ln 2 to a log-size when the exponent is >= 0.
    EXPECT_NEAR(std::log(static_cast<double>(p2.size_q)), 2 * std::log(static_cast<double>(p.size_q)), 2 * std::log(2.0));
    EXPECT_LE(std::log(static_cast<double>(p.size_q)) - static_cast<double>(n) * eq, std::log(2.0));
    EXPECT_LE(p.public_rate(), ec + 1.0 / static_cast<double>(n));
    EXPECT_LE(p2.public_rate(), ec + 1.0 / static_cast<double>(2 * n));
    EXPECT_LE(p.key_rate(), mi.i_uy - mi.i_uz - 6 * gamma + 1e-12);
  }
}

TEST(Quantize, PicksGeneratingEntry) {
  const std::size_t n = 6;
  const auto x = sample_block(worked_triple(), n, 1).x;
  std::vector<double> entries;
  for (int k = 0; k < 5; ++k)
    for (std::size_t j = 0; j < n; ++j) entries.push_back(k == 3 ? x[j] : 10.0 + k);
  const Codebook cb(entries, n);
  const AuxiliaryChannel tiny{1e-3};
  EXPECT_EQ(quantize(cb, x, tiny, worked()), 3U);
}

TEST(Quantize, SingleEntryAndTies) {
  const std::vector<double> x{0.5, -0.5};
  EXPECT_EQ(quantize(Codebook(std::vector<double>{9.0, 9.0}, 2), x, worked_aux(), worked()), 0U);
  const Codebook twins(std::vector<double>{7.0, 7.0, 0.4, -0.4, 0.4, -0.4}, 2);
  EXPECT_EQ(quantize(twins, x, worked_aux(), worked()), 1U);
}

TEST(Quantize, CodebookDeterministicAcrossThreads) {
  const Codebook a(500, 8, 1.2, 77, 1), b(500, 8, 1.2, 77, 3);
  for (std::uint64_t k = 0; k < 500; ++k) {
    ASSERT_TRUE(std::equal(a.entry(k).begin(), a.entry(k).end(), b.entry(k).begin()));
  }
}

TEST(Quantize, SetMembershipMeetsBoundEstimate) {
  // n = 8 with |Q| = 64: fraction of trials whose selected codeword is jointly
  // typical in all three senses, against 1 - (quantizer bound).
  ProtocolPlan p = plan(worked(), worked_aux(), 8, 0.05);
  p.size_q = 64;
  p.size_c = 64;
  const auto inst = ProtocolInstance(worked_triple(), p, ProtocolSeeds::from_master(5));
  const std::size_t trials = 1000;
  std::size_t good = 0;
  for (const auto& t : run_batch(inst, trials)) good += t.in_t && t.in_a && t.in_b;
  const auto est = estimate_error_bounds(worked_triple(), p, trials, 6);
  const double rate = static_cast<double>(good) / trials;
  EXPECT_GE(rate, 1.0 - est.quantizer_bound() - 3 * se(rate, trials));
}

TEST(Binning, EncodeExtremes) {
  ProtocolPlan p = plan(worked(), worked_aux(), 12, 0.05);
  p.size_c = 1;
  const auto constant = bin_hash(p, 3);
  for (std::uint64_t q = 0; q < 1000; ++q) ASSERT_EQ(bin_encode(constant, q), 0U);
  p.size_c = p.size_q;
  const auto injective = bin_hash(p, 3);
  std::vector<char> seen(p.size_q, 0);
  for (std::uint64_t q = 0; q < p.size_q; ++q) {
    const auto m = bin_encode(injective, q);
    ASSERT_LT(m, p.size_q);
    ASSERT_FALSE(seen[m]);
    seen[m] = 1;
  }
}

TEST(Binning, OccupancyBalanced) {
  ProtocolPlan p = plan(worked(), worked_aux(), 12, 0.05);
  p.size_c = 64;
  const auto phi = bin_hash(p, 1234);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint64_t> idx(0, p.size_q - 1);
  std::vector<int> occ(64, 0);
  for (int i = 0; i < 10000; ++i) ++occ[bin_encode(phi, idx(rng))];
  const auto [lo, hi] = std::minmax_element(occ.begin(), occ.end());
  ASSERT_GT(*lo, 0);
  EXPECT_LE(static_cast<double>(*hi) / *lo, 2.0);
}

TEST(Decode, SingletonBinAndEmptyBin) {
  const std::size_t n = 4;
  const Codebook cb(std::vector<double>{1, 1, 1, 1, -1, -1, -1, -1, 0, 0, 0, 0}, n);
  const InformationDensity d(worked(), worked_aux());
  const std::vector<double> y{-1, -1, -1, -1};
  // Range 4 over 3 indices with the identity member: bin k holds only k.
  const AffineHash identity(3, 4, 1, 0);
  EXPECT_EQ(decode(identity, cb, 0, y, d), 0U);
  EXPECT_EQ(decode(identity, cb, 1, y, d), 1U);
  EXPECT_EQ(code_of([&] { decode(identity, cb, 3, y, d); }), ErrorCode::EmptyBin);
  const AffineHash one(3, 1, 1, 0);
  EXPECT_EQ(decode(one, cb, 0, y, d), 1U);
  const BinTable table(identity, 3);
  EXPECT_TRUE(table.bin(3).empty());
  EXPECT_FALSE(try_decode(table.bin(3), cb, y, d).has_value());
}

TEST(Decode, ErrorBelowBinningBound) {
  const auto p = plan(worked(), worked_aux(), 12, 0.05);
  const ProtocolInstance inst(worked_triple(), p, ProtocolSeeds::from_master(99));
  const std::size_t trials = 1000;
  const auto counts = tally(run_batch(inst, trials));
  const auto est = estimate_error_bounds(worked_triple(), p, trials, 100);
  const double err = 1.0 - counts.rate(counts.agree);
  const double not_in_a = 1.0 - counts.rate(counts.in_a);
  EXPECT_LE(err, est.binning_bound(not_in_a) + 3 * se(err, trials));
}

TEST(PrivacyAmplify, DeterministicAndRanged) {
  ProtocolPlan p = plan(worked(), worked_aux(), 12, 0.05);
  for (std::uint64_t q = 0; q < 100; ++q) ASSERT_EQ(privacy_amplify(p, q, 5), 0U);
  p.size_s = 16;
  for (std::uint64_t q = 0; q < 1000; ++q) {
    ASSERT_LT(privacy_amplify(p, q, 5), 16U);
    ASSERT_EQ(privacy_amplify(p, q, 5), privacy_amplify(p, q, 5));
  }
  EXPECT_THROW(privacy_amplify(p, p.size_q, 5), Error);
}

TEST(Trial, InjectiveBinningAlwaysAgrees) {
  ProtocolPlan p = plan(worked(), worked_aux(), 12, 0.05);
  p.size_c = p.size_q;
  p.size_s = 8;
  const ProtocolInstance inst(worked_triple(), p, ProtocolSeeds::from_master(3));
  for (const auto& t : run_batch(inst, 200)) {
    ASSERT_TRUE(t.agree());
    ASSERT_TRUE(t.keys_equal());
  }
}

TEST(Trial, DeterministicAndKeyIdentity) {
  ProtocolPlan p = plan(worked(), worked_aux(), 12, 0.05);
  p.size_s = 32;
  const auto seeds = ProtocolSeeds::from_master(17);
  const auto a = run_trial(worked_triple(), p, seeds);
  const auto b = run_trial(worked_triple(), p, seeds);
  EXPECT_EQ(a.quantizer_index, b.quantizer_index);
  EXPECT_EQ(a.public_message, b.public_message);
  EXPECT_EQ(a.decoded_index, b.decoded_index);

  const ProtocolInstance inst(worked_triple(), p, seeds);
  const auto one = run_batch(inst, 300, 1);
  const auto many = run_batch(inst, 300, 4);
  for (std::size_t i = 0; i < one.size(); ++i) {
    ASSERT_EQ(one[i].quantizer_index, many[i].quantizer_index);
    ASSERT_EQ(one[i].decoded_index, many[i].decoded_index);
    if (one[i].agree()) {
      ASSERT_TRUE(one[i].keys_equal());
    }
    ASSERT_EQ(one[i].key_alice, privacy_amplify(p, one[i].quantizer_index, seeds.hash));
  }
}

TEST(Trial, LargerPublicAlphabetNeverHurts) {
  const auto p = plan(worked(), worked_aux(), 12, 0.05);
  const ProtocolInstance base(worked_triple(), p, ProtocolSeeds::from_master(21));
  const auto wide = base.with_public_alphabet(4 * p.size_c);
  const auto a = run_batch(base, 300);
  const auto b = run_batch(wide, 300);
  std::size_t ca = 0, cb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].quantizer_index, b[i].quantizer_index);
    if (a[i].agree()) {
      ASSERT_TRUE(b[i].agree()) << i;
    }
    ca += a[i].agree();
    cb += b[i].agree();
  }
  EXPECT_GT(cb, ca);
}

TEST(Trial, CsvLayout) {
  std::vector<Transcript> ts(2);
  ts[0].decoded_index = 0;
  ts[0].in_a = true;
  ts[1].quantizer_index = 4;
  ts[1].empty_bin = true;
  std::ostringstream out;
  write_trial_csv(out, ts);
  EXPECT_EQ(out.str(), "trial,agree,empty_bin,in_T,in_A,in_B\n0,1,0,0,1,0\n1,0,1,0,0,0\n");
}

TEST(Scalar, HighCorrelationAgreesAndKeysMatch) {
  CovarianceTriple c;
  c.sigma_xy = 0.999;
  c.sigma_xz = 0.3;
  c.sigma_yz = 0.3 * 0.999;
  const auto seeds = ProtocolSeeds::from_master(1);
  const ScalarQuantizer q{0.25, 64};
  std::size_t agree = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto r = run_scalar_trial(c, q, 200, seeds, t);
    agree += r.agree;
    ASSERT_EQ(r.agree, r.key_alice == r.key_bob);
  }
  EXPECT_GE(agree, 45U);
  const auto a = run_scalar_trial(c, q, 200, seeds, 7);
  const auto b = run_scalar_trial(c, q, 200, seeds, 7);
  EXPECT_EQ(a.key_alice, b.key_alice);
  EXPECT_EQ(a.symbol_errors, b.symbol_errors);
}

TEST(Scalar, SmallModulusMakesErrors) {
  const ScalarQuantizer q{0.05, 2};
  const auto r = run_scalar_trial(worked_triple(), q, 1000, ProtocolSeeds::from_master(2), 0);
  EXPECT_GT(r.symbol_errors, 100U);
  EXPECT_FALSE(r.agree);
  EXPECT_THROW(run_scalar_trial(worked_triple(), ScalarQuantizer{0.0, 2}, 10, {}, 0), Error);
}
