#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <vector>

#include "gausskey/covariance.hpp"
#include "gausskey/error.hpp"
#include "gausskey/parallel.hpp"
#include "gausskey/rng.hpp"

namespace gausskey {

/// n i.i.d. draws of (X, Y, Z).
struct SourceBlock {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultBlockCap = std::size_t{1} << 26;

/// Lower-triangular L with L L^T = Σ.
inline std::array<std::array<double, 3>, 3> cholesky3(const CovarianceTriple& c) {
  const auto m = c.matrix();
  std::array<std::array<double, 3>, 3> l{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = m[i][j];
      for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      l[i][j] = (i == j) ? std::sqrt(sum) : sum / l[j][j];
    }
  }
  return l;
}

/// Draws a block from N(0, Σ). Index i consumes standard normals 4i..4i+2 of
/// stream `stream`, so the output is independent of `threads`.
inline SourceBlock sample_block(const CovarianceTriple& sigma, std::size_t n, std::uint64_t seed,
                                std::uint64_t stream = 0, unsigned threads = 1,
                                std::size_t cap = kDefaultBlockCap) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "block length must be >= 1");
  if (n > cap) throw Error(ErrorCode::BlockTooLarge, "block length " + std::to_string(n) + " exceeds cap");
  const auto l = cholesky3(validate(sigma));
  const rng::CounterRng gen(seed, stream);

  SourceBlock b;
  b.n = n;
  b.seed = seed;
  b.x.resize(n);
  b.y.resize(n);
  b.z.resize(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double g0 = gen.normal(4 * i);
      const double g1 = gen.normal(4 * i + 1);
      const double g2 = gen.normal(4 * i + 2);
      b.x[i] = l[0][0] * g0;
      b.y[i] = l[1][0] * g0 + l[1][1] * g1;
      b.z[i] = l[2][0] * g0 + l[2][1] * g1 + l[2][2] * g2;
    }
  });
  return b;
}

/// Sample covariance about the known zero mean.
inline CovarianceTriple empirical_covariance(const SourceBlock& b) {
  CovarianceTriple c{0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < b.n; ++i) {
    c.sigma_x += b.x[i] * b.x[i];
    c.sigma_y += b.y[i] * b.y[i];
    c.sigma_z += b.z[i] * b.z[i];
    c.sigma_xy += b.x[i] * b.y[i];
    c.sigma_xz += b.x[i] * b.z[i];
    c.sigma_yz += b.y[i] * b.z[i];
  }
  const double inv = 1.0 / static_cast<double>(b.n);
  c.sigma_x *= inv;
  c.sigma_y *= inv;
  c.sigma_z *= inv;
  c.sigma_xy *= inv;
  c.sigma_xz *= inv;
  c.sigma_yz *= inv;
  return c;
}

inline constexpr char kBlockMagic[8] = {'G', 'K', 'S', 'B', 'L', 'K', '0', '1'};

namespace detail {

inline void put_le64(std::ostream& out, double v) {
  std::uint64_t u = std::bit_cast<std::uint64_t>(v);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

inline double get_le64(const unsigned char* p) {
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(u);
}

}  // namespace detail

/// Binary dump: 8-byte magic, then x, y, z as little-endian doubles. The
/// block length is implied by the file size.
inline void write_block_binary(std::ostream& out, const SourceBlock& b) {
  out.write(kBlockMagic, sizeof kBlockMagic);
  for (const auto* seq : {&b.x, &b.y, &b.z}) {
    for (double v : *seq) detail::put_le64(out, v);
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing source block");
}

inline SourceBlock read_block_binary(std::istream& in) {
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof kBlockMagic || std::memcmp(bytes.data(), kBlockMagic, sizeof kBlockMagic) != 0) {
    throw Error(ErrorCode::IoError, "missing GKSBLK01 magic");
  }
  const std::size_t payload = bytes.size() - sizeof kBlockMagic;
  if (payload % 24 != 0) throw Error(ErrorCode::IoError, "payload is not a whole number of (x,y,z) triples");
  SourceBlock b;
  b.n = payload / 24;
  const unsigned char* p = bytes.data() + sizeof kBlockMagic;
  for (auto* seq : {&b.x, &b.y, &b.z}) {
    seq->resize(b.n);
    for (std::size_t i = 0; i < b.n; ++i, p += 8) (*seq)[i] = detail::get_le64(p);
  }
  return b;
}

}  // namespace gausskey
