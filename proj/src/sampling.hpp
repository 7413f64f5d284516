// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hekl/ckks.hpp"

namespace hekl::detail {

inline std::vector<int64_t> sample_ternary(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> dist(-1, 1);
  std::vector<int64_t> out(n);
  for (auto& x : out) x = dist(rng);
  return out;
}

// Rounded normal with tails cut at 6 sigma.
inline std::vector<int64_t> sample_gaussian(std::mt19937_64& rng, std::size_t n, double sigma) {
  std::normal_distribution<double> dist(0.0, sigma);
  const double bound = 6.0 * sigma;
  std::vector<int64_t> out(n);
  for (auto& x : out) {
    double v;
    do {
      v = dist(rng);
    } while (std::fabs(v) > bound);
    x = static_cast<int64_t>(std::llround(v));
  }
  return out;
}

// Small signed coefficients into a coefficient-domain polynomial.
inline RnsPolynomial poly_from_small(const CkksContext& ctx, const std::vector<int64_t>& coeffs, std::size_t rows,
                                     bool extended) {
  RnsPolynomial poly = ctx.make_poly_uninit(rows, Domain::kCoefficient);
  for (std::size_t r = 0; r < rows; ++r) {
    const Modulus& m = ctx.row_modulus(r, rows, extended);
    auto dst = poly.row(r);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const int64_t c = coeffs[j];
      const uint64_t mag = m.reduce(static_cast<uint64_t>(c < 0 ? -c : c));
      dst[j] = c < 0 ? negate_mod(mag, m) : mag;
    }
  }
  return poly;
}

// Uniform NTT-domain polynomial; uniform is uniform in either domain.
inline RnsPolynomial sample_uniform(const CkksContext& ctx, std::mt19937_64& rng, std::size_t rows, bool extended) {
  RnsPolynomial poly = ctx.make_poly_uninit(rows, Domain::kNtt);
  for (std::size_t r = 0; r < rows; ++r) {
    std::uniform_int_distribution<uint64_t> dist(0, ctx.row_modulus(r, rows, extended).value() - 1);
    for (auto& x : poly.row(r)) x = dist(rng);
  }
  return poly;
}

}  // namespace hekl::detail
