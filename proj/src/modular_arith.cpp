// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include "hekl/modular_arith.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "hekl/errors.hpp"

namespace hekl {

namespace {

uint64_t mul_mod_raw(uint64_t a, uint64_t b, uint64_t n) {
  return static_cast<uint64_t>(static_cast<u128>(a) * b % n);
}

uint64_t pow_mod_raw(uint64_t b, uint64_t e, uint64_t n) {
  uint64_t r = 1 % n;
  b %= n;
  while (e > 0) {
    if (e & 1) r = mul_mod_raw(r, b, n);
    b = mul_mod_raw(b, b, n);
    e >>= 1;
  }
  return r;
}

}  // namespace

// Deterministic Miller-Rabin; these bases are sufficient below 2^64.
bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t sp : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % sp == 0) return n == sp;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = pow_mod_raw(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod_raw(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Modulus::Modulus(uint64_t p) : p_(p) {
  if (p <= 2 || p > kMaxValue) {
    throw ParameterError("modulus " + std::to_string(p) + " outside (2, 2^62)");
  }
  if (!is_prime(p)) {
    throw ParameterError("modulus " + std::to_string(p) + " is not prime");
  }
  // p is odd, so floor((2^128 - 1) / p) == floor(2^128 / p).
  const u128 ratio = ~u128{0} / p;
  ratio_hi_ = hi64(ratio);
  ratio_lo_ = lo64(ratio);
  bit_len_ = std::bit_width(p);
}

uint64_t pow_mod(uint64_t base, uint64_t exponent, const Modulus& m) {
  uint64_t result = 1;
  base = m.reduce(base);
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exponent >>= 1;
  }
  return result;
}

uint64_t inv_mod(uint64_t x, const Modulus& m) {
  int64_t r0 = static_cast<int64_t>(m.value());
  int64_t r1 = static_cast<int64_t>(m.reduce(x));
  int64_t t0 = 0;
  int64_t t1 = 1;
  while (r1 != 0) {
    const int64_t q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    t0 -= q * t1;
    std::swap(t0, t1);
  }
  if (r0 != 1) {
    throw DomainError(std::to_string(x) + " is not invertible modulo " + std::to_string(m.value()));
  }
  if (t0 < 0) t0 += static_cast<int64_t>(m.value());
  return static_cast<uint64_t>(t0);
}

uint64_t find_primitive_2n_root(const Modulus& m, uint64_t n) {
  if (n == 0 || !std::has_single_bit(n)) {
    throw ParameterError("transform size must be a power of two");
  }
  const uint64_t p = m.value();
  const uint64_t order = 2 * n;
  if ((p - 1) % order != 0) {
    throw ParameterError("no primitive " + std::to_string(order) + "-th root of unity modulo " +
                         std::to_string(p));
  }
  const uint64_t cofactor = (p - 1) / order;
  uint64_t root = 0;
  // Since the order is a power of two, c has order 2N iff c^N == -1.
  for (uint64_t g = 2; g < p; ++g) {
    const uint64_t c = pow_mod(g, cofactor, m);
    if (pow_mod(c, n, m) == p - 1) {
      root = c;
      break;
    }
  }
  if (root == 0) {
    throw ParameterError("no primitive root found modulo " + std::to_string(p));
  }
  // The primitive 2N-th roots are exactly the odd powers of any one of them.
  const uint64_t root_sq = mul_mod(root, root, m);
  uint64_t best = root;
  uint64_t cur = root;
  for (uint64_t k = 1; k < n; ++k) {
    cur = mul_mod(cur, root_sq, m);
    if (cur < best) best = cur;
  }
  return best;
}

uint64_t reduce_double(double x, const Modulus& m) {
  const bool negative = x < 0;
  double a = std::fabs(x);
  uint64_t r;
  if (a < 18446744073709551616.0) {  // 2^64
    r = m.reduce(static_cast<uint64_t>(a));
  } else {
    int exp = 0;
    const double frac = std::frexp(a, &exp);  // a = frac * 2^exp, frac in [0.5, 1)
    const auto mantissa = static_cast<uint64_t>(std::ldexp(frac, 53));
    r = mul_mod(m.reduce(mantissa), pow_mod(2, static_cast<uint64_t>(exp - 53), m), m);
  }
  return negative ? negate_mod(r, m) : r;
}

}  // namespace hekl
