// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cstdint>
#include <utility>

namespace hekl {

using u128 = unsigned __int128;

inline uint64_t hi64(u128 x) { return static_cast<uint64_t>(x >> 64); }
inline uint64_t lo64(u128 x) { return static_cast<uint64_t>(x); }

bool is_prime(uint64_t n);

/// A word-sized prime modulus with precomputed Barrett constants.
///
/// The Barrett ratio is floor(2^128 / p) stored as two 64-bit words. Any
/// 128-bit value can be reduced with one quotient estimate and at most one
/// correcting subtraction.
class Modulus {
 public:
  static constexpr uint64_t kMaxValue = (uint64_t{1} << 62) - 1;

  /// Throws ParameterError unless p is a prime with 2 < p < 2^62.
  explicit Modulus(uint64_t p);

  uint64_t value() const { return p_; }
  uint64_t barrett_hi() const { return ratio_hi_; }
  uint64_t barrett_lo() const { return ratio_lo_; }
  int bit_len() const { return bit_len_; }

  uint64_t reduce_128(u128 x) const {
    const uint64_t xl = lo64(x);
    const uint64_t xh = hi64(x);
    // floor(x * ratio / 2^128), low word only; the remainder fits one word.
    const u128 mid = static_cast<u128>(hi64(static_cast<u128>(xl) * ratio_lo_)) +
                     lo64(static_cast<u128>(xh) * ratio_lo_) +
                     lo64(static_cast<u128>(xl) * ratio_hi_);
    const uint64_t q = xh * ratio_hi_ + hi64(static_cast<u128>(xh) * ratio_lo_) +
                       hi64(static_cast<u128>(xl) * ratio_hi_) + hi64(mid);
    const uint64_t r = xl - q * p_;
    return r >= p_ ? r - p_ : r;
  }

  uint64_t reduce(uint64_t x) const { return reduce_128(x); }

  friend bool operator==(const Modulus& a, const Modulus& b) { return a.p_ == b.p_; }

 private:
  uint64_t p_;
  uint64_t ratio_hi_;
  uint64_t ratio_lo_;
  int bit_len_;
};

/// A fixed multiplicand w with its Shoup companion floor(w * 2^64 / p).
struct MulOperand {
  uint64_t value = 0;
  uint64_t precon = 0;

  MulOperand() = default;
  MulOperand(uint64_t w, const Modulus& m)
      : value(w), precon(static_cast<uint64_t>((static_cast<u128>(w) << 64) / m.value())) {
    assert(w < m.value());
  }
};

// x, y < p. The min() form drops the compare-and-branch of the textbook
// sequence: if x + y < p, the wrapped difference is larger than the sum.
inline uint64_t add_mod(uint64_t x, uint64_t y, const Modulus& m) {
  assert(x < m.value() && y < m.value());
  const uint64_t s = x + y;
  const uint64_t d = s - m.value();
  return d < s ? d : s;
}

inline uint64_t sub_mod(uint64_t x, uint64_t y, const Modulus& m) {
  assert(x < m.value() && y < m.value());
  const uint64_t d = x - y;
  return x >= y ? d : d + m.value();
}

inline uint64_t negate_mod(uint64_t x, const Modulus& m) {
  assert(x < m.value());
  return x == 0 ? 0 : m.value() - x;
}

/// (x * y) mod p via a 128-bit product and Barrett reduction. Accepts any
/// 64-bit operands.
inline uint64_t mul_mod(uint64_t x, uint64_t y, const Modulus& m) {
  return m.reduce_128(static_cast<u128>(x) * y);
}

/// (a * b + c) mod p with a single reduction of the 128-bit accumulator.
inline uint64_t mad_mod(uint64_t a, uint64_t b, uint64_t c, const Modulus& m) {
  assert(a < m.value() && b < m.value());
  assert(c < (uint64_t{1} << 62));
  return m.reduce_128(static_cast<u128>(a) * b + c);
}

// Shoup product; result in [0, 2p) for any 64-bit y.
inline uint64_t mul_mod_lazy(uint64_t y, const MulOperand& w, uint64_t p) {
  const uint64_t q = hi64(static_cast<u128>(w.precon) * y);
  return w.value * y - q * p;
}

inline uint64_t mul_mod(uint64_t y, const MulOperand& w, const Modulus& m) {
  const uint64_t r = mul_mod_lazy(y, w, m.value());
  return r >= m.value() ? r - m.value() : r;
}

namespace detail {

// In-place Harvey forward butterfly on raw words; p < 2^62, x, y < 4p.
inline void ct_butterfly(uint64_t& x, uint64_t& y, const MulOperand& w, uint64_t p) {
  const uint64_t two_p = p << 1;
  assert(x < 2 * two_p && y < 2 * two_p);
  if (x >= two_p) x -= two_p;
  const uint64_t t = mul_mod_lazy(y, w, p);
  y = x - t + two_p;
  x = x + t;
}

// Gentleman-Sande butterfly; x, y < 2p in and out.
inline void gs_butterfly(uint64_t& x, uint64_t& y, const MulOperand& w, uint64_t p) {
  const uint64_t two_p = p << 1;
  assert(x < two_p && y < two_p);
  const uint64_t t = x - y + two_p;
  uint64_t s = x + y;
  if (s >= two_p) s -= two_p;
  x = s;
  y = mul_mod_lazy(t, w, p);
}

// [0, 4p) -> [0, p)
inline uint64_t reduce_from_4p(uint64_t x, uint64_t p) {
  const uint64_t two_p = p << 1;
  if (x >= two_p) x -= two_p;
  if (x >= p) x -= p;
  return x;
}

}  // namespace detail

/// Harvey's lazy Cooley-Tukey butterfly.
///
/// Inputs X, Y in [0, 4p). Returns (X', Y') with X' = X + WY and
/// Y' = X - WY modulo p, both in [0, 4p).
inline std::pair<uint64_t, uint64_t> harvey_butterfly(uint64_t x, uint64_t y, const MulOperand& w,
                                                      const Modulus& m) {
  detail::ct_butterfly(x, y, w, m.value());
  return {x, y};
}

/// Gentleman-Sande companion of harvey_butterfly. Inputs in [0, 2p); returns
/// (X + Y, W(X - Y)) modulo p, both in [0, 2p).
inline std::pair<uint64_t, uint64_t> harvey_inv_butterfly(uint64_t x, uint64_t y, const MulOperand& w,
                                                          const Modulus& m) {
  detail::gs_butterfly(x, y, w, m.value());
  return {x, y};
}

uint64_t pow_mod(uint64_t base, uint64_t exponent, const Modulus& m);

/// Throws DomainError when x has no inverse modulo p.
uint64_t inv_mod(uint64_t x, const Modulus& m);

/// Smallest primitive 2N-th root of unity modulo p. Throws ParameterError if
/// p != 1 mod 2N or n is not a power of two.
uint64_t find_primitive_2n_root(const Modulus& m, uint64_t n);

/// Residue of a finite, integer-valued double.
uint64_t reduce_double(double x, const Modulus& m);

}  // namespace hekl
