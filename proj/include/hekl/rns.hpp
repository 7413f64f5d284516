// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hekl/buffer_pool.hpp"
#include "hekl/modular_arith.hpp"

namespace hekl {

using BigInt = boost::multiprecision::cpp_int;

enum class PrimeOrder { kDescending, kAscending };

/// Distinct primes p = 1 mod 2n with exactly `bit_size` bits. Descending
/// order scans down from 2^bit_size, ascending scans up from 2^(bit_size-1).
/// Primes listed in `exclude` are skipped. Throws ExhaustionError when the
/// range holds fewer than `count` such primes.
std::vector<Modulus> generate_primes(std::size_t n, int bit_size, std::size_t count,
                                     PrimeOrder order = PrimeOrder::kDescending,
                                     std::span<const Modulus> exclude = {});

/// Ciphertext modulus chain q_1..q_L and the optional key-switching prime P.
class RnsBasis {
 public:
  /// Throws ParameterError if primes repeat, are not 1 mod 2n, reach 2^60,
  /// or if P does not exceed every q_i.
  RnsBasis(std::size_t n, std::vector<Modulus> primes, std::optional<Modulus> special = std::nullopt);

  std::size_t n() const { return n_; }
  std::size_t levels() const { return primes_.size(); }
  std::span<const Modulus> primes() const { return primes_; }
  const Modulus& prime(std::size_t i) const { return primes_.at(i); }
  const std::optional<Modulus>& special_prime() const { return special_; }

  /// q_{level-1}^-1 mod q_i, for i < level - 1.
  const MulOperand& inv_last(std::size_t level, std::size_t i) const { return inv_last_[level - 1][i]; }

  /// P^-1 mod q_i.
  const MulOperand& inv_special(std::size_t i) const { return inv_special_.at(i); }

  /// Product of the first `level` primes.
  BigInt product(std::size_t level) const;

 private:
  std::size_t n_;
  std::vector<Modulus> primes_;
  std::optional<Modulus> special_;
  std::vector<std::vector<MulOperand>> inv_last_;
  std::vector<MulOperand> inv_special_;
};

enum class Domain { kCoefficient, kNtt };

/// Degree-n polynomial held as `level` residue rows of n words each.
class RnsPolynomial {
 public:
  RnsPolynomial() = default;

  /// Zero polynomial. Storage comes from `pool` when one is given.
  RnsPolynomial(std::size_t n, std::size_t level, Domain domain, const std::shared_ptr<BufferPool>& pool = nullptr);

  struct Uninitialized {};
  RnsPolynomial(std::size_t n, std::size_t level, Domain domain, const std::shared_ptr<BufferPool>& pool,
                Uninitialized);

  RnsPolynomial(const RnsPolynomial& other);
  RnsPolynomial& operator=(const RnsPolynomial& other);
  RnsPolynomial(RnsPolynomial&&) noexcept = default;
  RnsPolynomial& operator=(RnsPolynomial&&) noexcept = default;

  std::size_t n() const { return n_; }
  std::size_t level() const { return level_; }
  Domain domain() const { return domain_; }
  void set_domain(Domain d) { domain_ = d; }
  bool empty() const { return level_ == 0; }

  std::span<uint64_t> row(std::size_t i) { return {buffer_.data() + i * n_, n_}; }
  std::span<const uint64_t> row(std::size_t i) const { return {buffer_.data() + i * n_, n_}; }
  std::span<uint64_t> data() { return {buffer_.data(), n_ * level_}; }
  std::span<const uint64_t> data() const { return {buffer_.data(), n_ * level_}; }

  /// Forgets the last residue row without touching the others.
  void drop_last_row();

  const std::shared_ptr<BufferPool>& pool() const { return buffer_.pool(); }

  friend bool operator==(const RnsPolynomial& a, const RnsPolynomial& b);

 private:
  std::size_t n_ = 0;
  std::size_t level_ = 0;
  Domain domain_ = Domain::kCoefficient;
  PooledBuffer buffer_;
};

/// CRT reconstruction in [0, prod(primes)).
BigInt crt_compose(std::span<const uint64_t> residues, std::span<const Modulus> primes);
std::vector<uint64_t> crt_decompose(const BigInt& x, std::span<const Modulus> primes);

/// Coefficient-wise CRT composition, centered into (-Q/2, Q/2], converted to
/// double. Uses the first poly.level() primes of the basis.
std::vector<double> compose_centered(const RnsPolynomial& poly, const RnsBasis& basis);

/// Drops q_last by division, rounding to nearest: with y = x + floor(q_last/2),
/// out_i = (y_i - y_last) * q_last^-1 mod q_i. Coefficient domain, level >= 2.
RnsPolynomial rescale_rows(const RnsPolynomial& poly, const RnsBasis& basis);

/// Drops the last residue row (no division). Level >= 2.
RnsPolynomial mod_switch_drop_last(const RnsPolynomial& poly);

}  // namespace hekl
