// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include "hekl/rns.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "hekl/errors.hpp"

namespace hekl {

std::vector<Modulus> generate_primes(std::size_t n, int bit_size, std::size_t count, PrimeOrder order,
                                     std::span<const Modulus> exclude) {
  if (bit_size < 2 || bit_size > 62) throw ParameterError("prime bit size must be in [2, 62]");
  if (n == 0 || !std::has_single_bit(n)) throw ParameterError("n must be a power of two");
  const u128 step = 2 * static_cast<u128>(n);
  const u128 lo = u128{1} << (bit_size - 1);
  const u128 hi = u128{1} << bit_size;  // exclusive

  auto excluded = [&](uint64_t c) {
    return std::any_of(exclude.begin(), exclude.end(), [c](const Modulus& m) { return m.value() == c; });
  };

  std::vector<Modulus> out;
  if (count == 0) return out;
  if (order == PrimeOrder::kDescending) {
    if (hi > step) {
      // largest c < hi with c = 1 mod 2n
      for (u128 c = (hi - 2) / step * step + 1; c >= lo && c > 2; c -= step) {
        const auto v = static_cast<uint64_t>(c);
        if (is_prime(v) && !excluded(v)) {
          out.emplace_back(v);
          if (out.size() == count) return out;
        }
        if (c < step) break;
      }
    }
  } else {
    for (u128 c = (lo + step - 1) / step * step + 1; c < hi; c += step) {
      const auto v = static_cast<uint64_t>(c);
      if (v > 2 && is_prime(v) && !excluded(v)) {
        out.emplace_back(v);
        if (out.size() == count) return out;
      }
    }
  }
  throw ExhaustionError("only " + std::to_string(out.size()) + " of " + std::to_string(count) + " " +
                        std::to_string(bit_size) + "-bit primes = 1 mod " + std::to_string(2 * n) + " exist");
}

RnsBasis::RnsBasis(std::size_t n, std::vector<Modulus> primes, std::optional<Modulus> special)
    : n_(n), primes_(std::move(primes)), special_(std::move(special)) {
  if (primes_.empty()) throw ParameterError("RNS basis needs at least one prime");
  auto check = [n](const Modulus& m) {
    if (m.value() >= (uint64_t{1} << 60)) {
      throw ParameterError("RNS prime " + std::to_string(m.value()) + " exceeds 60 bits");
    }
    if ((m.value() - 1) % (2 * n) != 0) {
      throw ParameterError("RNS prime " + std::to_string(m.value()) + " is not 1 mod 2n");
    }
  };
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    check(primes_[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (primes_[i] == primes_[j]) throw ParameterError("RNS primes must be distinct");
    }
  }
  if (special_) {
    check(*special_);
    for (const auto& q : primes_) {
      if (special_->value() <= q.value()) throw ParameterError("special prime must exceed every chain prime");
    }
  }

  inv_last_.resize(primes_.size());
  for (std::size_t level = 2; level <= primes_.size(); ++level) {
    const uint64_t q_last = primes_[level - 1].value();
    for (std::size_t i = 0; i + 1 < level; ++i) {
      inv_last_[level - 1].emplace_back(inv_mod(q_last, primes_[i]), primes_[i]);
    }
  }
  if (special_) {
    for (const auto& q : primes_) inv_special_.emplace_back(inv_mod(special_->value(), q), q);
  }
}

BigInt RnsBasis::product(std::size_t level) const {
  BigInt q = 1;
  for (std::size_t i = 0; i < level; ++i) q *= primes_.at(i).value();
  return q;
}

// ---------------------------------------------------------------------------

RnsPolynomial::RnsPolynomial(std::size_t n, std::size_t level, Domain domain,
                             const std::shared_ptr<BufferPool>& pool)
    : RnsPolynomial(n, level, domain, pool, Uninitialized{}) {
  std::fill(buffer_.data(), buffer_.data() + n * level, uint64_t{0});
}

RnsPolynomial::RnsPolynomial(std::size_t n, std::size_t level, Domain domain,
                             const std::shared_ptr<BufferPool>& pool, Uninitialized)
    : n_(n), level_(level), domain_(domain) {
  if (n == 0 || level == 0) throw ParameterError("polynomial needs n > 0 and at least one row");
  buffer_ = pool ? pool->acquire(n * level) : PooledBuffer::standalone(n * level);
}

RnsPolynomial::RnsPolynomial(const RnsPolynomial& other)
    : n_(other.n_), level_(other.level_), domain_(other.domain_) {
  if (other.level_ == 0) return;
  const std::size_t words = n_ * level_;
  buffer_ = other.pool() ? other.pool()->acquire(words) : PooledBuffer::standalone(words);
  std::memcpy(buffer_.data(), other.buffer_.data(), words * sizeof(uint64_t));
}

RnsPolynomial& RnsPolynomial::operator=(const RnsPolynomial& other) {
  if (this != &other) *this = RnsPolynomial(other);
  return *this;
}

void RnsPolynomial::drop_last_row() {
  if (level_ == 0) throw StateError("polynomial has no rows");
  --level_;
}

bool operator==(const RnsPolynomial& a, const RnsPolynomial& b) {
  if (a.n_ != b.n_ || a.level_ != b.level_ || a.domain_ != b.domain_) return false;
  auto da = a.data();
  auto db = b.data();
  return std::equal(da.begin(), da.end(), db.begin());
}

// ---------------------------------------------------------------------------

BigInt crt_compose(std::span<const uint64_t> residues, std::span<const Modulus> primes) {
  if (residues.size() != primes.size()) throw ParameterError("crt_compose: residue count does not match basis");
  BigInt q = 1;
  for (const auto& p : primes) q *= p.value();
  BigInt x = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const BigInt q_hat = q / primes[i].value();
    const auto q_hat_mod = static_cast<uint64_t>(q_hat % primes[i].value());
    const uint64_t coeff = mul_mod(residues[i], inv_mod(q_hat_mod, primes[i]), primes[i]);
    x += q_hat * coeff;
  }
  return x % q;
}

std::vector<uint64_t> crt_decompose(const BigInt& x, std::span<const Modulus> primes) {
  std::vector<uint64_t> out;
  out.reserve(primes.size());
  for (const auto& p : primes) {
    BigInt r = x % p.value();
    if (r < 0) r += p.value();
    out.push_back(static_cast<uint64_t>(r));
  }
  return out;
}

std::vector<double> compose_centered(const RnsPolynomial& poly, const RnsBasis& basis) {
  if (poly.domain() != Domain::kCoefficient) throw StateError("compose_centered needs coefficient domain");
  const std::size_t level = poly.level();
  const std::size_t n = poly.n();
  std::vector<double> out(n);
  if (level == 1) {
    const uint64_t p = basis.prime(0).value();
    auto r = poly.row(0);
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = r[j] > p / 2 ? -static_cast<double>(p - r[j]) : static_cast<double>(r[j]);
    }
    return out;
  }
  const BigInt q = basis.product(level);
  const BigInt half = q >> 1;
  std::vector<BigInt> q_hat(level);
  std::vector<MulOperand> q_hat_inv(level);
  for (std::size_t i = 0; i < level; ++i) {
    const Modulus& m = basis.prime(i);
    q_hat[i] = q / m.value();
    q_hat_inv[i] = MulOperand(inv_mod(static_cast<uint64_t>(q_hat[i] % m.value()), m), m);
  }
  BigInt acc;
  for (std::size_t j = 0; j < n; ++j) {
    acc = 0;
    for (std::size_t i = 0; i < level; ++i) {
      acc += q_hat[i] * mul_mod(poly.row(i)[j], q_hat_inv[i], basis.prime(i));
    }
    acc %= q;
    if (acc > half) acc -= q;
    out[j] = acc.convert_to<double>();
  }
  return out;
}

RnsPolynomial rescale_rows(const RnsPolynomial& poly, const RnsBasis& basis) {
  if (poly.level() < 2) throw StateError("rescale needs at least two primes");
  if (poly.domain() != Domain::kCoefficient) throw StateError("rescale_rows needs coefficient domain");
  const std::size_t level = poly.level();
  const std::size_t n = poly.n();
  RnsPolynomial out(n, level - 1, Domain::kCoefficient, poly.pool(), RnsPolynomial::Uninitialized{});
  // Rounds by dividing x + q_last/2 with the exact floor formula.
  const Modulus& q_last = basis.prime(level - 1);
  const uint64_t half = q_last.value() >> 1;
  std::vector<uint64_t> last(poly.row(level - 1).begin(), poly.row(level - 1).end());
  for (auto& x : last) x = add_mod(x, half, q_last);
  for (std::size_t i = 0; i + 1 < level; ++i) {
    const Modulus& m = basis.prime(i);
    const MulOperand& inv = basis.inv_last(level, i);
    const uint64_t half_i = m.reduce(half);
    auto src = poly.row(i);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      dst[j] = mul_mod(sub_mod(add_mod(src[j], half_i, m), m.reduce(last[j]), m), inv, m);
    }
  }
  return out;
}

RnsPolynomial mod_switch_drop_last(const RnsPolynomial& poly) {
  if (poly.level() < 2) throw StateError("modulus switch needs at least two primes");
  RnsPolynomial out(poly);
  out.drop_last_row();
  return out;
}

}  // namespace hekl
