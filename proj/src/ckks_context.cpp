// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

#include "hekl/ckks.hpp"
#include "hekl/errors.hpp"
#include "sampling.hpp"

namespace hekl {

EncryptionParameters make_parameters(std::size_t n, std::size_t levels, int delta_bits, uint64_t seed,
                                     double error_sigma) {
  if (levels == 0) throw ParameterError("need at least one level");
  if (delta_bits < 2 || delta_bits > 58) throw ParameterError("delta_bits must be in [2, 58]");
  const auto big = generate_primes(n, 60, 2);
  std::vector<Modulus> chain{big[1]};
  if (levels > 1) {
    auto mids = generate_primes(n, delta_bits + 1, levels - 1, PrimeOrder::kAscending, big);
    chain.insert(chain.end(), mids.begin(), mids.end());
  }
  return EncryptionParameters{n, RnsBasis(n, std::move(chain), big[0]), std::ldexp(1.0, delta_bits), error_sigma,
                              seed};
}

CkksContext::CkksContext(EncryptionParameters params, NttVariant variant, std::shared_ptr<BufferPool> pool)
    : params_(std::move(params)), pool_(std::move(pool)) {
  const std::size_t n = params_.n;
  if (n < 8 || !std::has_single_bit(n)) throw ParameterError("ring degree must be a power of two >= 8");
  if (params_.basis.n() != n) throw ParameterError("basis was built for a different ring degree");
  if (!params_.basis.special_prime()) throw ParameterError("CKKS context needs a key-switching prime");
  int exp = 0;
  if (!(params_.delta > 1) || std::frexp(params_.delta, &exp) != 0.5) {
    throw ParameterError("scale delta must be a power of two");
  }
  for (const auto& q : params_.basis.primes()) {
    if (!(params_.delta < static_cast<double>(q.value()))) {
      throw ParameterError("delta must be below every chain prime");
    }
  }
  if (!(params_.error_sigma > 0)) throw ParameterError("error_sigma must be positive");
  for (const auto& q : params_.basis.primes()) tables_.emplace_back(n, q);
  tables_.emplace_back(n, *params_.basis.special_prime());
  set_variant(variant);
}

void CkksContext::set_variant(const NttVariant& v) {
  NttVariant fitted = v.fitted_to(n());
  fitted.validate(n());
  variant_ = fitted;
}

const Modulus& CkksContext::row_modulus(std::size_t row, std::size_t rows, bool extended) const {
  return row_tables(row, rows, extended).modulus();
}

const NttTables& CkksContext::row_tables(std::size_t row, std::size_t rows, bool extended) const {
  if (extended && row + 1 == rows) return tables_.back();
  if (row >= max_level()) throw ParameterError("row index beyond the modulus chain");
  return tables_[row];
}

RnsPolynomial CkksContext::make_poly(std::size_t rows, Domain domain) const {
  return RnsPolynomial(n(), rows, domain, pool_);
}

RnsPolynomial CkksContext::make_poly_uninit(std::size_t rows, Domain domain) const {
  return RnsPolynomial(n(), rows, domain, pool_, RnsPolynomial::Uninitialized{});
}

RnsPolynomial CkksContext::clone(const RnsPolynomial& poly, std::size_t rows) const {
  if (rows == 0) rows = poly.level();
  if (rows > poly.level()) throw ParameterError("clone cannot add rows");
  RnsPolynomial out = make_poly_uninit(rows, poly.domain());
  std::copy_n(poly.data().begin(), rows * poly.n(), out.data().begin());
  return out;
}

void CkksContext::forward_row(std::span<uint64_t> row, const NttTables& t) const {
  const auto start = std::chrono::steady_clock::now();
  forward_ntt(row, t, variant_);
  const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  ntt_ns_.fetch_add(static_cast<uint64_t>(ns.count()), std::memory_order_relaxed);
  ntt_calls_.fetch_add(1, std::memory_order_relaxed);
}

void CkksContext::inverse_row(std::span<uint64_t> row, const NttTables& t) const {
  const auto start = std::chrono::steady_clock::now();
  inverse_ntt(row, t, variant_);
  const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  ntt_ns_.fetch_add(static_cast<uint64_t>(ns.count()), std::memory_order_relaxed);
  ntt_calls_.fetch_add(1, std::memory_order_relaxed);
}

void CkksContext::to_ntt(RnsPolynomial& poly, bool extended) const {
  if (poly.domain() == Domain::kNtt) return;
  for (std::size_t r = 0; r < poly.level(); ++r) forward_row(poly.row(r), row_tables(r, poly.level(), extended));
  poly.set_domain(Domain::kNtt);
}

void CkksContext::to_coeff(RnsPolynomial& poly, bool extended) const {
  if (poly.domain() == Domain::kCoefficient) return;
  for (std::size_t r = 0; r < poly.level(); ++r) inverse_row(poly.row(r), row_tables(r, poly.level(), extended));
  poly.set_domain(Domain::kCoefficient);
}

void CkksContext::reset_ntt_timer() const {
  ntt_ns_.store(0, std::memory_order_relaxed);
  ntt_calls_.store(0, std::memory_order_relaxed);
}

// ---------------------------------------------------------------------------
// Keys

uint64_t galois_element(int step, std::size_t n) {
  const auto half = static_cast<int64_t>(n / 2);
  int64_t e = step % half;
  if (e < 0) e += half;
  const uint64_t two_n = 2 * n;
  uint64_t g = 1;
  for (int64_t i = 0; i < e; ++i) g = g * 5 % two_n;
  return g;
}

namespace {

std::vector<int64_t> permute_small(const std::vector<int64_t>& a, uint64_t g) {
  const std::size_t n = a.size();
  std::vector<int64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const uint64_t idx = i * g % (2 * n);
    if (idx < n) {
      out[idx] = a[i];
    } else {
      out[idx - n] = -a[i];
    }
  }
  return out;
}

// Key components for `target` (NTT domain, L+1 rows) under secret s.
KeySwitchKey make_switch_key(const CkksContext& ctx, std::mt19937_64& rng, const RnsPolynomial& s,
                             const RnsPolynomial& target) {
  const std::size_t levels = ctx.max_level();
  const std::size_t rows = levels + 1;
  const uint64_t p_special = ctx.basis().special_prime()->value();
  KeySwitchKey key;
  key.parts.reserve(levels);
  for (std::size_t j = 0; j < levels; ++j) {
    RnsPolynomial a = detail::sample_uniform(ctx, rng, rows, true);
    RnsPolynomial b = detail::poly_from_small(ctx, detail::sample_gaussian(rng, ctx.n(), ctx.params().error_sigma),
                                              rows, true);
    ctx.to_ntt(b, true);
    for (std::size_t r = 0; r < rows; ++r) {
      const Modulus& m = ctx.row_modulus(r, rows, true);
      auto br = b.row(r);
      auto ar = a.row(r);
      auto sr = s.row(r);
      for (std::size_t c = 0; c < ctx.n(); ++c) br[c] = sub_mod(br[c], mul_mod(ar[c], sr[c], m), m);
    }
    const Modulus& qj = ctx.basis().prime(j);
    const MulOperand p_mod_q(qj.reduce(p_special), qj);
    auto bj = b.row(j);
    auto tj = target.row(j);
    for (std::size_t c = 0; c < ctx.n(); ++c) bj[c] = add_mod(bj[c], mul_mod(tj[c], p_mod_q, qj), qj);
    key.parts.push_back({std::move(b), std::move(a)});
  }
  return key;
}

}  // namespace

RnsPolynomial apply_galois(const CkksContext& ctx, const RnsPolynomial& poly, uint64_t g, bool extended) {
  if (poly.domain() != Domain::kCoefficient) throw StateError("apply_galois needs coefficient domain");
  if ((g & 1) == 0) throw ParameterError("Galois element must be odd");
  const std::size_t n = poly.n();
  RnsPolynomial out = ctx.make_poly_uninit(poly.level(), Domain::kCoefficient);
  for (std::size_t r = 0; r < poly.level(); ++r) {
    const Modulus& m = ctx.row_modulus(r, poly.level(), extended);
    auto src = poly.row(r);
    auto dst = out.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      const uint64_t idx = i * g % (2 * n);
      if (idx < n) {
        dst[idx] = src[i];
      } else {
        dst[idx - n] = negate_mod(src[i], m);
      }
    }
  }
  return out;
}

KeySet keygen(const CkksContext& ctx, std::span<const int> rotation_steps) {
  std::mt19937_64 rng(ctx.params().seed);
  const std::size_t levels = ctx.max_level();
  const std::size_t n = ctx.n();

  const auto s_small = detail::sample_ternary(rng, n);
  RnsPolynomial s = detail::poly_from_small(ctx, s_small, levels + 1, true);
  ctx.to_ntt(s, true);

  // pk = (-a*s + e, a) over q_L
  RnsPolynomial a = detail::sample_uniform(ctx, rng, levels, false);
  RnsPolynomial b = detail::poly_from_small(ctx, detail::sample_gaussian(rng, n, ctx.params().error_sigma), levels,
                                            false);
  ctx.to_ntt(b);
  for (std::size_t r = 0; r < levels; ++r) {
    const Modulus& m = ctx.basis().prime(r);
    auto br = b.row(r);
    auto ar = a.row(r);
    auto sr = s.row(r);
    for (std::size_t c = 0; c < n; ++c) br[c] = sub_mod(br[c], mul_mod(ar[c], sr[c], m), m);
  }

  RnsPolynomial s2 = ctx.make_poly_uninit(levels + 1, Domain::kNtt);
  for (std::size_t r = 0; r <= levels; ++r) dyadic_mul(s.row(r), s.row(r), s2.row(r), ctx.row_modulus(r, levels + 1, true));
  EvaluationKey evk = make_switch_key(ctx, rng, s, s2);

  GaloisKeys galois;
  for (int step : rotation_steps) {
    if (galois.has(step)) continue;
    RnsPolynomial sg = detail::poly_from_small(ctx, permute_small(s_small, galois_element(step, n)), levels + 1, true);
    ctx.to_ntt(sg, true);
    galois.keys.emplace(step, make_switch_key(ctx, rng, s, sg));
  }
  return KeySet{SecretKey{std::move(s)}, PublicKey{std::move(b), std::move(a)}, std::move(evk), std::move(galois)};
}

}  // namespace hekl
