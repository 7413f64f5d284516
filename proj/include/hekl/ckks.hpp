// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "hekl/buffer_pool.hpp"
#include "hekl/ntt.hpp"
#include "hekl/rns.hpp"

namespace hekl {

struct EncryptionParameters {
  std::size_t n = 0;
  RnsBasis basis;
  double delta = 0;
  double error_sigma = 3.2;
  uint64_t seed = 0;
};

/// Chain with a 60-bit first prime, `levels - 1` primes just above
/// 2^delta_bits, and a 60-bit special prime P above all of them.
EncryptionParameters make_parameters(std::size_t n, std::size_t levels, int delta_bits, uint64_t seed = 0,
                                     double error_sigma = 3.2);

/// Shared evaluation state: parameters, per-prime NTT tables, the kernel
/// variant used for every transform, and an optional buffer pool.
///
/// Also accumulates time spent inside NTTs so benchmarks can report the NTT
/// share of a routine.
class CkksContext {
 public:
  /// Throws ParameterError if n < 8, delta is not a power of two, delta is
  /// not below every chain prime, or P is missing.
  explicit CkksContext(EncryptionParameters params, NttVariant variant = NttVariant::high_radix(8),
                       std::shared_ptr<BufferPool> pool = nullptr);

  const EncryptionParameters& params() const { return params_; }
  const RnsBasis& basis() const { return params_.basis; }
  std::size_t n() const { return params_.n; }
  std::size_t max_level() const { return params_.basis.levels(); }
  double delta() const { return params_.delta; }

  const NttVariant& variant() const { return variant_; }
  void set_variant(const NttVariant& v);

  const std::shared_ptr<BufferPool>& pool() const { return pool_; }

  const NttTables& tables(std::size_t i) const { return tables_.at(i); }
  const NttTables& special_tables() const { return tables_.back(); }

  /// Modulus of row `row` in a polynomial of `rows` rows. When `extended`,
  /// the last row belongs to P.
  const Modulus& row_modulus(std::size_t row, std::size_t rows, bool extended) const;
  const NttTables& row_tables(std::size_t row, std::size_t rows, bool extended) const;

  RnsPolynomial make_poly(std::size_t rows, Domain domain) const;
  RnsPolynomial make_poly_uninit(std::size_t rows, Domain domain) const;
  /// Copy of the first `rows` rows (all by default), stored in this context's pool.
  RnsPolynomial clone(const RnsPolynomial& poly, std::size_t rows = 0) const;

  void forward_row(std::span<uint64_t> row, const NttTables& t) const;
  void inverse_row(std::span<uint64_t> row, const NttTables& t) const;
  void to_ntt(RnsPolynomial& poly, bool extended = false) const;
  void to_coeff(RnsPolynomial& poly, bool extended = false) const;

  uint64_t ntt_nanoseconds() const { return ntt_ns_.load(std::memory_order_relaxed); }
  uint64_t ntt_calls() const { return ntt_calls_.load(std::memory_order_relaxed); }
  void reset_ntt_timer() const;

 private:
  EncryptionParameters params_;
  NttVariant variant_;
  std::shared_ptr<BufferPool> pool_;
  std::vector<NttTables> tables_;  // q_1..q_L, then P
  mutable std::atomic<uint64_t> ntt_ns_{0};
  mutable std::atomic<uint64_t> ntt_calls_{0};
};

struct Plaintext {
  RnsPolynomial poly;  // NTT domain
  double scale = 0;
  std::size_t level() const { return poly.level(); }
};

struct Ciphertext {
  std::vector<RnsPolynomial> polys;  // NTT domain, 2 or 3 entries
  double scale = 0;
  std::size_t level() const { return polys.empty() ? 0 : polys.front().level(); }
  std::size_t size() const { return polys.size(); }
};

struct SecretKey {
  RnsPolynomial s;  // NTT domain over q_1..q_L, P
};

struct PublicKey {
  RnsPolynomial b;  // -a*s + e
  RnsPolynomial a;
};

/// Key-switching key with one component per chain prime q_j; component j
/// encrypts P * target restricted to the CRT idempotent of q_j under modulus
/// P * q_L. Rows are q_1..q_L, P.
struct KeySwitchKey {
  std::vector<std::array<RnsPolynomial, 2>> parts;
};

using EvaluationKey = KeySwitchKey;

struct GaloisKeys {
  std::map<int, KeySwitchKey> keys;  // rotation step -> key for s(x^(5^step))
  bool has(int step) const { return keys.count(step) != 0; }
};

struct KeySet {
  SecretKey sk;
  PublicKey pk;
  EvaluationKey evk;
  GaloisKeys galois;
};

/// Deterministic in params().seed.
KeySet keygen(const CkksContext& ctx, std::span<const int> rotation_steps = {});

/// 5^step mod 2n, for any integer step.
uint64_t galois_element(int step, std::size_t n);

/// x -> x^g on a coefficient-domain polynomial (g odd), rows reduced by the
/// first poly.level() chain primes (or P for the extended last row).
RnsPolynomial apply_galois(const CkksContext& ctx, const RnsPolynomial& poly, uint64_t g, bool extended = false);

/// Canonical-embedding codec; slot j sits at the root psi^(5^j).
class Encoder {
 public:
  explicit Encoder(const CkksContext& ctx);

  std::size_t slot_count() const { return ctx_.n() / 2; }

  /// Throws ParameterError on a wrong slot count or when the scaled
  /// coefficients do not fit below half the modulus at `level`.
  Plaintext encode(std::span<const std::complex<double>> slots, double scale, std::size_t level) const;
  Plaintext encode(std::span<const std::complex<double>> slots, double scale) const {
    return encode(slots, scale, ctx_.max_level());
  }
  Plaintext encode(std::span<const std::complex<double>> slots) const { return encode(slots, ctx_.delta()); }

  std::vector<std::complex<double>> decode(const Plaintext& pt) const;

  /// Coefficients (before scaling and rounding) of the real polynomial whose
  /// embedding is `slots`, and the inverse map.
  std::vector<double> embed_inverse(std::span<const std::complex<double>> slots) const;
  std::vector<std::complex<double>> embed(std::span<const double> coeffs) const;

 private:
  void special_fft(std::vector<std::complex<double>>& v) const;
  void special_ifft(std::vector<std::complex<double>>& v) const;

  const CkksContext& ctx_;
  std::vector<std::complex<double>> roots_;  // exp(2 pi i k / 2n), k < 2n
  std::vector<std::size_t> rot_group_;       // 5^j mod 2n
};

class Encryptor {
 public:
  /// The sampler is seeded from params().seed; two encryptors built from the
  /// same context produce identical ciphertext streams.
  Encryptor(const CkksContext& ctx, const PublicKey& pk);

  /// Accepts plaintexts at any level up to L.
  Ciphertext encrypt(const Plaintext& pt);

 private:
  const CkksContext& ctx_;
  const PublicKey& pk_;
  std::mt19937_64 rng_;
};

class Decryptor {
 public:
  Decryptor(const CkksContext& ctx, const SecretKey& sk) : ctx_(ctx), sk_(sk) {}

  /// Throws StateError for a size-3 ciphertext.
  Plaintext decrypt(const Ciphertext& ct) const;

 private:
  const CkksContext& ctx_;
  const SecretKey& sk_;
};

/// Homomorphic evaluation. Every operation returns a fresh ciphertext.
class Evaluator {
 public:
  explicit Evaluator(const CkksContext& ctx) : ctx_(ctx) {}

  /// Throws ParameterError on level, size or scale mismatch.
  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const;
  void add_inplace(Ciphertext& a, const Ciphertext& b) const;

  /// Size-3 product; the cross term uses fused multiply-add.
  Ciphertext multiply(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext square(const Ciphertext& a) const;

  Ciphertext relinearize(const Ciphertext& ct, const EvaluationKey& evk) const;
  Ciphertext rescale(const Ciphertext& ct) const;
  Ciphertext mod_switch(const Ciphertext& ct) const;

  /// Slot j of the result holds slot (j + step) mod n/2 of the input.
  Ciphertext rotate(const Ciphertext& ct, int step, const GaloisKeys& keys) const;

  Ciphertext mul_lin(const Ciphertext& a, const Ciphertext& b, const EvaluationKey& evk) const;
  Ciphertext mul_lin_rs(const Ciphertext& a, const Ciphertext& b, const EvaluationKey& evk) const;
  Ciphertext sqr_lin_rs(const Ciphertext& a, const EvaluationKey& evk) const;
  /// mul_lin_rs(a, b) + c, with c switched down to the product's level. c must
  /// carry the product's scale.
  Ciphertext mul_lin_rs_modsw_add(const Ciphertext& a, const Ciphertext& b, const Ciphertext& c,
                                  const EvaluationKey& evk) const;
  Ciphertext rotate_routine(const Ciphertext& ct, int step, const GaloisKeys& keys) const {
    return rotate(ct, step, keys);
  }

  /// Adds the key-switched image of `target` (NTT domain) into out0/out1.
  void switch_key(const RnsPolynomial& target, const KeySwitchKey& key, RnsPolynomial& out0,
                  RnsPolynomial& out1) const;

 private:
  const CkksContext& ctx_;
};

}  // namespace hekl
