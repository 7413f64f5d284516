// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hekl/modular_arith.hpp"

namespace hekl {

/// Width of the cache-resident block: the last rounds of a staged transform
/// operate on 2 * block_gap contiguous elements (8K words by default).
inline constexpr std::size_t kDefaultBlockGap = 4096;

/// Which kernel schedule a transform runs.
///
///  - Naive: one radix-2 pass over the whole array per round.
///  - Staged2: radix-2 passes over the whole array until the butterfly gap
///    reaches block_gap, then every block of 2 * block_gap elements is
///    carried to completion before the next block is touched.
///  - HighRadix: as Staged2 but with radix-4/8/16 register-resident kernels.
///
/// Staged variants always run at least one full-array pass before the block
/// pass, so a radix-8 transform of N <= 2^15 points touches the array exactly
/// twice.
struct NttVariant {
  enum class Kind { kNaive, kStaged2, kHighRadix };

  Kind kind = Kind::kNaive;
  unsigned radix = 2;
  std::size_t block_gap = kDefaultBlockGap;

  static NttVariant naive() { return {}; }
  static NttVariant staged2(std::size_t block_gap = kDefaultBlockGap) {
    return {Kind::kStaged2, 2, block_gap};
  }
  static NttVariant high_radix(unsigned radix, std::size_t block_gap = kDefaultBlockGap) {
    return {Kind::kHighRadix, radix, block_gap};
  }

  unsigned log_radix() const;

  /// Throws ParameterError if the variant cannot run at size n.
  void validate(std::size_t n) const;

  /// Same variant with block_gap clamped to at most n / 2.
  NttVariant fitted_to(std::size_t n) const;

  /// "naive", "staged2", "radix4", "radix8", "radix16"; an optional
  /// "@<gap>" suffix sets block_gap.
  std::string name() const;
  static NttVariant parse(std::string_view text);

  friend bool operator==(const NttVariant&, const NttVariant&) = default;
};

/// Per-run counters. alu_ops charges every butterfly at the radix_cost() rate
/// of the variant's radix (other + butterfly ops per work-item per round);
/// mem_elements counts loads plus stores against the full array, excluding
/// twiddle factors.
struct KernelProfile {
  uint64_t butterflies = 0;
  uint64_t alu_ops = 0;
  uint64_t mem_elements = 0;
  uint64_t rounds = 0;

  void reset() { *this = {}; }
  KernelProfile& operator+=(const KernelProfile& o) {
    butterflies += o.butterflies;
    alu_ops += o.alu_ops;
    mem_elements += o.mem_elements;
    rounds += o.rounds;
    return *this;
  }
};

/// Twiddle tables for the merged negacyclic transform of size n modulo p.
///
/// forward_twiddles()[k] = psi^bitrev(k) and inverse_twiddles()[k] =
/// psi^-bitrev(k), where psi is the smallest primitive 2n-th root of unity.
class NttTables {
 public:
  /// Throws ParameterError if n is not a power of two >= 2 or p != 1 mod 2n.
  NttTables(std::size_t n, const Modulus& modulus);

  std::size_t n() const { return n_; }
  int log_n() const { return log_n_; }
  const Modulus& modulus() const { return modulus_; }
  uint64_t psi() const { return psi_; }
  std::span<const MulOperand> forward_twiddles() const { return fwd_; }
  std::span<const MulOperand> inverse_twiddles() const { return inv_; }
  const MulOperand& n_inv() const { return n_inv_; }
  // inverse_twiddles()[1] * n^-1, used by the final inverse round.
  const MulOperand& scaled_last_twiddle() const { return last_scaled_; }

 private:
  std::size_t n_;
  int log_n_;
  Modulus modulus_;
  uint64_t psi_;
  std::vector<MulOperand> fwd_;
  std::vector<MulOperand> inv_;
  MulOperand n_inv_;
  MulOperand last_scaled_;
};

/// Negacyclic forward transform, natural order in, bit-reversed order out.
/// Inputs must be < p; outputs are fully reduced. Every variant produces the
/// same words.
void forward_ntt(std::span<uint64_t> poly, const NttTables& tables, const NttVariant& variant = {},
                 KernelProfile* profile = nullptr);

/// Inverse of forward_ntt, including the n^-1 and psi^-j scaling.
void inverse_ntt(std::span<uint64_t> poly, const NttTables& tables, const NttVariant& variant = {},
                 KernelProfile* profile = nullptr);

/// Three in-register rounds of a radix-8 forward kernel. twiddles holds the
/// seven factors in round order: 1 for (i, i+4), 2 for (0,2)(1,3) and
/// (4,6)(5,7), 4 for the consecutive pairs. Values stay in [0, 4p); with
/// reduce set they leave in [0, p).
void radix8_block_round(std::array<uint64_t, 8>& regs, std::span<const MulOperand, 7> twiddles,
                        const Modulus& modulus, bool reduce = false);

/// Two-round radix-4 analogue; twiddles: 1 for (0,2)(1,3), 2 for (0,1)(2,3).
void radix4_block_round(std::array<uint64_t, 4>& regs, std::span<const MulOperand, 3> twiddles,
                        const Modulus& modulus, bool reduce = false);

void dyadic_mul(std::span<const uint64_t> a, std::span<const uint64_t> b, std::span<uint64_t> out,
                const Modulus& modulus);

/// acc[i] = a[i] * b[i] + acc[i] with one reduction per element.
void dyadic_mad(std::span<uint64_t> acc, std::span<const uint64_t> a, std::span<const uint64_t> b,
                const Modulus& modulus);

/// a * b mod (x^n + 1, p) for coefficient-domain inputs.
std::vector<uint64_t> negacyclic_poly_mul(std::span<const uint64_t> a, std::span<const uint64_t> b,
                                          const NttTables& tables, const NttVariant& variant = {});

enum class Direction { kForward, kInverse };

/// Transforms a contiguous batch of instances x rows x n words in place. Row r
/// of every instance uses tables[r]. Rows are distributed over `threads`
/// workers; results do not depend on the thread count.
void batch_transform(std::span<uint64_t> data, std::size_t instances, std::span<const NttTables> tables,
                     Direction direction, const NttVariant& variant, unsigned threads = 1,
                     KernelProfile* profile = nullptr);

}  // namespace hekl
