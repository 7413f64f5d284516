// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include "hekl/ntt.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <thread>

#include "hekl/errors.hpp"
#include "hekl/perf_model.hpp"

namespace hekl {

// ---------------------------------------------------------------------------
// Variants

unsigned NttVariant::log_radix() const {
  switch (kind) {
    case Kind::kNaive:
    case Kind::kStaged2:
      return 1;
    case Kind::kHighRadix:
      return static_cast<unsigned>(std::countr_zero(radix));
  }
  return 1;
}

void NttVariant::validate(std::size_t n) const {
  if (n < 2 || !std::has_single_bit(n)) {
    throw ParameterError("transform size must be a power of two >= 2");
  }
  if (kind == Kind::kNaive) return;
  if (kind == Kind::kHighRadix && radix != 4 && radix != 8 && radix != 16) {
    throw ParameterError("high-radix kernels support radix 4, 8 or 16");
  }
  if (block_gap == 0 || !std::has_single_bit(block_gap)) {
    throw ParameterError("block_gap must be a power of two");
  }
  if (block_gap >= n) {
    throw ParameterError("block_gap " + std::to_string(block_gap) + " must be below n = " + std::to_string(n));
  }
}

NttVariant NttVariant::fitted_to(std::size_t n) const {
  NttVariant v = *this;
  v.block_gap = std::min(block_gap, std::max<std::size_t>(n / 2, 1));
  return v;
}

std::string NttVariant::name() const {
  std::string s;
  switch (kind) {
    case Kind::kNaive:
      return "naive";
    case Kind::kStaged2:
      s = "staged2";
      break;
    case Kind::kHighRadix:
      s = "radix" + std::to_string(radix);
      break;
  }
  if (block_gap != kDefaultBlockGap) s += "@" + std::to_string(block_gap);
  return s;
}

NttVariant NttVariant::parse(std::string_view text) {
  std::size_t gap = kDefaultBlockGap;
  if (auto at = text.find('@'); at != std::string_view::npos) {
    auto digits = text.substr(at + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), gap);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
      throw ParameterError("bad block gap in variant '" + std::string(text) + "'");
    }
    text = text.substr(0, at);
  }
  if (text == "naive") return naive();
  if (text == "staged2") return staged2(gap);
  if (text == "radix4") return high_radix(4, gap);
  if (text == "radix8") return high_radix(8, gap);
  if (text == "radix16") return high_radix(16, gap);
  throw ParameterError("unknown NTT variant '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Tables

namespace {

std::size_t bit_reverse(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

}  // namespace

NttTables::NttTables(std::size_t n, const Modulus& modulus) : n_(n), modulus_(modulus) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw ParameterError("transform size must be a power of two >= 2");
  }
  log_n_ = std::countr_zero(n);
  psi_ = find_primitive_2n_root(modulus, n);
  const uint64_t psi_inv = inv_mod(psi_, modulus);

  fwd_.resize(n);
  inv_.resize(n);
  uint64_t pw = 1;
  uint64_t pw_inv = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = bit_reverse(i, log_n_);
    fwd_[r] = MulOperand(pw, modulus);
    inv_[r] = MulOperand(pw_inv, modulus);
    pw = mul_mod(pw, psi_, modulus);
    pw_inv = mul_mod(pw_inv, psi_inv, modulus);
  }
  const uint64_t ninv = inv_mod(n, modulus);
  n_inv_ = MulOperand(ninv, modulus);
  last_scaled_ = MulOperand(mul_mod(inv_[1].value, ninv, modulus), modulus);
}

// ---------------------------------------------------------------------------
// Kernels
//
// A pass with radix R = 2^kLog at level m (m butterfly groups at its coarsest
// round) covers rounds m, 2m, ..., m * R/2. Work-item (i, k) holds the R
// elements base + u * stride, u < R, in registers for all kLog rounds. In
// round rho the pair distance is R >> (rho + 1) and element u belongs to
// group ((m + i) << rho) + (u >> (kLog - rho)) of the twiddle table.

namespace {

template <unsigned kLog>
inline void load_twiddles(std::array<MulOperand, (1u << kLog) - 1>& tw, const MulOperand* table,
                          std::size_t level_plus_group) {
  for (unsigned rho = 0; rho < kLog; ++rho) {
    const std::size_t first = level_plus_group << rho;
    for (std::size_t u = 0; u < (std::size_t{1} << rho); ++u) {
      tw[(std::size_t{1} << rho) - 1 + u] = table[first + u];
    }
  }
}

template <unsigned kLog>
inline void forward_rounds(std::array<uint64_t, (1u << kLog)>& x, const std::array<MulOperand, (1u << kLog) - 1>& tw,
                           uint64_t p) {
  constexpr std::size_t R = std::size_t{1} << kLog;
#pragma GCC unroll 4
  for (unsigned rho = 0; rho < kLog; ++rho) {
    const std::size_t h = R >> (rho + 1);
#pragma GCC unroll 16
    for (std::size_t u = 0; u < R; ++u) {
      if (u & h) continue;
      detail::ct_butterfly(x[u], x[u + h], tw[(std::size_t{1} << rho) - 1 + (u >> (kLog - rho))], p);
    }
  }
}

// Columns processed together when the stride allows it, so every load and
// store touches kTile consecutive words instead of R words a stride apart.
constexpr std::size_t kTile = 8;

// Without wide multiply instructions the vectorizer emulates the 64x64->128
// product and loses badly to scalar code.
#define HEKL_SCALAR_KERNEL __attribute__((optimize("no-tree-vectorize")))

template <unsigned kLog>
HEKL_SCALAR_KERNEL void forward_pass(uint64_t* a, std::size_t level, std::size_t group_base, std::size_t groups, std::size_t stride,
                  const NttTables& t, bool reduce) {
  constexpr std::size_t R = std::size_t{1} << kLog;
  const uint64_t p = t.modulus().value();
  const MulOperand* table = t.forward_twiddles().data();
  std::array<MulOperand, R - 1> tw;
  for (std::size_t i = 0; i < groups; ++i) {
    load_twiddles<kLog>(tw, table, level + group_base + i);
    uint64_t* base = a + i * R * stride;
    if (stride % kTile == 0) {
      alignas(64) uint64_t tile[R][kTile];
      for (std::size_t k = 0; k < stride; k += kTile) {
        for (std::size_t u = 0; u < R; ++u) std::copy_n(base + k + u * stride, kTile, tile[u]);
#pragma GCC unroll 4
        for (unsigned rho = 0; rho < kLog; ++rho) {
          const std::size_t h = R >> (rho + 1);
          for (std::size_t u = 0; u < R; ++u) {
            if (u & h) continue;
            const MulOperand w = tw[(std::size_t{1} << rho) - 1 + (u >> (kLog - rho))];
#pragma GCC unroll 8
            for (std::size_t c = 0; c < kTile; ++c) detail::ct_butterfly(tile[u][c], tile[u + h][c], w, p);
          }
        }
        if (reduce) {
          for (std::size_t u = 0; u < R; ++u) {
            for (std::size_t c = 0; c < kTile; ++c) tile[u][c] = detail::reduce_from_4p(tile[u][c], p);
          }
        }
        for (std::size_t u = 0; u < R; ++u) std::copy_n(tile[u], kTile, base + k + u * stride);
      }
      continue;
    }
    std::array<uint64_t, R> x;
    for (std::size_t k = 0; k < stride; ++k) {
      for (std::size_t u = 0; u < R; ++u) x[u] = base[k + u * stride];
      forward_rounds<kLog>(x, tw, p);
      if (reduce) {
        for (std::size_t u = 0; u < R; ++u) x[u] = detail::reduce_from_4p(x[u], p);
      }
      for (std::size_t u = 0; u < R; ++u) base[k + u * stride] = x[u];
    }
  }
}

template <unsigned kLog>
HEKL_SCALAR_KERNEL inline void inverse_rounds(uint64_t* const* x, std::size_t width, const std::array<MulOperand, (1u << kLog) - 1>& tw,
                           uint64_t p, bool last, const MulOperand& n_inv, const MulOperand& scaled) {
  constexpr std::size_t R = std::size_t{1} << kLog;
  const uint64_t two_p = 2 * p;
#pragma GCC unroll 4
  for (unsigned r = kLog; r > 1; --r) {
    const unsigned rho = r - 1;
    const std::size_t h = R >> (rho + 1);
    for (std::size_t u = 0; u < R; ++u) {
      if (u & h) continue;
      const MulOperand w = tw[(std::size_t{1} << rho) - 1 + (u >> (kLog - rho))];
      for (std::size_t c = 0; c < width; ++c) detail::gs_butterfly(x[u][c], x[u + h][c], w, p);
    }
  }
  constexpr std::size_t h = R / 2;
  if (!last) {
    const MulOperand w = tw[0];
    for (std::size_t u = 0; u < h; ++u) {
      for (std::size_t c = 0; c < width; ++c) detail::gs_butterfly(x[u][c], x[u + h][c], w, p);
    }
    return;
  }
  for (std::size_t u = 0; u < h; ++u) {
    for (std::size_t c = 0; c < width; ++c) {
      const uint64_t s = x[u][c] + x[u + h][c];
      const uint64_t d = x[u][c] - x[u + h][c] + two_p;
      const uint64_t y0 = mul_mod_lazy(s, n_inv, p);
      const uint64_t y1 = mul_mod_lazy(d, scaled, p);
      x[u][c] = y0 >= p ? y0 - p : y0;
      x[u + h][c] = y1 >= p ? y1 - p : y1;
    }
  }
}

// `last` marks the pass containing the level-1 round, where the n^-1 scaling
// and the final reduction to [0, p) are folded in.
template <unsigned kLog>
HEKL_SCALAR_KERNEL void inverse_pass(uint64_t* a, std::size_t level, std::size_t group_base, std::size_t groups, std::size_t stride,
                  const NttTables& t, bool last) {
  constexpr std::size_t R = std::size_t{1} << kLog;
  const uint64_t p = t.modulus().value();
  const MulOperand* table = t.inverse_twiddles().data();
  const MulOperand n_inv = t.n_inv();
  const MulOperand scaled = t.scaled_last_twiddle();
  std::array<MulOperand, R - 1> tw;
  alignas(64) uint64_t tile[R][kTile];
  uint64_t* rows[R];
  for (std::size_t u = 0; u < R; ++u) rows[u] = tile[u];
  for (std::size_t i = 0; i < groups; ++i) {
    load_twiddles<kLog>(tw, table, level + group_base + i);
    uint64_t* base = a + i * R * stride;
    if (stride % kTile == 0) {
      for (std::size_t k = 0; k < stride; k += kTile) {
        for (std::size_t u = 0; u < R; ++u) std::copy_n(base + k + u * stride, kTile, tile[u]);
        inverse_rounds<kLog>(rows, kTile, tw, p, last, n_inv, scaled);
        for (std::size_t u = 0; u < R; ++u) std::copy_n(tile[u], kTile, base + k + u * stride);
      }
      continue;
    }
    for (std::size_t k = 0; k < stride; ++k) {
      for (std::size_t u = 0; u < R; ++u) tile[u][0] = base[k + u * stride];
      inverse_rounds<kLog>(rows, 1, tw, p, last, n_inv, scaled);
      for (std::size_t u = 0; u < R; ++u) base[k + u * stride] = tile[u][0];
    }
  }
}

void dispatch_forward(unsigned log_r, uint64_t* a, std::size_t level, std::size_t group_base, std::size_t groups,
                      std::size_t stride, const NttTables& t, bool reduce) {
  switch (log_r) {
    case 1: return forward_pass<1>(a, level, group_base, groups, stride, t, reduce);
    case 2: return forward_pass<2>(a, level, group_base, groups, stride, t, reduce);
    case 3: return forward_pass<3>(a, level, group_base, groups, stride, t, reduce);
    case 4: return forward_pass<4>(a, level, group_base, groups, stride, t, reduce);
  }
  throw ParameterError("unsupported kernel radix");
}

void dispatch_inverse(unsigned log_r, uint64_t* a, std::size_t level, std::size_t group_base, std::size_t groups,
                      std::size_t stride, const NttTables& t, bool last) {
  switch (log_r) {
    case 1: return inverse_pass<1>(a, level, group_base, groups, stride, t, last);
    case 2: return inverse_pass<2>(a, level, group_base, groups, stride, t, last);
    case 3: return inverse_pass<3>(a, level, group_base, groups, stride, t, last);
    case 4: return inverse_pass<4>(a, level, group_base, groups, stride, t, last);
  }
  throw ParameterError("unsupported kernel radix");
}

// ---------------------------------------------------------------------------
// Schedules

struct Pass {
  unsigned log_r;
  std::size_t level;  // groups at the pass's coarsest round (array- or block-relative)
};

struct Schedule {
  std::vector<Pass> global;  // full-array passes
  std::size_t block = 0;     // block size of the cache-resident pass
  std::vector<Pass> local;   // levels relative to one block
};

Schedule plan(std::size_t n, const NttVariant& v) {
  const unsigned log_n = static_cast<unsigned>(std::countr_zero(n));
  Schedule s;
  if (v.kind == NttVariant::Kind::kNaive) {
    for (unsigned j = 0; j < log_n; ++j) s.global.push_back({1, std::size_t{1} << j});
    s.block = n;
    return s;
  }
  const unsigned r = v.log_radix();
  unsigned used = 0;
  while (log_n - used > r && (s.global.empty() || (n >> used) > 2 * v.block_gap)) {
    s.global.push_back({r, std::size_t{1} << used});
    used += r;
  }
  s.block = n >> used;
  unsigned rem = log_n - used;
  std::size_t lm = 1;
  while (rem >= r) {
    s.local.push_back({r, lm});
    lm <<= r;
    rem -= r;
  }
  if (rem > 0) s.local.push_back({rem, lm});
  return s;
}

// Butterflies of one pass priced at the per-radix cost table rate.
uint64_t pass_alu_ops(std::size_t n, unsigned levels, const NttVariant& v) {
  const unsigned log_r = v.log_radix();
  const unsigned radix = 1u << log_r;
  return static_cast<uint64_t>(n) * levels * radix_cost(radix).total_ops / (radix * log_r);
}

void charge(KernelProfile* prof, std::size_t n, unsigned levels, const NttVariant& v, bool touches_array) {
  if (prof == nullptr) return;
  prof->butterflies += static_cast<uint64_t>(n / 2) * levels;
  prof->alu_ops += pass_alu_ops(n, levels, v);
  prof->rounds += levels;
  if (touches_array) prof->mem_elements += 2 * static_cast<uint64_t>(n);
}

void check_input(std::span<uint64_t> poly, const NttTables& tables, const NttVariant& variant) {
  if (poly.size() != tables.n()) {
    throw ParameterError("polynomial length " + std::to_string(poly.size()) + " does not match tables of size " +
                         std::to_string(tables.n()));
  }
  variant.validate(tables.n());
}

}  // namespace

void forward_ntt(std::span<uint64_t> poly, const NttTables& tables, const NttVariant& variant, KernelProfile* profile) {
  check_input(poly, tables, variant);
  const std::size_t n = tables.n();
  const Schedule s = plan(n, variant);
  uint64_t* a = poly.data();

  for (std::size_t k = 0; k < s.global.size(); ++k) {
    const Pass& pass = s.global[k];
    const std::size_t stride = n / ((std::size_t{1} << pass.log_r) * pass.level);
    const bool reduce = s.local.empty() && k + 1 == s.global.size();
    dispatch_forward(pass.log_r, a, pass.level, 0, pass.level, stride, tables, reduce);
    charge(profile, n, pass.log_r, variant, true);
  }
  if (s.local.empty()) return;

  const std::size_t blocks = n / s.block;
  unsigned local_levels = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    uint64_t* block = a + b * s.block;
    for (std::size_t k = 0; k < s.local.size(); ++k) {
      const Pass& pass = s.local[k];
      const std::size_t stride = s.block / ((std::size_t{1} << pass.log_r) * pass.level);
      dispatch_forward(pass.log_r, block, blocks * pass.level, b * pass.level, pass.level, stride, tables,
                       k + 1 == s.local.size());
    }
  }
  for (const Pass& pass : s.local) local_levels += pass.log_r;
  charge(profile, n, local_levels, variant, true);
}

void inverse_ntt(std::span<uint64_t> poly, const NttTables& tables, const NttVariant& variant, KernelProfile* profile) {
  check_input(poly, tables, variant);
  const std::size_t n = tables.n();
  const Schedule s = plan(n, variant);
  uint64_t* a = poly.data();

  if (!s.local.empty()) {
    const std::size_t blocks = n / s.block;
    unsigned local_levels = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      uint64_t* block = a + b * s.block;
      for (auto it = s.local.rbegin(); it != s.local.rend(); ++it) {
        const std::size_t stride = s.block / ((std::size_t{1} << it->log_r) * it->level);
        const bool last = blocks == 1 && it->level == 1;
        dispatch_inverse(it->log_r, block, blocks * it->level, b * it->level, it->level, stride, tables, last);
      }
    }
    for (const Pass& pass : s.local) local_levels += pass.log_r;
    charge(profile, n, local_levels, variant, true);
  }
  for (auto it = s.global.rbegin(); it != s.global.rend(); ++it) {
    const std::size_t stride = n / ((std::size_t{1} << it->log_r) * it->level);
    dispatch_inverse(it->log_r, a, it->level, 0, it->level, stride, tables, it->level == 1);
    charge(profile, n, it->log_r, variant, true);
  }
}

void radix8_block_round(std::array<uint64_t, 8>& regs, std::span<const MulOperand, 7> twiddles,
                        const Modulus& modulus, bool reduce) {
  std::array<MulOperand, 7> tw;
  std::copy(twiddles.begin(), twiddles.end(), tw.begin());
  forward_rounds<3>(regs, tw, modulus.value());
  if (reduce) {
    for (auto& x : regs) x = detail::reduce_from_4p(x, modulus.value());
  }
}

void radix4_block_round(std::array<uint64_t, 4>& regs, std::span<const MulOperand, 3> twiddles,
                        const Modulus& modulus, bool reduce) {
  std::array<MulOperand, 3> tw;
  std::copy(twiddles.begin(), twiddles.end(), tw.begin());
  forward_rounds<2>(regs, tw, modulus.value());
  if (reduce) {
    for (auto& x : regs) x = detail::reduce_from_4p(x, modulus.value());
  }
}

// ---------------------------------------------------------------------------
// Element-wise ops

void dyadic_mul(std::span<const uint64_t> a, std::span<const uint64_t> b, std::span<uint64_t> out,
                const Modulus& modulus) {
  if (a.size() != b.size() || a.size() != out.size()) throw ParameterError("dyadic_mul: length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = mul_mod(a[i], b[i], modulus);
}

void dyadic_mad(std::span<uint64_t> acc, std::span<const uint64_t> a, std::span<const uint64_t> b,
                const Modulus& modulus) {
  if (a.size() != b.size() || a.size() != acc.size()) throw ParameterError("dyadic_mad: length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) acc[i] = mad_mod(a[i], b[i], acc[i], modulus);
}

std::vector<uint64_t> negacyclic_poly_mul(std::span<const uint64_t> a, std::span<const uint64_t> b,
                                          const NttTables& tables, const NttVariant& variant) {
  if (a.size() != tables.n() || b.size() != tables.n()) {
    throw ParameterError("negacyclic_poly_mul: operand length does not match tables");
  }
  std::vector<uint64_t> fa(a.begin(), a.end());
  std::vector<uint64_t> fb(b.begin(), b.end());
  forward_ntt(fa, tables, variant);
  forward_ntt(fb, tables, variant);
  dyadic_mul(fa, fb, fa, tables.modulus());
  inverse_ntt(fa, tables, variant);
  return fa;
}

// ---------------------------------------------------------------------------
// Batches

void batch_transform(std::span<uint64_t> data, std::size_t instances, std::span<const NttTables> tables,
                     Direction direction, const NttVariant& variant, unsigned threads, KernelProfile* profile) {
  if (tables.empty()) throw ParameterError("batch_transform: no tables");
  const std::size_t n = tables.front().n();
  for (const auto& t : tables) {
    if (t.n() != n) throw ParameterError("batch_transform: tables of different sizes");
  }
  const std::size_t rows = instances * tables.size();
  if (data.size() != rows * n) throw ParameterError("batch_transform: data size does not match batch shape");
  variant.validate(n);

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(rows, 1))));
  std::vector<KernelProfile> profiles(threads);
  auto work = [&](unsigned w) {
    const std::size_t begin = rows * w / threads;
    const std::size_t end = rows * (w + 1) / threads;
    KernelProfile* prof = profile ? &profiles[w] : nullptr;
    for (std::size_t r = begin; r < end; ++r) {
      auto row = data.subspan(r * n, n);
      const NttTables& t = tables[r % tables.size()];
      if (direction == Direction::kForward) {
        forward_ntt(row, t, variant, prof);
      } else {
        inverse_ntt(row, t, variant, prof);
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  if (profile) {
    for (const auto& p : profiles) *profile += p;
  }
}

}  // namespace hekl
