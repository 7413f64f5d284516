// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "hekl/errors.hpp"
#include "hekl/ntt.hpp"
#include "hekl/perf_model.hpp"
#include "hekl/rns.hpp"

namespace hekl {
namespace {

std::vector<NttVariant> all_variants(std::size_t n) {
  std::vector<NttVariant> out{NttVariant::naive()};
  if (n < 4) return out;
  const std::size_t gap = std::min(kDefaultBlockGap, n / 2);
  out.push_back(NttVariant::staged2(gap));
  for (unsigned r : {4u, 8u, 16u}) out.push_back(NttVariant::high_radix(r, gap));
  // A small gap forces several global passes.
  if (n >= 64) {
    out.push_back(NttVariant::staged2(4));
    out.push_back(NttVariant::high_radix(8, 4));
    out.push_back(NttVariant::high_radix(4, 8));
  }
  return out;
}

std::vector<uint64_t> random_poly(std::mt19937_64& rng, std::size_t n, uint64_t p) {
  std::uniform_int_distribution<uint64_t> dist(0, p - 1);
  std::vector<uint64_t> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

std::size_t bitrev(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i, x >>= 1) r = (r << 1) | (x & 1);
  return r;
}

// X_k = sum_j a_j psi^j omega^(j k') with omega = psi^2, placed at bit-reversed k.
std::vector<uint64_t> dft_oracle(const std::vector<uint64_t>& a, const NttTables& t) {
  const std::size_t n = a.size();
  const Modulus& m = t.modulus();
  std::vector<uint64_t> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const uint64_t root = pow_mod(t.psi(), 2 * k + 1, m);  // psi * omega^k
    uint64_t acc = 0;
    uint64_t pw = 1;
    for (std::size_t j = 0; j < n; ++j) {
      acc = add_mod(acc, mul_mod(a[j], pw, m), m);
      pw = mul_mod(pw, root, m);
    }
    out[bitrev(k, t.log_n())] = acc;
  }
  return out;
}

std::vector<uint64_t> schoolbook(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b, const Modulus& m) {
  const std::size_t n = a.size();
  std::vector<uint64_t> c(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const uint64_t prod = mul_mod(a[i], b[j], m);
      if (i + j < n) {
        c[i + j] = add_mod(c[i + j], prod, m);
      } else {
        c[i + j - n] = sub_mod(c[i + j - n], prod, m);
      }
    }
  }
  return c;
}

TEST(NttTables, Construction) {
  const NttTables t(8, Modulus(97));
  EXPECT_EQ(pow_mod(t.psi(), 8, t.modulus()), 96u);
  EXPECT_EQ(t.forward_twiddles()[0].value, 1u);
  EXPECT_EQ(mul_mod(t.n_inv().value, 8, t.modulus()), 1u);

  const NttTables t2(2, Modulus(5));
  EXPECT_TRUE(t2.psi() == 2 || t2.psi() == 3);
  EXPECT_EQ(mul_mod(t2.psi(), t2.psi(), t2.modulus()), 4u);

  EXPECT_THROW(NttTables(8, Modulus(7)), ParameterError);
  EXPECT_THROW(NttTables(12, Modulus(97)), ParameterError);
}

TEST(NttVariant, ValidationAndNames) {
  EXPECT_THROW(NttVariant::high_radix(8).validate(4096), ParameterError);  // gap 4096 >= n
  EXPECT_NO_THROW(NttVariant::high_radix(8).validate(8192));
  EXPECT_THROW(NttVariant::high_radix(32, 16).validate(1024), ParameterError);
  EXPECT_THROW(NttVariant::staged2(12).validate(1024), ParameterError);
  EXPECT_THROW(NttVariant::naive().validate(12), ParameterError);
  EXPECT_EQ(NttVariant::high_radix(8).fitted_to(1024).block_gap, 512u);
  for (const char* s : {"naive", "staged2", "radix4", "radix8", "radix16", "radix8@256"}) {
    EXPECT_EQ(NttVariant::parse(s).name(), s);
  }
  EXPECT_THROW(NttVariant::parse("radix3"), ParameterError);
  EXPECT_THROW(NttVariant::parse("radix8@x"), ParameterError);
}

TEST(ForwardNtt, TrivialInputs) {
  const std::size_t n = 64;
  const NttTables t(n, generate_primes(n, 40, 1).front());
  for (const auto& v : all_variants(n)) {
    std::vector<uint64_t> zero(n, 0);
    forward_ntt(zero, t, v);
    EXPECT_EQ(zero, std::vector<uint64_t>(n, 0)) << v.name();
    inverse_ntt(zero, t, v);
    EXPECT_EQ(zero, std::vector<uint64_t>(n, 0)) << v.name();

    std::vector<uint64_t> c(n, 0);
    c[0] = 12345;
    forward_ntt(c, t, v);
    EXPECT_EQ(c, std::vector<uint64_t>(n, 12345)) << v.name();
    inverse_ntt(c, t, v);
    std::vector<uint64_t> want(n, 0);
    want[0] = 12345;
    EXPECT_EQ(c, want) << v.name();
  }
}

TEST(ForwardNtt, N8P97MatchesDft) {
  const NttTables t(8, Modulus(97));
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_poly(rng, 8, 97);
    for (const auto& v : all_variants(8)) {
      auto x = a;
      forward_ntt(x, t, v);
      ASSERT_EQ(x, dft_oracle(a, t)) << v.name();
    }
  }
}

TEST(ForwardNtt, AllVariantsMatchDftOracleUpTo256) {
  std::mt19937_64 rng(256);
  for (std::size_t n = 2; n <= 256; n <<= 1) {
    const NttTables t(n, generate_primes(n, 60, 1).front());
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = random_poly(rng, n, t.modulus().value());
      const auto want = dft_oracle(a, t);
      for (const auto& v : all_variants(n)) {
        auto x = a;
        forward_ntt(x, t, v);
        ASSERT_EQ(x, want) << "n=" << n << " " << v.name();
      }
    }
  }
}

TEST(ForwardNtt, VariantsBitIdenticalToNaive) {
  std::mt19937_64 rng(16);
  for (std::size_t n = 16; n <= 32768; n <<= 1) {
    const NttTables t(n, generate_primes(n, 60, 1).front());
    const int trials = n <= 1024 ? 100 : 4;
    for (int trial = 0; trial < trials; ++trial) {
      const auto a = random_poly(rng, n, t.modulus().value());
      auto ref = a;
      forward_ntt(ref, t, NttVariant::naive());
      for (const auto& v : all_variants(n)) {
        auto x = a;
        forward_ntt(x, t, v);
        ASSERT_EQ(x, ref) << "n=" << n << " " << v.name();
      }
    }
  }
}

TEST(InverseNtt, RoundTripAllSizes) {
  std::mt19937_64 rng(17);
  for (std::size_t n = 2; n <= 32768; n <<= 1) {
    const NttTables t(n, generate_primes(n, 60, 1).front());
    const auto a = random_poly(rng, n, t.modulus().value());
    for (const auto& v : all_variants(n)) {
      auto x = a;
      forward_ntt(x, t, v);
      for (auto w : x) ASSERT_LT(w, t.modulus().value());
      inverse_ntt(x, t, v);
      ASSERT_EQ(x, a) << "n=" << n << " " << v.name();
    }
  }
}

TEST(ForwardNtt, Linearity) {
  std::mt19937_64 rng(18);
  const std::size_t n = 1024;
  const NttTables t(n, generate_primes(n, 59, 1).front());
  const Modulus& m = t.modulus();
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_poly(rng, n, m.value());
    const auto b = random_poly(rng, n, m.value());
    const uint64_t alpha = random_poly(rng, 1, m.value())[0];
    std::vector<uint64_t> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = mad_mod(alpha, a[i], b[i], m);
    auto fa = a;
    auto fb = b;
    forward_ntt(fa, t, NttVariant::high_radix(8, 256));
    forward_ntt(fb, t, NttVariant::high_radix(8, 256));
    forward_ntt(mix, t, NttVariant::high_radix(8, 256));
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(mix[i], mad_mod(alpha, fa[i], fb[i], m));
  }
}

TEST(Radix8BlockRound, EqualsFullTransformAtN8) {
  const NttTables t(8, Modulus(97));
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_poly(rng, 8, 97);
    std::array<uint64_t, 8> regs;
    std::copy(a.begin(), a.end(), regs.begin());
    std::span<const MulOperand, 7> tw(t.forward_twiddles().data() + 1, 7);
    radix8_block_round(regs, tw, t.modulus());
    auto ref = a;
    forward_ntt(ref, t, NttVariant::naive());
    for (std::size_t i = 0; i < 8; ++i) {
      ASSERT_LT(regs[i], 4 * 97u);
      ASSERT_EQ(regs[i] % 97, ref[i]);
    }
    regs.fill(0);
    radix8_block_round(regs, tw, t.modulus(), true);
    for (auto r : regs) ASSERT_EQ(r, 0u);
  }
}

TEST(Radix4BlockRound, EqualsTwoRadix2Rounds) {
  const NttTables t(4, Modulus(97));
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_poly(rng, 4, 97);
    std::array<uint64_t, 4> regs;
    std::copy(a.begin(), a.end(), regs.begin());
    radix4_block_round(regs, std::span<const MulOperand, 3>(t.forward_twiddles().data() + 1, 3), t.modulus(), true);
    auto ref = a;
    forward_ntt(ref, t, NttVariant::naive());
    for (std::size_t i = 0; i < 4; ++i) ASSERT_EQ(regs[i], ref[i]);
  }
}

TEST(Dyadic, MulAndMad) {
  const Modulus m(97);
  std::mt19937_64 rng(11);
  const auto a = random_poly(rng, 64, 97);
  const auto b = random_poly(rng, 64, 97);
  std::vector<uint64_t> out(64);
  dyadic_mul(a, std::vector<uint64_t>(64, 0), out, m);
  EXPECT_EQ(out, std::vector<uint64_t>(64, 0));
  dyadic_mul(a, std::vector<uint64_t>(64, 1), out, m);
  EXPECT_EQ(out, a);
  dyadic_mul(a, b, out, m);
  for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(out[i], a[i] * b[i] % 97);
  auto acc = b;
  dyadic_mad(acc, a, b, m);
  for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(acc[i], (a[i] * b[i] + b[i]) % 97);
  std::vector<uint64_t> shorter(63);
  EXPECT_THROW(dyadic_mul(a, shorter, out, m), ParameterError);
  EXPECT_THROW(dyadic_mad(acc, a, shorter, m), ParameterError);
}

TEST(NegacyclicMul, Examples) {
  const NttTables t2(2, Modulus(97));
  const std::vector<uint64_t> x{0, 1};
  EXPECT_EQ(negacyclic_poly_mul(x, x, t2), (std::vector<uint64_t>{96, 0}));

  std::mt19937_64 rng(12);
  const NttTables t(64, generate_primes(64, 50, 1).front());
  const auto b = random_poly(rng, 64, t.modulus().value());
  std::vector<uint64_t> one(64, 0);
  one[0] = 1;
  EXPECT_EQ(negacyclic_poly_mul(one, b, t), b);
}

TEST(NegacyclicMul, MatchesSchoolbook) {
  std::mt19937_64 rng(13);
  for (std::size_t n = 2; n <= 256; n <<= 1) {
    const NttTables t(n, generate_primes(n, 60, 1).front());
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_poly(rng, n, t.modulus().value());
      const auto b = random_poly(rng, n, t.modulus().value());
      for (const auto& v : all_variants(n)) {
        ASSERT_EQ(negacyclic_poly_mul(a, b, t, v), schoolbook(a, b, t.modulus())) << n << " " << v.name();
      }
    }
  }
}

TEST(NegacyclicMul, SpotCheckAt32768) {
  const std::size_t n = 32768;
  const NttTables t(n, generate_primes(n, 60, 1).front());
  const Modulus& m = t.modulus();
  std::mt19937_64 rng(14);
  const auto a = random_poly(rng, n, m.value());
  const auto b = random_poly(rng, n, m.value());
  const auto c = negacyclic_poly_mul(a, b, t, NttVariant::high_radix(8));
  for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{12345}, n - 1}) {
    uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const uint64_t prod = mul_mod(a[i], b[(k + n - i) % n], m);
      acc = i <= k ? add_mod(acc, prod, m) : sub_mod(acc, prod, m);
    }
    EXPECT_EQ(c[k], acc) << k;
  }
}

TEST(BatchTransform, MatchesSingleTransformsAndIsThreadInvariant) {
  const std::size_t n = 1024;
  const std::size_t rows = 8;
  const std::size_t instances = 16;
  std::vector<NttTables> tables;
  for (const auto& q : generate_primes(n, 55, rows)) tables.emplace_back(n, q);
  std::mt19937_64 rng(15);
  std::vector<uint64_t> data(instances * rows * n);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = rng() % tables[(i / n) % rows].modulus().value();

  auto single = data;
  for (std::size_t i = 0; i < instances * rows; ++i) {
    forward_ntt(std::span(single).subspan(i * n, n), tables[i % rows], NttVariant::high_radix(8, 256));
  }
  for (unsigned threads : {1u, 3u, 8u}) {
    auto batch = data;
    KernelProfile prof;
    batch_transform(batch, instances, tables, Direction::kForward, NttVariant::high_radix(8, 256), threads, &prof);
    EXPECT_EQ(batch, single) << threads;
    EXPECT_EQ(prof.butterflies, instances * rows * (n / 2) * 10);
    batch_transform(batch, instances, tables, Direction::kInverse, NttVariant::high_radix(8, 256), threads);
    EXPECT_EQ(batch, data) << threads;
  }

  auto one = std::vector<uint64_t>(data.begin(), data.begin() + rows * n);
  auto ref = one;
  for (std::size_t r = 0; r < rows; ++r) forward_ntt(std::span(ref).subspan(r * n, n), tables[r]);
  batch_transform(one, 1, tables, Direction::kForward, NttVariant::naive());
  EXPECT_EQ(one, ref);
}

TEST(KernelProfile, NaiveTouchesArrayOncePerRound) {
  for (std::size_t n = 1024; n <= 32768; n <<= 1) {
    const NttTables t(n, generate_primes(n, 60, 1).front());
    std::vector<uint64_t> a(n, 1);
    KernelProfile prof;
    forward_ntt(a, t, NttVariant::naive(), &prof);
    const uint64_t log_n = std::countr_zero(n);
    EXPECT_EQ(prof.mem_elements, 2 * n * log_n);
    EXPECT_EQ(prof.butterflies, n / 2 * log_n);
    EXPECT_EQ(prof.rounds, log_n);
    EXPECT_EQ(prof.alu_ops, n / 2 * 48 * log_n);
    prof.reset();
    EXPECT_EQ(prof.mem_elements, 0u);
  }
}

TEST(KernelProfile, StagedCountsMatchModel) {
  for (std::size_t n = 1024; n <= 32768; n <<= 1) {
    const NttTables t(n, generate_primes(n, 60, 1).front());
    for (NttVariant v : {NttVariant::staged2(), NttVariant::high_radix(4), NttVariant::high_radix(8),
                         NttVariant::high_radix(16), NttVariant::high_radix(8, 64), NttVariant::staged2(16)}) {
      v = v.fitted_to(n);
      std::vector<uint64_t> a(n, 3);
      KernelProfile prof;
      forward_ntt(a, t, v, &prof);
      const DensityReport model = operational_density(v, n);
      EXPECT_EQ(8.0 * static_cast<double>(prof.mem_elements), model.total_mem_bytes) << n << " " << v.name();
      EXPECT_EQ(prof.mem_elements, 2 * n * (model_global_passes(v, n) + 1));
      KernelProfile inv;
      inverse_ntt(a, t, v, &inv);
      EXPECT_EQ(inv.mem_elements, prof.mem_elements);
    }
    std::vector<uint64_t> a(n, 3);
    KernelProfile prof;
    forward_ntt(a, t, NttVariant::high_radix(8).fitted_to(n), &prof);
    EXPECT_EQ(prof.mem_elements, 4 * n);
  }
}

TEST(Ntt, SizeMismatchThrows) {
  const NttTables t(64, Modulus(257));
  std::vector<uint64_t> a(32);
  EXPECT_THROW(forward_ntt(a, t), ParameterError);
  std::vector<uint64_t> b(64);
  EXPECT_THROW(forward_ntt(b, t, NttVariant::high_radix(8, 64)), ParameterError);
}

}  // namespace
}  // namespace hekl
