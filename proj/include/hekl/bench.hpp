// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hekl/buffer_pool.hpp"
#include "hekl/ntt.hpp"
#include "hekl/perf_model.hpp"

namespace hekl {

enum class OutputFormat { kCsv, kJson };

struct MatmulShape {
  std::size_t m = 4;
  std::size_t n = 4;
  std::size_t k = 4;
};

struct BenchConfig {
  std::string command;
  std::vector<std::size_t> sizes;     // empty: command default
  std::size_t levels = 0;             // 0: command default
  std::size_t instances = 64;
  std::vector<NttVariant> variants;   // empty: command default
  unsigned threads = 1;
  int delta_bits = 40;
  std::size_t reps = 5;
  std::size_t warmup = 1;
  bool pool = true;
  uint64_t seed = 1;
  std::optional<MachineParams> machine;
  MatmulShape shape;
};

/// One output line. Optional fields print as empty CSV cells and JSON nulls.
struct BenchRow {
  std::string command;
  std::string variant;  // he-bench: "<routine>/<kernel>"
  std::size_t n = 0;
  std::size_t levels = 0;
  std::size_t instances = 0;
  unsigned threads = 1;
  std::optional<double> median_ns;
  std::optional<double> speedup;
  double alu_ops = 0;
  double mem_bytes = 0;
  double density = 0;
  bool check = false;

  // JSON only.
  std::optional<double> ntt_share;
  std::optional<double> max_error;
  std::string routine;
  std::string kernel;  // NTT variant; speedups compare rows against kernel "naive"
  std::string bound;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::optional<PoolStats> pool;
  std::optional<uint64_t> allocations_after_warmup;
  bool all_passed() const;
};

inline constexpr const char* kBenchCsvHeader =
    "command,variant,n,L,instances,threads,median_ns,speedup,alu_ops,mem_bytes,density,check";

/// The five routines timed by he-bench, in reporting order.
const std::vector<std::string>& he_routines();

/// Throws ParameterError for an invalid configuration or a variant that
/// cannot run at a requested size.
BenchReport run_ntt_bench(const BenchConfig& config);
BenchReport run_he_bench(const BenchConfig& config);
BenchReport run_matmul(const BenchConfig& config);
/// Throws ParameterError when config.machine is unset.
BenchReport run_density(const BenchConfig& config);
BenchReport run_command(const BenchConfig& config);

void write_report(std::ostream& os, const BenchReport& report, OutputFormat format);

}  // namespace hekl
