// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include "hekl/perf_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "hekl/errors.hpp"

namespace hekl {

RadixCost radix_cost(unsigned radix) {
  switch (radix) {
    case 2: return {2, 20, 28, 48};
    case 4: return {4, 45, 112, 157};
    case 8: return {8, 120, 336, 456};
    case 16: return {16, 260, 896, 1156};
  }
  throw ParameterError("no cost row for radix " + std::to_string(radix));
}

const char* to_string(Bound b) { return b == Bound::kCompute ? "compute" : "memory"; }

namespace {

void finish(DensityReport& r, const MachineParams& machine) {
  r.density = r.total_alu_ops / r.total_mem_bytes;
  if (machine.peak_int64_ops_per_s > 0 && machine.mem_bandwidth_bytes_per_s > 0) {
    r.bound = r.density >= machine.ridge() ? Bound::kCompute : Bound::kMemory;
  }
}

}  // namespace

std::size_t model_global_passes(const NttVariant& variant, std::size_t n) {
  variant.validate(n);
  const auto log_n = static_cast<long>(std::countr_zero(n));
  if (variant.kind == NttVariant::Kind::kNaive) return static_cast<std::size_t>(log_n);
  const auto s = static_cast<long>(variant.log_radix());
  if (log_n <= s) return 0;
  const auto ceil_div = [](long a, long b) { return a <= 0 ? 0 : (a + b - 1) / b; };
  // Stop once the remaining sub-transform fits a block or one kernel pass
  // would exhaust every level.
  const long block_log = std::countr_zero(2 * variant.block_gap);
  const long passes = std::min(ceil_div(log_n - s, s), std::max(1L, ceil_div(log_n - block_log, s)));
  return static_cast<std::size_t>(passes);
}

DensityReport operational_density(const NttVariant& variant, std::size_t n, const MachineParams& machine) {
  variant.validate(n);
  DensityReport r;
  r.variant = variant.name();
  r.n = n;
  const double log_n = std::countr_zero(n);
  const double words = static_cast<double>(n);
  if (variant.kind == NttVariant::Kind::kNaive) {
    r.total_alu_ops = words / 2 * static_cast<double>(radix_cost(2).total_ops) * log_n;
    r.total_mem_bytes = 8.0 * 2.0 * words * log_n;
  } else {
    const unsigned radix = variant.kind == NttVariant::Kind::kStaged2 ? 2 : variant.radix;
    const double log_r = std::countr_zero(radix);
    r.total_alu_ops = words / radix * static_cast<double>(radix_cost(radix).total_ops) * (log_n / log_r);
    const double passes = static_cast<double>(model_global_passes(variant, n)) + 1.0;
    r.total_mem_bytes = 8.0 * 2.0 * words * passes;
  }
  finish(r, machine);
  return r;
}

DensityReport classify(const KernelProfile& profile, const MachineParams& machine, const std::string& variant,
                       std::size_t n) {
  if (profile.mem_elements == 0) throw ParameterError("profile recorded no memory traffic");
  DensityReport r;
  r.variant = variant;
  r.n = n;
  r.total_alu_ops = static_cast<double>(profile.alu_ops);
  r.total_mem_bytes = 8.0 * static_cast<double>(profile.mem_elements);
  finish(r, machine);
  return r;
}

void write_density_csv_header(std::ostream& os) { os << "variant,n,ops,bytes,density,bound\n"; }

void write_density_csv_row(std::ostream& os, const DensityReport& r) {
  os << r.variant << ',' << r.n << ',' << static_cast<uint64_t>(r.total_alu_ops) << ','
     << static_cast<uint64_t>(r.total_mem_bytes) << ',' << r.density << ',' << to_string(r.bound) << '\n';
}

}  // namespace hekl
