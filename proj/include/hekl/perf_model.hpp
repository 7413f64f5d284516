// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>

#include "hekl/ntt.hpp"

namespace hekl {

/// 64-bit integer ALU operations of one work-item in one kernel round.
struct RadixCost {
  unsigned radix;
  uint64_t other_ops;
  uint64_t butterfly_ops;
  uint64_t total_ops;
};

/// Per-work-item op counts for radix 2, 4, 8 or 16. Throws ParameterError otherwise.
RadixCost radix_cost(unsigned radix);

struct MachineParams {
  double peak_int64_ops_per_s = 0;
  double mem_bandwidth_bytes_per_s = 0;

  /// Operational density at the roofline ridge point.
  double ridge() const { return peak_int64_ops_per_s / mem_bandwidth_bytes_per_s; }
};

enum class Bound { kMemory, kCompute };

struct DensityReport {
  std::string variant;
  std::size_t n = 0;
  double total_alu_ops = 0;
  double total_mem_bytes = 0;
  double density = 0;
  Bound bound = Bound::kMemory;
};

const char* to_string(Bound b);

/// Analytic op and traffic counts for one n-point transform.
///
/// Naive radix-2 reads and writes the array once per round: 2n log2(n)
/// words against (n/2) * 48 * log2(n) ops, a density of 1.5 for every n.
/// Staged variants touch the array 2n words per full-array pass plus 2n for
/// the block pass, with radix-r work priced at (n/r) * total(r) * log_r(n).
/// Twiddle traffic is not counted. Bound is classified against `machine`
/// when its rates are positive, otherwise left as kMemory.
DensityReport operational_density(const NttVariant& variant, std::size_t n, const MachineParams& machine = {});

/// Same report built from measured counters. Throws ParameterError when the
/// profile recorded no memory traffic.
DensityReport classify(const KernelProfile& profile, const MachineParams& machine, const std::string& variant = "",
                       std::size_t n = 0);

/// Number of full-array passes a staged variant makes before its block pass.
std::size_t model_global_passes(const NttVariant& variant, std::size_t n);

void write_density_csv_header(std::ostream& os);
void write_density_csv_row(std::ostream& os, const DensityReport& r);

}  // namespace hekl
