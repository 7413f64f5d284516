// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

// Benchmark harness: NTT kernel sweeps, HE routine timings, encrypted
// matrix multiplication and the roofline model table.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "hekl/bench.hpp"
#include "hekl/errors.hpp"

namespace {

unsigned default_threads() {
  if (const char* env = std::getenv("HEKL_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

hekl::MatmulShape parse_shape(const std::string& text) {
  hekl::MatmulShape s;
  char x1 = 0, x2 = 0;
  std::istringstream in(text);
  long long m = 0, n = 0, k = 0;
  if (!(in >> m >> x1 >> n >> x2 >> k) || x1 != 'x' || x2 != 'x' || !in.eof() || m < 1 || n < 1 || k < 1) {
    throw hekl::ParameterError("--shape expects MxNxK with positive dimensions, got '" + text + "'");
  }
  s.m = static_cast<std::size_t>(m);
  s.n = static_cast<std::size_t>(n);
  s.k = static_cast<std::size_t>(k);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hekl benchmark harness"};
  app.require_subcommand(1);

  std::vector<std::size_t> sizes;
  std::size_t levels = 0;
  std::size_t instances = 64;
  std::vector<std::string> variant_names;
  unsigned threads = default_threads();
  int delta_bits = 40;
  std::size_t reps = 5;
  std::size_t warmup = 1;
  bool pool = true;
  std::string format = "csv";
  uint64_t seed = 1;
  double peak_gops = 0;
  double bandwidth_gbs = 0;
  std::string out_path;
  std::size_t block_gap = 0;
  std::string shape = "4x4x4";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", sizes, "Ring degree / transform size (repeatable)");
    sub->add_option("--rns", levels, "RNS size L");
    sub->add_option("--instances", instances, "Batch size")->check(CLI::PositiveNumber);
    sub->add_option("--variant", variant_names, "naive, staged2, radix4, radix8, radix16 (repeatable, optional @gap)");
    sub->add_option("--threads", threads, "Worker threads (default: HEKL_THREADS or hardware concurrency)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--delta-bits", delta_bits, "log2 of the CKKS scale");
    sub->add_option("--reps", reps, "Timed repetitions")->check(CLI::PositiveNumber);
    sub->add_option("--warmup", warmup, "Untimed warmup repetitions");
    sub->add_flag("--pool,!--no-pool", pool, "Serve polynomial storage from a buffer pool");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "Seed for keys, inputs and noise");
    sub->add_option("--peak-gops", peak_gops, "Peak 64-bit integer throughput, Gop/s");
    sub->add_option("--bandwidth-gbs", bandwidth_gbs, "Memory bandwidth, GB/s");
    sub->add_option("--out", out_path, "Write results to FILE instead of stdout");
    sub->add_option("--block-gap", block_gap, "Block gap applied to every staged variant");
    sub->add_option("--shape", shape, "Matrix shape MxNxK (matmul)");
  };
  for (const char* name : {"ntt-bench", "he-bench", "matmul", "density"}) {
    add_common(app.add_subcommand(name, std::string("Run ") + name));
  }

  CLI11_PARSE(app, argc, argv);

  try {
    hekl::BenchConfig config;
    config.command = app.get_subcommands().front()->get_name();
    config.sizes = sizes;
    config.levels = levels;
    config.instances = instances;
    for (const auto& name : variant_names) {
      hekl::NttVariant v = hekl::NttVariant::parse(name);
      if (block_gap) v.block_gap = block_gap;
      config.variants.push_back(v);
    }
    config.threads = threads;
    config.delta_bits = delta_bits;
    config.reps = reps;
    config.warmup = warmup;
    config.pool = pool;
    config.seed = seed;
    config.shape = parse_shape(shape);
    if (config.command == "density") {
      if (!(peak_gops > 0) || !(bandwidth_gbs > 0)) {
        std::cerr << "density: --peak-gops and --bandwidth-gbs are required\n";
        return 2;
      }
      config.machine = hekl::MachineParams{peak_gops * 1e9, bandwidth_gbs * 1e9};
    }

    const hekl::BenchReport report = hekl::run_command(config);
    const auto fmt = format == "json" ? hekl::OutputFormat::kJson : hekl::OutputFormat::kCsv;
    if (out_path.empty()) {
      hekl::write_report(std::cout, report, fmt);
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "cannot open " << out_path << '\n';
        return 2;
      }
      hekl::write_report(out, report, fmt);
    }
    if (report.allocations_after_warmup) {
      std::cerr << "pool: " << *report.allocations_after_warmup << " allocations after warmup\n";
    }
    if (!report.all_passed()) {
      std::cerr << "correctness gate failed\n";
      return 1;
    }
    return 0;
  } catch (const hekl::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
