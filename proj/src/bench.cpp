// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include "hekl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <complex>
#include <iomanip>
#include <json.hpp>
#include <memory>
#include <random>
#include <thread>

#include "hekl/ckks.hpp"
#include "hekl/errors.hpp"
#include "hekl/rns.hpp"

namespace hekl {

namespace {

using Clock = std::chrono::steady_clock;
using Slots = std::vector<std::complex<double>>;

double elapsed_ns(Clock::time_point start) {
  return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

void check_common(const BenchConfig& c) {
  if (c.reps < 1) throw ParameterError("--reps must be at least 1");
  if (c.instances < 1) throw ParameterError("--instances must be at least 1");
  if (c.threads < 1) throw ParameterError("--threads must be at least 1");
}

// Naive first so every later variant has its baseline.
std::vector<NttVariant> with_naive_first(std::vector<NttVariant> variants) {
  std::erase(variants, NttVariant::naive());
  variants.insert(variants.begin(), NttVariant::naive());
  return variants;
}

void fill_speedups(std::vector<BenchRow>& rows) {
  for (auto& r : rows) {
    for (const auto& base : rows) {
      if (base.kernel == "naive" && base.routine == r.routine && base.n == r.n && base.median_ns && r.median_ns) {
        r.speedup = *base.median_ns / *r.median_ns;
      }
    }
  }
}

Slots random_slots(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Slots v(count);
  for (auto& z : v) z = {dist(rng), dist(rng)};
  return v;
}

double max_error(const Slots& got, const Slots& want) {
  double e = 0;
  for (std::size_t i = 0; i < want.size(); ++i) e = std::max(e, std::abs(got[i] - want[i]));
  return e;
}

BenchRow make_row(std::string command, std::string variant, std::size_t n, std::size_t levels, std::size_t instances,
                  unsigned threads) {
  BenchRow row;
  row.command = std::move(command);
  row.variant = std::move(variant);
  row.n = n;
  row.levels = levels;
  row.instances = instances;
  row.threads = threads;
  return row;
}

}  // namespace

bool BenchReport::all_passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.check; });
}

const std::vector<std::string>& he_routines() {
  static const std::vector<std::string> names{"MulLin", "MulLinRS", "SqrLinRS", "MulLinRSModSwAdd", "Rotate"};
  return names;
}

// ---------------------------------------------------------------------------

BenchReport run_ntt_bench(const BenchConfig& config) {
  check_common(config);
  const std::vector<std::size_t> sizes = config.sizes.empty() ? std::vector<std::size_t>{4096, 8192, 16384, 32768}
                                                              : config.sizes;
  const std::size_t levels = config.levels ? config.levels : 8;
  const auto variants = with_naive_first(
      config.variants.empty() ? std::vector<NttVariant>{NttVariant::staged2(), NttVariant::high_radix(8)}
                              : config.variants);

  BenchReport report;
  for (const std::size_t n : sizes) {
    std::vector<NttVariant> fitted;
    for (const auto& v : variants) {
      fitted.push_back(v.fitted_to(n));
      fitted.back().validate(n);
    }
    std::vector<NttTables> tables;
    for (const auto& q : generate_primes(n, 60, levels)) tables.emplace_back(n, q);

    const std::size_t words = config.instances * levels * n;
    std::vector<uint64_t> input(words);
    std::mt19937_64 rng(config.seed ^ n);
    for (std::size_t i = 0; i < words; ++i) {
      std::uniform_int_distribution<uint64_t> dist(0, tables[(i / n) % levels].modulus().value() - 1);
      input[i] = dist(rng);
    }
    const std::size_t sample = std::uniform_int_distribution<std::size_t>(0, config.instances - 1)(rng);
    const std::size_t stride = levels * n;
    std::vector<uint64_t> reference(input.begin() + sample * stride, input.begin() + (sample + 1) * stride);
    for (std::size_t r = 0; r < levels; ++r) {
      forward_ntt(std::span(reference).subspan(r * n, n), tables[r], NttVariant::naive());
    }

    std::vector<uint64_t> work(words);
    std::size_t first_row = report.rows.size();
    for (const auto& v : fitted) {
      BenchRow row = make_row("ntt-bench", v.name(), n, levels, config.instances, config.threads);
      row.kernel = row.variant;
      row.check = true;
      std::vector<double> times;
      for (std::size_t it = 0; it < config.warmup + config.reps; ++it) {
        std::copy(input.begin(), input.end(), work.begin());
        const auto start = Clock::now();
        batch_transform(work, config.instances, tables, Direction::kForward, v, config.threads);
        const double ns = elapsed_ns(start);
        row.check = row.check && std::equal(reference.begin(), reference.end(), work.begin() + sample * stride);
        if (it >= config.warmup) times.push_back(ns);
      }
      KernelProfile profile;
      std::copy(input.begin(), input.begin() + stride, work.begin());
      batch_transform(std::span(work).first(stride), 1, tables, Direction::kForward, v, 1, &profile);
      row.alu_ops = static_cast<double>(profile.alu_ops) / static_cast<double>(levels);
      row.mem_bytes = 8.0 * static_cast<double>(profile.mem_elements) / static_cast<double>(levels);
      row.density = row.alu_ops / row.mem_bytes;
      if (row.check) row.median_ns = median(times);
      report.rows.push_back(row);
    }
    std::vector<BenchRow> block(report.rows.begin() + static_cast<std::ptrdiff_t>(first_row), report.rows.end());
    fill_speedups(block);
    std::copy(block.begin(), block.end(), report.rows.begin() + static_cast<std::ptrdiff_t>(first_row));
  }
  return report;
}

// ---------------------------------------------------------------------------

BenchReport run_he_bench(const BenchConfig& config) {
  check_common(config);
  const std::size_t n = config.sizes.empty() ? 32768 : config.sizes.front();
  const std::size_t levels = config.levels ? config.levels : 8;
  if (levels < 3) throw ParameterError("he-bench needs at least 3 levels");
  const auto variants = config.variants.empty()
                            ? std::vector<NttVariant>{NttVariant::naive(), NttVariant::high_radix(8)}
                            : config.variants;
  constexpr double kTolerance = 1e-3;
  constexpr int kStep = 1;

  std::shared_ptr<BufferPool> pool = config.pool ? BufferPool::create() : nullptr;
  CkksContext ctx(make_parameters(n, levels, config.delta_bits, config.seed), NttVariant::high_radix(8), pool);
  const std::vector<int> steps{kStep};
  const KeySet keys = keygen(ctx, steps);
  Encoder encoder(ctx);
  Encryptor encryptor(ctx, keys.pk);
  Decryptor decryptor(ctx, keys.sk);
  Evaluator eval(ctx);

  std::mt19937_64 rng(config.seed);
  const std::size_t h = encoder.slot_count();
  const Slots x = random_slots(rng, h);
  const Slots y = random_slots(rng, h);
  const Slots z = random_slots(rng, h);
  const Ciphertext cx = encryptor.encrypt(encoder.encode(x));
  const Ciphertext cy = encryptor.encrypt(encoder.encode(y));
  const double rs_scale = ctx.delta() * ctx.delta() / static_cast<double>(ctx.basis().prime(levels - 1).value());
  const Ciphertext cz = encryptor.encrypt(encoder.encode(z, rs_scale));

  Slots prod(h), sq(h), fma(h), rot(h);
  for (std::size_t i = 0; i < h; ++i) {
    prod[i] = x[i] * y[i];
    sq[i] = x[i] * x[i];
    fma[i] = x[i] * y[i] + z[i];
    rot[i] = x[(i + kStep) % h];
  }

  BenchReport report;
  for (const auto& requested : variants) {
    ctx.set_variant(requested);
    for (const auto& routine : he_routines()) {
      auto run = [&]() -> Ciphertext {
        if (routine == "MulLin") return eval.mul_lin(cx, cy, keys.evk);
        if (routine == "MulLinRS") return eval.mul_lin_rs(cx, cy, keys.evk);
        if (routine == "SqrLinRS") return eval.sqr_lin_rs(cx, keys.evk);
        if (routine == "MulLinRSModSwAdd") return eval.mul_lin_rs_modsw_add(cx, cy, cz, keys.evk);
        return eval.rotate_routine(cx, kStep, keys.galois);
      };
      const Slots& want = routine == "MulLin" || routine == "MulLinRS" ? prod
                          : routine == "SqrLinRS"                      ? sq
                          : routine == "MulLinRSModSwAdd"              ? fma
                                                                       : rot;
      std::vector<double> times;
      double ntt_ns = 0;
      double total_ns = 0;
      Ciphertext out;
      for (std::size_t it = 0; it < config.warmup + config.reps; ++it) {
        ctx.reset_ntt_timer();
        const auto start = Clock::now();
        out = run();
        const double ns = elapsed_ns(start);
        if (it >= config.warmup) {
          times.push_back(ns);
          total_ns += ns;
          ntt_ns += static_cast<double>(ctx.ntt_nanoseconds());
        }
      }
      BenchRow row = make_row("he-bench", routine, n, levels, 1, 1);
      row.routine = routine;
      const DensityReport model = operational_density(ctx.variant(), n);
      row.alu_ops = model.total_alu_ops;
      row.mem_bytes = model.total_mem_bytes;
      row.density = model.density;
      row.max_error = max_error(encoder.decode(decryptor.decrypt(out)), want);
      row.check = *row.max_error <= kTolerance;
      row.kernel = ctx.variant().name();
      row.variant = routine + "/" + row.kernel;
      if (row.check) {
        row.median_ns = median(times);
        row.ntt_share = ntt_ns / total_ns;
      }
      report.rows.push_back(row);
    }
  }
  fill_speedups(report.rows);
  if (pool) report.pool = pool->stats();
  return report;
}

// ---------------------------------------------------------------------------

BenchReport run_matmul(const BenchConfig& config) {
  check_common(config);
  const MatmulShape s = config.shape;
  if (s.m < 1 || s.n < 1 || s.k < 1) throw ParameterError("matmul dimensions must be at least 1");
  const std::size_t degree = config.sizes.empty() ? 8192 : config.sizes.front();
  const std::size_t levels = config.levels ? config.levels : 3;
  if (levels < 2) throw ParameterError("matmul needs at least 2 levels");
  const auto variants = config.variants.empty() ? std::vector<NttVariant>{NttVariant::high_radix(8)} : config.variants;
  constexpr double kTolerance = 1e-2;

  std::shared_ptr<BufferPool> pool = config.pool ? BufferPool::create() : nullptr;
  CkksContext ctx(make_parameters(degree, levels, config.delta_bits, config.seed), variants.front(), pool);
  const KeySet keys = keygen(ctx);
  Encoder encoder(ctx);
  Decryptor decryptor(ctx, keys.sk);
  Evaluator eval(ctx);
  const std::size_t h = encoder.slot_count();
  const double delta2 = ctx.delta() * ctx.delta();

  std::mt19937_64 rng(config.seed);
  std::vector<Slots> a(s.m * s.n), b(s.n * s.k), c(s.m * s.k);
  for (auto& v : a) v = random_slots(rng, h);
  for (auto& v : b) v = random_slots(rng, h);
  for (auto& v : c) v = random_slots(rng, h);
  std::vector<Slots> want = c;
  for (std::size_t i = 0; i < s.m; ++i) {
    for (std::size_t j = 0; j < s.k; ++j) {
      for (std::size_t l = 0; l < s.n; ++l) {
        for (std::size_t t = 0; t < h; ++t) want[i * s.k + j][t] += a[i * s.n + l][t] * b[l * s.k + j][t];
      }
    }
  }

  // Every worker evaluates through its own context and pool, so each pool
  // sees the same request sequence in every iteration regardless of how the
  // threads interleave.
  const std::size_t outputs = c.size();
  const std::size_t workers = std::min<std::size_t>(config.threads, outputs);
  std::vector<std::unique_ptr<CkksContext>> worker_ctx;
  std::vector<std::shared_ptr<BufferPool>> pools;
  if (pool) pools.push_back(pool);
  for (std::size_t w = 0; workers > 1 && w < workers; ++w) {
    auto wp = config.pool ? BufferPool::create() : nullptr;
    if (wp) pools.push_back(wp);
    worker_ctx.push_back(std::make_unique<CkksContext>(ctx.params(), variants.front(), wp));
  }
  auto pool_stats = [&] {
    PoolStats total;
    for (const auto& p : pools) {
      const PoolStats st = p->stats();
      total.allocations += st.allocations;
      total.reuses += st.reuses;
      total.releases += st.releases;
      total.lent += st.lent;
      total.free += st.free;
    }
    return total;
  };

  // C += A * B over encrypted elements; products stay at scale delta^2 and
  // each output is rescaled once after its last addition.
  auto iteration = [&](double& error) {
    Encryptor encryptor(ctx, keys.pk);
    std::vector<Ciphertext> ea, eb, ec;
    ea.reserve(a.size());
    eb.reserve(b.size());
    ec.reserve(c.size());
    for (const auto& v : a) ea.push_back(encryptor.encrypt(encoder.encode(v)));
    for (const auto& v : b) eb.push_back(encryptor.encrypt(encoder.encode(v)));
    for (const auto& v : c) ec.push_back(encryptor.encrypt(encoder.encode(v, delta2)));

    auto compute = [&](const Evaluator& ev, std::size_t begin, std::size_t end) {
      for (std::size_t idx = begin; idx < end; ++idx) {
        const std::size_t i = idx / s.k;
        const std::size_t j = idx % s.k;
        for (std::size_t l = 0; l < s.n; ++l) ev.add_inplace(ec[idx], ev.mul_lin(ea[i * s.n + l], eb[l * s.k + j], keys.evk));
        ec[idx] = ev.rescale(ec[idx]);
      }
    };
    if (workers <= 1) {
      compute(eval, 0, outputs);
    } else {
      std::vector<std::jthread> pool_threads;
      for (std::size_t w = 0; w < workers; ++w) {
        pool_threads.emplace_back([&, w] {
          compute(Evaluator(*worker_ctx[w]), outputs * w / workers, outputs * (w + 1) / workers);
        });
      }
    }

    error = 0;
    for (std::size_t idx = 0; idx < outputs; ++idx) {
      error = std::max(error, max_error(encoder.decode(decryptor.decrypt(ec[idx])), want[idx]));
    }
  };

  BenchReport report;
  for (const auto& requested : variants) {
    ctx.set_variant(requested);
    for (auto& wc : worker_ctx) wc->set_variant(requested);
    std::vector<double> times;
    double worst = 0;
    uint64_t allocs_at_warmup = 0;
    for (std::size_t it = 0; it < config.warmup + config.reps; ++it) {
      if (pool && it == config.warmup) allocs_at_warmup = pool_stats().allocations;
      double err = 0;
      const auto start = Clock::now();
      iteration(err);
      const double ns = elapsed_ns(start);
      worst = std::max(worst, err);
      if (it >= config.warmup) times.push_back(ns);
    }
    BenchRow row = make_row("matmul", ctx.variant().name(), degree, levels, s.m * s.n * s.k, config.threads);
    row.kernel = row.variant;
    const DensityReport model = operational_density(ctx.variant(), degree);
    row.alu_ops = model.total_alu_ops;
    row.mem_bytes = model.total_mem_bytes;
    row.density = model.density;
    row.max_error = worst;
    row.check = worst <= kTolerance;
    if (row.check) row.median_ns = median(times);
    if (pool) report.allocations_after_warmup = pool_stats().allocations - allocs_at_warmup;
    report.rows.push_back(row);
  }
  fill_speedups(report.rows);
  if (pool) report.pool = pool_stats();
  return report;
}

// ---------------------------------------------------------------------------

BenchReport run_density(const BenchConfig& config) {
  if (!config.machine || !(config.machine->peak_int64_ops_per_s > 0) || !(config.machine->mem_bandwidth_bytes_per_s > 0)) {
    throw ParameterError("density needs --peak-gops and --bandwidth-gbs");
  }
  std::vector<std::size_t> sizes = config.sizes;
  if (sizes.empty()) {
    for (std::size_t n = 1024; n <= 32768; n <<= 1) sizes.push_back(n);
  }
  const auto variants = config.variants.empty()
                            ? std::vector<NttVariant>{NttVariant::naive(), NttVariant::staged2(),
                                                      NttVariant::high_radix(4), NttVariant::high_radix(8),
                                                      NttVariant::high_radix(16)}
                            : config.variants;
  BenchReport report;
  for (const auto& v : variants) {
    for (const std::size_t n : sizes) {
      const NttVariant fitted = v.fitted_to(n);
      fitted.validate(n);
      const DensityReport d = operational_density(fitted, n, *config.machine);
      BenchRow row = make_row("density", fitted.name(), n, 0, 1, 1);
      row.alu_ops = d.total_alu_ops;
      row.mem_bytes = d.total_mem_bytes;
      row.density = d.density;
      row.bound = to_string(d.bound);
      row.check = true;
      report.rows.push_back(row);
    }
  }
  return report;
}

BenchReport run_command(const BenchConfig& config) {
  if (config.command == "ntt-bench") return run_ntt_bench(config);
  if (config.command == "he-bench") return run_he_bench(config);
  if (config.command == "matmul") return run_matmul(config);
  if (config.command == "density") return run_density(config);
  throw ParameterError("unknown command '" + config.command + "'");
}

// ---------------------------------------------------------------------------

namespace {

void write_optional(std::ostream& os, const std::optional<double>& v) {
  if (v) os << *v;
}

}  // namespace

void write_report(std::ostream& os, const BenchReport& report, OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    const auto old_precision = os.precision(10);
    os << kBenchCsvHeader << '\n';
    for (const auto& r : report.rows) {
      os << r.command << ',' << r.variant << ',' << r.n << ',' << r.levels << ',' << r.instances << ','
         << r.threads << ',';
      write_optional(os, r.median_ns);
      os << ',';
      write_optional(os, r.speedup);
      os << ',' << r.alu_ops << ',' << r.mem_bytes << ',' << r.density << ',' << (r.check ? "pass" : "fail")
         << '\n';
    }
    os.precision(old_precision);
    return;
  }

  using json = nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json rows = json::array();
  for (const auto& r : report.rows) {
    json j = {{"command", r.command},   {"variant", r.variant},     {"n", r.n},
              {"L", r.levels},          {"instances", r.instances}, {"threads", r.threads},
              {"median_ns", opt(r.median_ns)}, {"speedup", opt(r.speedup)}, {"alu_ops", r.alu_ops},
              {"mem_bytes", r.mem_bytes}, {"density", r.density}, {"check", r.check ? "pass" : "fail"}};
    if (!r.routine.empty()) j["routine"] = r.routine;
    if (!r.kernel.empty()) j["kernel"] = r.kernel;
    if (r.ntt_share) j["ntt_share"] = *r.ntt_share;
    if (r.max_error) j["max_error"] = *r.max_error;
    if (!r.bound.empty()) j["bound"] = r.bound;
    rows.push_back(j);
  }
  json doc = {{"rows", rows}, {"all_passed", report.all_passed()}};
  if (report.pool) {
    doc["pool"] = {{"allocations", report.pool->allocations},
                   {"reuses", report.pool->reuses},
                   {"releases", report.pool->releases},
                   {"lent", report.pool->lent},
                   {"free", report.pool->free}};
  }
  if (report.allocations_after_warmup) doc["allocations_after_warmup"] = *report.allocations_after_warmup;
  os << doc.dump(2) << '\n';
}

}  // namespace hekl
