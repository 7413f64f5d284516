// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <thread>

#include "hekl/buffer_pool.hpp"
#include "hekl/errors.hpp"

namespace hekl {
namespace {

TEST(BufferPool, FirstAcquireAllocates) {
  auto pool = BufferPool::create();
  PooledBuffer b = pool->acquire(1024);
  EXPECT_EQ(b.size(), 1024u);
  EXPECT_GE(b.capacity(), 1024u);
  EXPECT_EQ(pool->stats().allocations, 1u);
  EXPECT_EQ(pool->stats().lent, 1u);
  EXPECT_THROW(pool->acquire(0), ParameterError);
}

TEST(BufferPool, SmallerRequestReusesFreedBuffer) {
  auto pool = BufferPool::create();
  { PooledBuffer b = pool->acquire(1024); }
  PooledBuffer c = pool->acquire(512);
  EXPECT_EQ(c.size(), 512u);
  EXPECT_EQ(c.capacity(), 1024u);
  EXPECT_EQ(pool->stats().allocations, 1u);
  EXPECT_EQ(pool->stats().reuses, 1u);
}

TEST(BufferPool, LargerRequestAllocates) {
  auto pool = BufferPool::create();
  { PooledBuffer b = pool->acquire(1024); }
  PooledBuffer c = pool->acquire(2048);
  EXPECT_EQ(pool->stats().allocations, 2u);
  EXPECT_EQ(pool->stats().free, 1u);
}

TEST(BufferPool, BestFitAndCapacityPreserved) {
  auto pool = BufferPool::create();
  {
    PooledBuffer a = pool->acquire(4096);
    PooledBuffer b = pool->acquire(1024);
    PooledBuffer c = pool->acquire(2048);
  }
  PooledBuffer d = pool->acquire(1500);
  EXPECT_EQ(d.capacity(), 2048u);
  PooledBuffer e = pool->acquire(100);
  EXPECT_EQ(e.capacity(), 1024u);
  PooledBuffer f = pool->acquire(4096);
  EXPECT_EQ(f.capacity(), 4096u);
  EXPECT_EQ(pool->stats().allocations, 3u);
}

TEST(BufferPool, TiesGoToFirstReleased) {
  auto pool = BufferPool::create();
  PooledBuffer a = pool->acquire(64);
  PooledBuffer b = pool->acquire(64);
  const uint64_t* first = b.data();
  b.release();
  a.release();
  PooledBuffer c = pool->acquire(64);
  EXPECT_EQ(c.data(), first);
}

TEST(BufferPool, ContractErrors) {
  auto pool = BufferPool::create();
  auto other = BufferPool::create();
  PooledBuffer a = pool->acquire(16);
  EXPECT_THROW(other->release(a), ContractError);
  PooledBuffer loose = PooledBuffer::standalone(16);
  EXPECT_THROW(pool->release(loose), ContractError);
  a.release();
  EXPECT_EQ(a.data(), nullptr);
  a.release();  // no-op on an empty handle
  EXPECT_EQ(pool->stats().releases, 1u);
}

TEST(BufferPool, SteadyStateAddsNoAllocations) {
  auto pool = BufferPool::create();
  auto cycle = [&] {
    std::vector<PooledBuffer> held;
    for (std::size_t s : {100, 2000, 300, 4000, 100, 50}) held.push_back(pool->acquire(s));
  };
  cycle();
  const uint64_t warm = pool->stats().allocations;
  for (int i = 0; i < 100; ++i) cycle();
  EXPECT_EQ(pool->stats().allocations, warm);
}

TEST(BufferPool, Conservation) {
  auto pool = BufferPool::create();
  std::vector<PooledBuffer> held;
  for (int i = 0; i < 10; ++i) held.push_back(pool->acquire(10 + i));
  held.resize(4);
  const PoolStats s = pool->stats();
  EXPECT_EQ(s.lent + s.free, s.allocations);
  EXPECT_EQ(s.lent, 4u);
}

TEST(BufferPool, ConcurrentUse) {
  auto pool = BufferPool::create();
  {
    std::vector<std::jthread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&pool, t] {
        for (int i = 0; i < 1000; ++i) {
          PooledBuffer b = pool->acquire(64 + 8 * static_cast<std::size_t>((i + t) % 5));
          b.data()[0] = static_cast<uint64_t>(i);
        }
      });
    }
  }
  const PoolStats s = pool->stats();
  EXPECT_EQ(s.lent, 0u);
  EXPECT_EQ(s.free, s.allocations);
  EXPECT_EQ(s.releases, 4000u);
  EXPECT_EQ(s.reuses + s.allocations, 4000u);
}

TEST(BufferPool, BuffersOutliveThePoolHandle) {
  PooledBuffer b;
  {
    auto pool = BufferPool::create();
    b = pool->acquire(32);
  }
  b.data()[31] = 1;
  b.release();
  SUCCEED();
}

TEST(PooledBuffer, Standalone) {
  PooledBuffer b = PooledBuffer::standalone(8);
  EXPECT_EQ(b.size(), 8u);
  EXPECT_EQ(b.pool(), nullptr);
  PooledBuffer moved = std::move(b);
  EXPECT_EQ(moved.size(), 8u);
  EXPECT_EQ(b.data(), nullptr);
}

}  // namespace
}  // namespace hekl
