// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_set>

namespace hekl {

class BufferPool;

/// Owning handle to a word buffer. When it came from a pool, destruction (or
/// release()) hands the storage back to that pool instead of freeing it.
class PooledBuffer {
 public:
  PooledBuffer() = default;
  ~PooledBuffer() { release(); }

  PooledBuffer(PooledBuffer&& other) noexcept { swap(other); }
  PooledBuffer& operator=(PooledBuffer&& other) noexcept {
    if (this != &other) {
      release();
      swap(other);
    }
    return *this;
  }
  PooledBuffer(const PooledBuffer&) = delete;
  PooledBuffer& operator=(const PooledBuffer&) = delete;

  /// Heap buffer with no pool behind it.
  static PooledBuffer standalone(std::size_t size);

  uint64_t* data() { return data_; }
  const uint64_t* data() const { return data_; }
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::span<uint64_t> span() { return {data_, size_}; }
  std::span<const uint64_t> span() const { return {data_, size_}; }
  const std::shared_ptr<BufferPool>& pool() const { return pool_; }

  void release();

 private:
  friend class BufferPool;

  void swap(PooledBuffer& other) noexcept {
    std::swap(pool_, other.pool_);
    std::swap(data_, other.data_);
    std::swap(size_, other.size_);
    std::swap(capacity_, other.capacity_);
  }

  std::shared_ptr<BufferPool> pool_;
  uint64_t* data_ = nullptr;
  std::size_t size_ = 0;
  std::size_t capacity_ = 0;
};

struct PoolStats {
  uint64_t allocations = 0;  // buffers obtained from the system allocator
  uint64_t reuses = 0;       // requests served from the free list
  uint64_t releases = 0;
  std::size_t lent = 0;
  std::size_t free = 0;
};

/// Memory cache of reusable word buffers.
///
/// acquire() hands out the smallest free buffer whose capacity covers the
/// request (ties go to the buffer freed first) and only falls back to a fresh
/// allocation when none fits. Buffers are never trimmed. All members are safe
/// to call concurrently.
class BufferPool : public std::enable_shared_from_this<BufferPool> {
 public:
  static std::shared_ptr<BufferPool> create() { return std::shared_ptr<BufferPool>(new BufferPool); }

  ~BufferPool();
  BufferPool(const BufferPool&) = delete;
  BufferPool& operator=(const BufferPool&) = delete;

  /// Contents are uninitialized. Throws ParameterError for size 0.
  PooledBuffer acquire(std::size_t size);

  /// Throws ContractError for a buffer that is not currently lent by this pool.
  void release(PooledBuffer& buffer);

  PoolStats stats() const;

 private:
  BufferPool() = default;

  void give_back(uint64_t* data, std::size_t capacity);

  mutable std::mutex mutex_;
  std::multimap<std::size_t, uint64_t*> free_;
  std::unordered_set<const uint64_t*> lent_;
  PoolStats stats_;
};

}  // namespace hekl
