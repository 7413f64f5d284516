// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include "hekl/buffer_pool.hpp"

#include "hekl/errors.hpp"

namespace hekl {

PooledBuffer PooledBuffer::standalone(std::size_t size) {
  PooledBuffer b;
  b.data_ = new uint64_t[size];
  b.size_ = size;
  b.capacity_ = size;
  return b;
}

void PooledBuffer::release() {
  if (data_ == nullptr) return;
  if (pool_) {
    pool_->release(*this);
  } else {
    delete[] data_;
    data_ = nullptr;
    size_ = capacity_ = 0;
  }
}

BufferPool::~BufferPool() {
  // Lent buffers keep the pool alive, so only free ones remain here.
  for (auto& [capacity, data] : free_) delete[] data;
}

PooledBuffer BufferPool::acquire(std::size_t size) {
  if (size == 0) throw ParameterError("buffer request of size 0");
  PooledBuffer b;
  {
    std::lock_guard lock(mutex_);
    auto it = free_.lower_bound(size);
    if (it != free_.end()) {
      b.data_ = it->second;
      b.capacity_ = it->first;
      free_.erase(it);
      ++stats_.reuses;
    } else {
      b.data_ = new uint64_t[size];
      b.capacity_ = size;
      ++stats_.allocations;
    }
    lent_.insert(b.data_);
  }
  b.size_ = size;
  b.pool_ = shared_from_this();
  return b;
}

void BufferPool::release(PooledBuffer& buffer) {
  if (buffer.pool_.get() != this) {
    throw ContractError("buffer was not acquired from this pool");
  }
  give_back(buffer.data_, buffer.capacity_);
  buffer.data_ = nullptr;
  buffer.size_ = buffer.capacity_ = 0;
  // Dropping the last reference may destroy *this; do it last.
  auto keep = std::move(buffer.pool_);
}

void BufferPool::give_back(uint64_t* data, std::size_t capacity) {
  std::lock_guard lock(mutex_);
  if (lent_.erase(data) == 0) {
    throw ContractError("buffer released twice or not lent by this pool");
  }
  // multimap insertion keeps equal capacities in release order
  free_.emplace(capacity, data);
  ++stats_.releases;
}

PoolStats BufferPool::stats() const {
  std::lock_guard lock(mutex_);
  PoolStats s = stats_;
  s.lent = lent_.size();
  s.free = free_.size();
  return s;
}

}  // namespace hekl
