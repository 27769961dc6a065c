/*
 * Copyright (c) 2026 lbr-kit contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

namespace lbr::net {

/// Multi-producer FIFO of fixed capacity. A push onto a full queue discards
/// the oldest element.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity = 8) : capacity_(capacity == 0 ? 1 : capacity) {}

  /// Returns true if an element had to be dropped.
  bool push(T value) {
    bool dropped = false;
    {
      std::lock_guard lock(mu_);
      if (items_.size() == capacity_) {
        items_.pop_front();
        ++dropped_;
        dropped = true;
      }
      items_.push_back(std::move(value));
    }
    cv_.notify_one();
    return dropped;
  }

  std::optional<T> try_pop() {
    std::lock_guard lock(mu_);
    if (items_.empty()) return std::nullopt;
    T v = std::move(items_.front());
    items_.pop_front();
    return v;
  }

  /// Moves everything queued into `out` (appending), oldest first.
  std::size_t drain(std::vector<T>& out) {
    std::lock_guard lock(mu_);
    const std::size_t n = items_.size();
    for (auto& v : items_) out.push_back(std::move(v));
    items_.clear();
    return n;
  }

  /// Blocks until an element is queued or `timeout` passes.
  template <typename Rep, typename Period>
  bool wait_for(std::chrono::duration<Rep, Period> timeout) {
    std::unique_lock lock(mu_);
    return cv_.wait_for(lock, timeout, [&] { return !items_.empty(); });
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t dropped() const {
    std::lock_guard lock(mu_);
    return dropped_;
  }

 private:
  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<T> items_;
  std::uint64_t dropped_{0};
};

}  // namespace lbr::net
