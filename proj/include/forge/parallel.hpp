// Copyright 2026 The Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGE_PARALLEL_HPP_
#define FORGE_PARALLEL_HPP_

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace forge {

/// Applies `fn` to every element, with results in input order no matter which
/// worker ran them.  workers <= 0 means hardware concurrency.  The first
/// exception thrown by `fn` is rethrown after all workers stop.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, int workers, F fn)
    -> std::vector<decltype(fn(items.front()))> {
  using R = decltype(fn(items.front()));
  std::vector<R> results(items.size());
  if (items.empty()) return results;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  workers = std::min<int>(workers, static_cast<int>(items.size()));
  if (workers == 1) {
    for (size_t i = 0; i < items.size(); ++i) results[i] = fn(items[i]);
    return results;
  }
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= items.size()) break;
        try {
          results[i] = fn(items[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(items.size());
          break;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace forge

#endif  // FORGE_PARALLEL_HPP_
