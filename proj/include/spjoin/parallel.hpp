// Copyright 2026 The spjoin Authors.
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

#ifndef SPJOIN_PARALLEL_HPP
#define SPJOIN_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spjoin {

/// Runs `fn(worker)` on `workers` threads (the caller is worker 0) and
/// returns once all have finished. The first exception thrown by any worker
/// is rethrown in the caller.
template <class Fn>
void run_workers(unsigned workers, Fn&& fn) {
    if (workers <= 1) {
        fn(0u);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto guarded = [&](unsigned w) {
        try {
            fn(w);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(guarded, w);
    guarded(0);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

/// Contiguous slice [begin, end) of `n` items owned by `worker` of `workers`.
struct Slice {
    std::size_t begin = 0;
    std::size_t end = 0;
};

inline Slice slice_of(std::size_t n, unsigned worker, unsigned workers) noexcept {
    const std::size_t base = n / workers;
    const std::size_t extra = n % workers;
    const std::size_t begin = worker * base + std::min<std::size_t>(worker, extra);
    return {begin, begin + base + (worker < extra ? 1 : 0)};
}

/// Shared queue over `n` task indices; workers claim indices in order.
class TaskCursor {
public:
    explicit TaskCursor(std::size_t n) : n_(n) {}

    bool next(std::size_t& task) noexcept {
        task = next_.fetch_add(1, std::memory_order_relaxed);
        return task < n_;
    }

private:
    std::size_t n_;
    std::atomic<std::size_t> next_{0};
};

}  // namespace spjoin

#endif  // SPJOIN_PARALLEL_HPP
