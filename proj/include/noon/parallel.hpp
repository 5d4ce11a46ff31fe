// Copyright 2026 The noon-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Index-parallel map for sweeps. Results land in index order so any reduction
// done afterwards is independent of the worker count.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace noon::par {

namespace detail {
inline std::atomic<int> &thread_override() {
    static std::atomic<int> value{0};
    return value;
}
}  // namespace detail

/// Worker count: explicit setting, else NOON_FORGE_THREADS, else hardware.
inline int thread_count() {
    int t = detail::thread_override().load();
    if (t > 0) {
        return t;
    }
    if (const char *env = std::getenv("NOON_FORGE_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) {
            return v;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline void set_thread_count(int t) { detail::thread_override().store(std::max(0, t)); }

template <class Fn>
auto parallel_map(std::size_t n, Fn &&fn, int threads = 0) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<R> out(n);
    const int workers = static_cast<int>(std::min<std::size_t>(n, threads > 0 ? threads : thread_count()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace noon::par
