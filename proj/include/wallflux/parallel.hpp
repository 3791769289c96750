#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace wallflux {

/// Static-partition parallel loop. Work item i writes only to slot i of
/// caller-owned storage, so results are identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += nthreads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace wallflux
