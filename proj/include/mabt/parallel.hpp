// Minimal blocking parallel-for over an index range. Work items must write
// to disjoint slots; the schedule then has no effect on the result.
#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace mabt {

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class Fn>
void parallel_for(std::size_t total, int threads, Fn&& body) {
    threads = resolve_threads(threads);
    if (threads <= 1 || total <= 1) {
        for (std::size_t i = 0; i < total; ++i) body(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, total);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &body] {
            for (std::size_t i = begin; i < end; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace mabt
