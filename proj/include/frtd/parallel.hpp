#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace frtd {

// Global worker count; set once by the CLI, read by parallel loops.
inline std::atomic<int>& thread_count() {
    static std::atomic<int> count{static_cast<int>(
        std::max(1u, std::thread::hardware_concurrency()))};
    return count;
}

// Runs fn(begin, end) over fixed contiguous row blocks. The partition depends
// only on (total, workers), so outputs are identical for any thread count as
// long as blocks write disjoint ranges.
inline void parallel_blocks(int total, const std::function<void(int, int)>& fn) {
    const int workers = std::clamp(thread_count().load(), 1, std::max(1, total));
    if (workers == 1 || total < 2) {
        fn(0, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

}  // namespace frtd
