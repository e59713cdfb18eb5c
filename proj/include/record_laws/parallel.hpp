#pragma once

#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace record_laws {

// Worker count: the caller's request (0 = hardware), capped by the
// RECORD_LAWS_THREADS environment variable when set.
inline int effective_workers(int requested = 0) {
    int w = requested;
    if (w <= 0) {
        w = int(std::thread::hardware_concurrency());
        if (w < 1) w = 1;
    }
    if (const char* env = std::getenv("RECORD_LAWS_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0 && cap < w) w = cap;
    }
    return w;
}

// Splits [0, total) into contiguous shards and runs fn(shard, begin, end) on
// worker threads.  Results must be merged by the caller; keeping shard
// accumulators integer-valued makes the merged result independent of the
// worker count.
template <typename Fn>
void run_sharded(std::uint64_t total, int workers, Fn&& fn) {
    if (total == 0) return;
    std::uint64_t w = std::uint64_t(workers < 1 ? 1 : workers);
    if (w > total) w = total;
    if (w == 1) {
        fn(0, std::uint64_t(0), total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(size_t(w));
    const std::uint64_t base = total / w, extra = total % w;
    std::uint64_t begin = 0;
    for (std::uint64_t s = 0; s < w; ++s) {
        const std::uint64_t len = base + (s < extra ? 1 : 0);
        const std::uint64_t end = begin + len;
        pool.emplace_back([&fn, s, begin, end] { fn(size_t(s), begin, end); });
        begin = end;
    }
    for (std::thread& t : pool) t.join();
}

} // namespace record_laws
