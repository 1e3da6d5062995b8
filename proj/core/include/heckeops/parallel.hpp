#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace heckeops {

// Worker count: HECKE_ARITH_THREADS if set and positive, else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("HECKE_ARITH_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Splits [0, n) into contiguous shards and runs fn(shard_index, begin, end) on each.
// Results written per shard are merged by the caller in shard order, which keeps the
// output independent of scheduling.
template <class Fn>
void parallel_shards(std::size_t n, std::size_t shards, Fn&& fn) {
    if (shards == 0) shards = 1;
    unsigned workers = std::min<std::size_t>(worker_count(), shards);
    auto range = [&](std::size_t s) {
        std::size_t b = n * s / shards, e = n * (s + 1) / shards;
        fn(s, b, e);
    };
    if (workers <= 1) {
        for (std::size_t s = 0; s < shards; ++s) range(s);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t s = w; s < shards; s += workers) range(s);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace heckeops
