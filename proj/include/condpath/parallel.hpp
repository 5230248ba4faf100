#ifndef CONDPATH_PARALLEL_HPP
#define CONDPATH_PARALLEL_HPP

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace condpath {

// Thread count resolution: explicit argument > CONDPATH_THREADS env > 1.
inline unsigned resolve_threads(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CONDPATH_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

// Index-parallel loop; f(i) must only write to slot i of preallocated
// storage, which keeps results identical to the serial order.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    threads = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += threads) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace condpath

#endif
