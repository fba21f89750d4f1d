#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ingleton {

/// Thread count: explicit request > 0 wins, then INGLETON_THREADS, then
/// the hardware concurrency.
inline unsigned resolve_threads(int requested = 0) {
    if (requested > 0) return unsigned(requested);
    if (const char* env = std::getenv("INGLETON_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return unsigned(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Runs fn(i) for i in [0, n) on the given number of threads.  Work items
/// must write only to their own output slots; the schedule is dynamic, so
/// callers are responsible for order-insensitive merging.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    };
    std::vector<std::thread> pool;
    unsigned count = std::min<std::size_t>(threads, n);
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
}

}  // namespace ingleton
