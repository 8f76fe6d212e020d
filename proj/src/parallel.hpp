// parallel.hpp: deterministic fork-join helpers for index-addressed work.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace combhom {
namespace par {

inline size_t thread_count(size_t requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks, one per
// thread; results must be written by index so the output is independent of
// the split.
template <class F>
void parallel_for(size_t n, size_t threads, F&& fn) {
    threads = thread_count(threads);
    if (threads <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (threads > n) threads = n;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    size_t base = n / threads, extra = n % threads, lo = 0;
    for (size_t t = 0; t < threads; ++t) {
        size_t hi = lo + base + (t < extra ? 1 : 0);
        pool.emplace_back([&fn, lo, hi] {
            for (size_t i = lo; i < hi; ++i) fn(i);
        });
        lo = hi;
    }
    for (auto& th : pool) th.join();
}

// Pairwise reduction with a fixed tree, so sums do not depend on chunking.
template <class T>
T pairwise_sum(std::span<const T> xs) {
    if (xs.size() <= 32) {
        T acc{};
        for (const T& x : xs) acc += x;
        return acc;
    }
    size_t half = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

} // namespace par
} // namespace combhom
