#pragma once

// Deterministic parallel map over output points: each index writes only its
// own slot and uses a fixed per-index summation order, so results do not
// depend on the thread count.

#include <algorithm>
#include <thread>
#include <vector>

namespace fraclab {

inline int& thread_count() {
    static int n = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    return n;
}

template <class F>
void parallel_for(std::size_t n, F&& f) {
    const int nt = std::max(1, std::min<int>(thread_count(), int(n)));
    if (nt == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace fraclab
