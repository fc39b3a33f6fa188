#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace restlab {

// Worker cap: explicit setting wins, then RESTLAB_THREADS, then hardware.
int thread_count();
void set_thread_count(int n);

// Chunked parallel loop. Results must be written to per-index slots so the
// outcome is independent of the thread count.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
    int workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += static_cast<std::size_t>(workers)) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace restlab
