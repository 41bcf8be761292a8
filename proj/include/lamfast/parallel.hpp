#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace lamfast {

/// Splits [0, count) into at most n_threads contiguous chunks and runs
/// fn(chunk_index, begin, end) on each, one per worker thread.  Chunk
/// boundaries depend only on count and the number of chunks actually used,
/// and chunk 0 covers the lowest indices; merging per-chunk results in
/// ascending chunk order therefore reproduces the sequential item order
/// regardless of scheduling.
inline void parallelChunks(int count, int n_threads,
                           const std::function<void(int, int, int)>& fn) {
    const int n_chunks = std::max(1, std::min(n_threads, count));
    if (n_chunks == 1) {
        fn(0, 0, count);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_chunks));
    for (int c = 0; c < n_chunks; ++c) {
        const int begin = static_cast<int>(static_cast<long long>(count) * c / n_chunks);
        const int end = static_cast<int>(static_cast<long long>(count) * (c + 1) / n_chunks);
        workers.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
    }
    for (std::thread& w : workers)
        w.join();
}

} // namespace lamfast
