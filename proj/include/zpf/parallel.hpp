#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace zpf {

/// Process-wide thread count used by shot-parallel loops. Results never
/// depend on it: work is cut into fixed-size chunks whose partial results
/// are combined in chunk order.
void set_thread_count(unsigned n);
[[nodiscard]] unsigned thread_count();

inline constexpr std::size_t kChunkSize = 8192;

/// Deterministic chunked map-reduce over [0, n). `body(begin, end, acc)`
/// accumulates into a chunk-local accumulator; chunks are merged in order
/// with `merge(total, chunk)`.
template <class Acc, class Body, class Merge>
Acc chunked_reduce(std::size_t n, const Acc& init, Body body, Merge merge) {
    const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<Acc> partial(chunks, init);
    auto run = [&](std::size_t first_chunk, std::size_t stride) {
        for (std::size_t c = first_chunk; c < chunks; c += stride) {
            const std::size_t b = c * kChunkSize;
            body(b, std::min(n, b + kChunkSize), partial[c]);
        }
    };
    const std::size_t workers = std::min<std::size_t>(thread_count(), chunks);
    if (workers <= 1) {
        run(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
        for (auto& t : pool) t.join();
    }
    Acc total = init;
    for (const auto& p : partial) merge(total, p);
    return total;
}

}  // namespace zpf
