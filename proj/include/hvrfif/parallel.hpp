#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace hvrfif {

/// Worker cap: HVRFIF_THREADS if set and positive, else the hardware count.
inline std::size_t thread_budget() {
    if (const char* env = std::getenv("HVRFIF_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs body(begin, end, chunk) over [0, count) in contiguous chunks. Chunk
/// boundaries depend only on count and the thread budget.
template <class Body>
void parallel_chunks(std::size_t count, std::size_t min_chunk, Body body) {
    const std::size_t workers = std::min(thread_budget(), std::max<std::size_t>(1, count / min_chunk));
    if (workers <= 1) {
        body(std::size_t{0}, count, std::size_t{0});
        return;
    }
    const std::size_t step = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t b = std::min(count, w * step), e = std::min(count, b + step);
        pool.emplace_back([=, &body] { body(b, e, w); });
    }
    body(0, std::min(count, step), 0);
    for (auto& t : pool) t.join();
}

}  // namespace hvrfif
