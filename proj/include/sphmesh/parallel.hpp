#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace sphmesh {

/// Chunked parallel loop. Writers must touch disjoint per-index slots;
/// reductions stay with the caller (fixed order, deterministic regardless of
/// the worker count).
inline void parallel_for(std::size_t begin, std::size_t end, int workers,
                         const std::function<void(std::size_t, std::size_t)>& body) {
    std::size_t n = end > begin ? end - begin : 0;
    if (workers <= 1 || n < 2048) {
        if (n > 0) body(begin, end);
        return;
    }
    std::size_t chunks = static_cast<std::size_t>(workers);
    std::size_t per = (n + chunks - 1) / chunks;
    std::vector<std::thread> pool;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t b = begin + c * per;
        std::size_t e = std::min(end, b + per);
        if (b >= e) break;
        pool.emplace_back(body, b, e);
    }
    for (auto& t : pool) t.join();
}

inline int default_workers() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

} // namespace sphmesh
