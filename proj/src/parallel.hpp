#pragma once

// Chunked parallel map with deterministic combination: workers claim chunks from
// an atomic counter, results are stored per chunk and reduced in chunk order, so
// every thread count produces identical output.

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace hawkes::detail {

constexpr std::uint64_t kChunkSize = 4096;

template <class ChunkFn>
void for_each_chunk(std::uint64_t n, unsigned threads, ChunkFn&& fn) {
    const std::uint64_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
    if (threads <= 1 || n_chunks <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c)
            fn(c, c * kChunkSize, std::min(n, (c + 1) * kChunkSize));
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            fn(c, c * kChunkSize, std::min(n, (c + 1) * kChunkSize));
        }
    };
    std::vector<std::thread> pool;
    const unsigned use = std::min<std::uint64_t>(threads, n_chunks);
    pool.reserve(use);
    for (unsigned i = 0; i < use; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// Kahan-compensated accumulator for order-independent-looking sums (used per chunk;
// chunks themselves are combined in fixed order).
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        double y = v - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace hawkes::detail
