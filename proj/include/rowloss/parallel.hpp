#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace rowloss {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Splits [0, total) into at most resolve_threads(threads) contiguous chunks
// and runs fn(chunk_index, begin, end) on each, one worker per chunk. fn must
// not throw and must write only to its own chunk's slot of any shared output;
// with that discipline the reduction the caller performs afterwards is
// deterministic for any worker count.
template <typename Fn>
void for_each_chunk(std::uint64_t total, unsigned threads, Fn&& fn) {
    unsigned want = resolve_threads(threads);
    if (want <= 1 || total < 2) {
        fn(0u, std::uint64_t{0}, total);
        return;
    }
    if (want > total) want = static_cast<unsigned>(total);
    std::vector<std::thread> pool;
    pool.reserve(want);
    const std::uint64_t base = total / want;
    const std::uint64_t rem = total % want;
    std::uint64_t begin = 0;
    for (unsigned t = 0; t < want; ++t) {
        const std::uint64_t end = begin + base + (t < rem ? 1 : 0);
        pool.emplace_back([&fn, t, begin, end] { fn(t, begin, end); });
        begin = end;
    }
    for (auto& th : pool) th.join();
}

}  // namespace rowloss
