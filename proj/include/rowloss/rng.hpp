#pragma once

#include <cstdint>

namespace rowloss {

// SplitMix64 (Steele/Lea/Vigna). Chosen over std::mt19937_64 because a
// stream is a single 64-bit state: deriving one per (seed, replicate, row)
// is cheap, and every draw is exact integer arithmetic, so results are
// identical across platforms and thread counts.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1), 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound), bound >= 1. Lemire's multiply-shift rejection,
    // no modulo bias.
    std::uint64_t next_below(std::uint64_t bound) {
        __extension__ using uint128 = unsigned __int128;
        while (true) {
            uint128 m = static_cast<uint128>(next()) * bound;
            auto low = static_cast<std::uint64_t>(m);
            if (low >= bound) return static_cast<std::uint64_t>(m >> 64);
            std::uint64_t reject_below = (0 - bound) % bound;
            if (low >= reject_below) return static_cast<std::uint64_t>(m >> 64);
        }
    }

private:
    std::uint64_t state_;
};

namespace detail {

constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Stream for (seed, a, b), e.g. a = replicate index, b = row index. The
// stream is a pure function of its arguments, never of scheduling order.
constexpr SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = detail::mix64(seed);
    s = detail::mix64(s ^ detail::mix64(a + 0x243f6a8885a308d3ULL));
    s = detail::mix64(s ^ detail::mix64(b + 0x13198a2e03707344ULL));
    return SplitMix64(s);
}

}  // namespace rowloss
