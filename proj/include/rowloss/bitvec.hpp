#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rowloss {

// Fixed-length packed bit vector. Bit i lives in word i/64 at position i%64.
// Padding bits past size() are kept zero so word-level scans and popcounts
// need no masking.
class BitVector {
public:
    BitVector() = default;

    explicit BitVector(std::size_t size, bool value = false)
        : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        clear_padding();
    }

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const {
        check(i);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool value = true) {
        check(i);
        if (value)
            words_[i >> 6] |= std::uint64_t{1} << (i & 63);
        else
            words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const BitVector&) const = default;

private:
    void check(std::size_t i) const {
        if (i >= size_) throw std::out_of_range("BitVector: index out of range");
    }

    void clear_padding() {
        if (size_ & 63) words_.back() &= ~std::uint64_t{0} >> (64 - (size_ & 63));
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace rowloss
