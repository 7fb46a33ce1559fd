#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flipsearch {

// Packed bit vector over GF(2). Capacity is fixed at 128 bits, which covers
// every slot space for sizes up to 7x7x7 (the largest is the commutative
// U1 space of dimension 2*7*7 = 98).
class BitVec {
public:
    static constexpr uint32_t max_dim = 128;

    BitVec() = default;
    explicit BitVec(uint32_t dim) : dim_(dim) {
        if (dim > max_dim)
            throw std::invalid_argument("BitVec: dimension exceeds capacity");
    }

    static BitVec unit(uint32_t dim, uint32_t index) {
        BitVec v(dim);
        if (index >= dim)
            throw std::out_of_range("BitVec::unit: index out of range");
        v.set(index);
        return v;
    }

    // parses a coefficient string like "0110" (coordinate 0 first)
    static BitVec parse(std::string_view bits) {
        BitVec v(static_cast<uint32_t>(bits.size()));
        for (uint32_t i = 0; i < bits.size(); i++) {
            if (bits[i] == '1')
                v.set(i);
            else if (bits[i] != '0')
                throw std::invalid_argument("BitVec::parse: expected '0' or '1'");
        }
        return v;
    }

    uint32_t dim() const { return dim_; }

    bool test(uint32_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(uint32_t i) { words_[i >> 6] |= uint64_t(1) << (i & 63); }
    void reset(uint32_t i) { words_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }

    bool is_zero() const { return (words_[0] | words_[1]) == 0; }
    int popcount() const { return std::popcount(words_[0]) + std::popcount(words_[1]); }
    uint64_t word(int k) const { return words_[k]; }

    // index of the first set coordinate, or -1 when zero
    int lowest_set() const {
        if (words_[0]) return std::countr_zero(words_[0]);
        if (words_[1]) return 64 + std::countr_zero(words_[1]);
        return -1;
    }

    BitVec& operator^=(const BitVec& o) {
        if (dim_ != o.dim_)
            throw std::invalid_argument("BitVec: dimension mismatch");
        words_[0] ^= o.words_[0];
        words_[1] ^= o.words_[1];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

    friend bool operator==(const BitVec&, const BitVec&) = default;

    // visits set coordinates in increasing order
    template <typename F>
    void for_each_set(F&& f) const {
        for (int k = 0; k < 2; k++) {
            uint64_t w = words_[k];
            while (w) {
                f(static_cast<uint32_t>(k * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    std::string to_string() const {
        std::string s(dim_, '0');
        for_each_set([&](uint32_t i) { s[i] = '1'; });
        return s;
    }

    uint64_t hash() const;

private:
    std::array<uint64_t, 2> words_{0, 0};
    uint32_t dim_ = 0;
};

// Order on the coefficient string in coordinate order: the first differing
// coordinate decides, 0 before 1. Used for canonical unordered pairs.
std::strong_ordering lex_compare(const BitVec& a, const BitVec& b);

struct BitVecHash {
    size_t operator()(const BitVec& v) const { return static_cast<size_t>(v.hash()); }
};

// dimension of the span of `rows` over GF(2)
int gf2_rank(std::span<const BitVec> rows);

// SplitMix64 finalizer; used for hashing and for deriving walker seeds
uint64_t splitmix64(uint64_t x);

}  // namespace flipsearch
