#include "flipsearch/gf2.hpp"

#include <vector>

namespace flipsearch {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t BitVec::hash() const {
    return splitmix64(words_[0] ^ splitmix64(words_[1] ^ dim_));
}

std::strong_ordering lex_compare(const BitVec& a, const BitVec& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("lex_compare: dimension mismatch");
    for (int k = 0; k < 2; k++) {
        uint64_t d = a.word(k) ^ b.word(k);
        if (d) {
            // the lowest differing coordinate decides; holding a 1 there
            // makes the vector the larger one
            uint64_t low = d & (~d + 1);
            return (a.word(k) & low) ? std::strong_ordering::greater
                                     : std::strong_ordering::less;
        }
    }
    return std::strong_ordering::equal;
}

int gf2_rank(std::span<const BitVec> rows) {
    // linear basis indexed by pivot position; basis[p], when present, has its
    // lowest set bit at p, so reducing at ascending pivots never reintroduces
    // an already-cleared bit
    std::array<std::array<uint64_t, 2>, BitVec::max_dim> basis{};
    std::array<bool, BitVec::max_dim> have{};
    int rank = 0;
    for (const BitVec& r : rows) {
        std::array<uint64_t, 2> v{r.word(0), r.word(1)};
        while (v[0] | v[1]) {
            int p = v[0] ? std::countr_zero(v[0]) : 64 + std::countr_zero(v[1]);
            if (have[p]) {
                v[0] ^= basis[p][0];
                v[1] ^= basis[p][1];
            } else {
                basis[p] = v;
                have[p] = true;
                rank++;
                break;
            }
        }
    }
    return rank;
}

}  // namespace flipsearch
