#pragma once

// internal helpers shared by the move implementations; not installed

#include <unordered_map>
#include <utility>
#include <vector>

#include "flipsearch/gf2.hpp"
#include "flipsearch/tensors.hpp"

namespace flipsearch::detail {

struct BitVecLess {
    bool operator()(const BitVec& a, const BitVec& b) const {
        return lex_compare(a, b) == std::strong_ordering::less;
    }
};

inline uint64_t term_hash(const Term& t) {
    return splitmix64(t.u.hash() ^ splitmix64(t.v.hash() ^ t.w.hash()));
}

inline bool same_term(const Term& a, const Term& b) {
    return a.u == b.u && a.v == b.v && a.w == b.w;
}

inline bool zero_term(const Term& t) {
    return t.u.is_zero() || t.v.is_zero() || t.w.is_zero();
}

// drop zero-factor terms and cancel exact duplicate pairs over GF(2), keeping
// one copy of odd-count values in first-occurrence order
inline size_t strip_trivial_terms(Scheme& s) {
    size_t before = s.terms.size();
    std::erase_if(s.terms, zero_term);
    std::unordered_map<uint64_t, std::vector<std::pair<uint32_t, uint32_t>>> seen;
    for (uint32_t i = 0; i < s.terms.size(); i++) {
        auto& bucket = seen[term_hash(s.terms[i])];
        bool found = false;
        for (auto& [rep, parity] : bucket)
            if (same_term(s.terms[rep], s.terms[i])) {
                parity ^= 1;
                found = true;
                break;
            }
        if (!found) bucket.push_back({i, 1});
    }
    std::vector<bool> keep(s.terms.size(), false);
    for (auto& [h, bucket] : seen)
        for (auto& [rep, parity] : bucket)
            if (parity) keep[rep] = true;
    std::vector<Term> out;
    out.reserve(s.terms.size());
    for (uint32_t i = 0; i < s.terms.size(); i++)
        if (keep[i]) out.push_back(std::move(s.terms[i]));
    s.terms = std::move(out);
    return before - s.terms.size();
}

}  // namespace flipsearch::detail
