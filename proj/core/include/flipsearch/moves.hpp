#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flipsearch/detail/pair_index.hpp"
#include "flipsearch/gf2.hpp"
#include "flipsearch/tensors.hpp"

// Moves on non-commutative schemes (standard and marakov modes).  A flip
// takes two terms agreeing in one slot and moves a summand between the other
// two slots; it preserves the embedded sum and the term count.  A plus split
// rewrites two arbitrary terms into three with the same sum.  Commutative
// schemes use the quotient-space moves in comm_moves.hpp instead.

namespace flipsearch {

inline BitVec& term_slot(Term& t, int slot) {
    return slot == 0 ? t.u : slot == 1 ? t.v : t.w;
}
inline const BitVec& term_slot(const Term& t, int slot) {
    return slot == 0 ? t.u : slot == 1 ? t.v : t.w;
}

struct FlipCandidate {
    uint32_t idx1 = 0, idx2 = 0;  // distinct term indices
    int shared_slot = 0;          // slot where the two terms agree
    int recv_slot = 0;            // slot of idx1 that absorbs idx2's vector;
                                  // idx2 absorbs idx1's in the remaining slot
};

// every ordered (idx1, idx2, recv_slot) whose terms share a nonzero vector in
// some slot; deterministic order
std::vector<FlipCandidate> find_flips(const Scheme& s);

// throws std::invalid_argument on bad indices/slots or if the terms no
// longer agree in shared_slot
void apply_flip(Scheme& s, const FlipCandidate& c);

// splits terms idx1, idx2 into three with the same sum; variant in {0,1,2}
// picks which slot pair carries the recombination
void apply_plus(Scheme& s, uint32_t idx1, uint32_t idx2, int variant);

// drop zero-factor terms and cancel duplicate term pairs; returns number of
// terms removed
size_t reduce_trivial(Scheme& s);

// additionally eliminate terms whose vectors in one slot are linearly
// dependent within a group sharing another slot; returns terms removed
size_t reduce_full(Scheme& s);

// incremental random-walk state over a non-commutative scheme.  Keeps the
// scheme free of zero-factor and duplicate terms and maintains per-slot
// indexes of all flippable term pairs for O(1) uniform sampling.
class FlipWalker {
public:
    explicit FlipWalker(Scheme s);

    const Scheme& scheme() const { return s_; }
    int rank() const { return static_cast<int>(s_.terms.size()); }

    // one uniformly random flip among all (pair, orientation) candidates;
    // false if none exist
    bool random_flip(std::mt19937_64& rng);

    // plus split of two random terms with pairwise distinct vectors in every
    // slot (keeps all produced factors nonzero); false if no such pair is
    // found in a bounded number of draws
    bool random_plus(std::mt19937_64& rng);

    size_t flip_pair_count() const {
        return pairs_[0].size() + pairs_[1].size() + pairs_[2].size();
    }

    // sorted unordered pairs sharing a given slot (for cross-checks)
    std::vector<std::pair<uint32_t, uint32_t>> candidate_pairs(int slot) const;

    // rebuilds the indexes from the scheme and compares (slow; for tests)
    bool check_consistency() const;

private:
    using Group = std::vector<uint32_t>;

    void index_insert(uint32_t t, int slot);
    void index_erase(uint32_t t, int slot);
    void set_slot(uint32_t t, int slot, BitVec v);
    uint32_t add_term(Term term);
    void remove_term(uint32_t t);
    void drop(uint32_t t, std::vector<uint32_t>& work);
    void cleanup(std::vector<uint32_t> work);

    Scheme s_;
    std::array<std::unordered_map<BitVec, Group, BitVecHash>, 3> groups_;
    std::array<std::vector<uint32_t>, 3> pos_;  // pos_[slot][term] inside its group
    std::array<detail::PairIndex, 3> pairs_;
};

}  // namespace flipsearch
