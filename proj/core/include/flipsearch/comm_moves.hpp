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

// Moves on commutative schemes.  A term {p, q | w} stands for the symmetrized
// product of p and q paired with w; the p/q pair is unordered and stored
// canonically.  Flips come in two kinds: two terms sharing their output-slot
// vector w admit four distinct rewrites (one per choice of which factor of
// each term is held fixed), and two terms sharing a factor vector admit two
// (the shared factor is held fixed and either the other factors or the
// output vectors recombine).  All moves preserve the embedded sum over the
// symmetric quotient space.

namespace flipsearch {

enum class CommFlipKind { c_slot, ab_slot };

struct CommFlipCandidate {
    uint32_t idx1 = 0, idx2 = 0;  // distinct term indices
    CommFlipKind kind = CommFlipKind::c_slot;
    int pos1 = 0, pos2 = 0;  // factor position (0 = first, 1 = second) held
                             // fixed in idx1/idx2 (c_slot) or carrying the
                             // shared vector (ab_slot)
    int variant = 0;         // ab_slot only: 0 recombines factors into idx1
                             // and outputs into idx2, 1 the reverse
};

// every distinct flip available on the scheme; deterministic order
std::vector<CommFlipCandidate> find_comm_flips(const Scheme& s);

// throws std::invalid_argument on bad indices/fields or if the required
// shared vector no longer matches
void apply_comm_flip(Scheme& s, const CommFlipCandidate& c);

// splits terms idx1, idx2 into three with the same sum, acting on the stored
// representatives; variant in {0,1,2}
void apply_comm_plus(Scheme& s, uint32_t idx1, uint32_t idx2, int variant);

// canonicalize factor order, drop zero-factor terms, cancel duplicate pairs
size_t reduce_comm_trivial(Scheme& s);

// incremental random-walk state over a commutative scheme; the analogue of
// FlipWalker on the symmetric quotient
class CommWalker {
public:
    explicit CommWalker(Scheme s);

    const Scheme& scheme() const { return s_; }
    int rank() const { return static_cast<int>(s_.terms.size()); }

    bool random_flip(std::mt19937_64& rng);

    // plus split with per-operand random factor-order choice so both
    // representatives of each term are reachable
    bool random_plus(std::mt19937_64& rng);

    size_t flip_candidate_count() const { return 4 * c_pairs_.size() + 2 * u_pairs_.size(); }

    // sorted term-id pairs sharing the output slot (for cross-checks)
    std::vector<std::pair<uint32_t, uint32_t>> c_pair_list() const;
    // sorted occurrence-id pairs sharing a factor vector; occurrence id is
    // 2*term + position
    std::vector<std::pair<uint32_t, uint32_t>> u_pair_list() const;

    // rebuilds the indexes from the scheme and compares (slow; for tests)
    bool check_consistency() const;

private:
    using Group = std::vector<uint32_t>;

    void index_insert(uint32_t t);
    void index_erase(uint32_t t);
    void set_term(uint32_t t, Term term);
    uint32_t add_term(Term term);
    void remove_term(uint32_t t);
    void drop(uint32_t t, std::vector<uint32_t>& work);
    void cleanup(std::vector<uint32_t> work);

    Scheme s_;
    std::unordered_map<BitVec, Group, BitVecHash> c_groups_;  // w -> term ids
    std::vector<uint32_t> c_pos_;
    detail::PairIndex c_pairs_;  // term-id pairs sharing w
    std::unordered_map<BitVec, Group, BitVecHash> u_groups_;  // factor -> occurrence ids
    std::vector<uint32_t> u_pos_;
    detail::PairIndex u_pairs_;  // occurrence-id pairs, never within one term
};

}  // namespace flipsearch
