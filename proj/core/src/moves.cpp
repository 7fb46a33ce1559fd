#include "flipsearch/moves.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "term_filter.hpp"

namespace flipsearch {

using detail::BitVecLess;
using detail::same_term;
using detail::zero_term;

namespace {

constexpr uint32_t npos = UINT32_MAX;

void check_nc(const Scheme& s) {
    if (s.mode == Mode::commutative)
        throw std::invalid_argument("non-commutative move on commutative scheme");
}

}  // namespace

std::vector<FlipCandidate> find_flips(const Scheme& s) {
    check_nc(s);
    std::vector<FlipCandidate> out;
    for (int slot = 0; slot < 3; slot++) {
        int x = slot == 0 ? 1 : 0, y = slot == 2 ? 1 : 2;
        std::map<BitVec, std::vector<uint32_t>, BitVecLess> groups;
        for (uint32_t t = 0; t < s.terms.size(); t++) {
            const BitVec& v = term_slot(s.terms[t], slot);
            if (!v.is_zero()) groups[v].push_back(t);
        }
        for (auto& [vec, g] : groups)
            for (size_t i = 0; i < g.size(); i++)
                for (size_t j = i + 1; j < g.size(); j++) {
                    out.push_back({g[i], g[j], slot, x});
                    out.push_back({g[i], g[j], slot, y});
                    out.push_back({g[j], g[i], slot, x});
                    out.push_back({g[j], g[i], slot, y});
                }
    }
    return out;
}

void apply_flip(Scheme& s, const FlipCandidate& c) {
    check_nc(s);
    auto n = static_cast<uint32_t>(s.terms.size());
    if (c.idx1 >= n || c.idx2 >= n || c.idx1 == c.idx2)
        throw std::invalid_argument("apply_flip: bad term indices");
    if (c.shared_slot < 0 || c.shared_slot > 2 || c.recv_slot < 0 || c.recv_slot > 2 ||
        c.recv_slot == c.shared_slot)
        throw std::invalid_argument("apply_flip: bad slots");
    Term& t1 = s.terms[c.idx1];
    Term& t2 = s.terms[c.idx2];
    if (!(term_slot(t1, c.shared_slot) == term_slot(t2, c.shared_slot)))
        throw std::invalid_argument("apply_flip: terms do not share the slot");
    int give = 3 - c.shared_slot - c.recv_slot;
    term_slot(t1, c.recv_slot) ^= term_slot(t2, c.recv_slot);
    term_slot(t2, give) ^= term_slot(t1, give);
}

void apply_plus(Scheme& s, uint32_t idx1, uint32_t idx2, int variant) {
    check_nc(s);
    auto n = static_cast<uint32_t>(s.terms.size());
    if (idx1 >= n || idx2 >= n || idx1 == idx2)
        throw std::invalid_argument("apply_plus: bad term indices");
    if (variant < 0 || variant > 2) throw std::invalid_argument("apply_plus: bad variant");
    Term t1 = s.terms[idx1];  // copies: push_back below may reallocate
    Term t2 = s.terms[idx2];
    Term fresh;
    switch (variant) {
        case 0:
            s.terms[idx1].v = t1.v ^ t2.v;
            s.terms[idx2].u = t2.u ^ t1.u;
            fresh = {t1.u, t2.v, t2.w ^ t1.w};
            break;
        case 1:
            s.terms[idx1].w = t1.w ^ t2.w;
            s.terms[idx2].v = t2.v ^ t1.v;
            fresh = {t2.u ^ t1.u, t1.v, t2.w};
            break;
        case 2:
            s.terms[idx1].u = t1.u ^ t2.u;
            s.terms[idx2].w = t2.w ^ t1.w;
            fresh = {t2.u, t2.v ^ t1.v, t1.w};
            break;
    }
    s.terms.push_back(std::move(fresh));
}

size_t reduce_trivial(Scheme& s) {
    check_nc(s);
    return detail::strip_trivial_terms(s);
}

namespace {

// within a group sharing slot ss, look for a term whose slot-ts vector is a
// GF(2) combination of the others'; fold its remaining-slot vector into the
// combination's participants and erase it
bool try_reduce_group(Scheme& s, const std::vector<uint32_t>& group, int ts, int us) {
    size_t mw = (group.size() + 63) / 64;
    struct Row {
        std::array<uint64_t, 2> v;
        std::vector<uint64_t> comp;
        bool used = false;
    };
    std::array<Row, BitVec::max_dim> basis{};
    for (size_t gi = 0; gi < group.size(); gi++) {
        const BitVec& bv = term_slot(s.terms[group[gi]], ts);
        std::array<uint64_t, 2> v{bv.word(0), bv.word(1)};
        std::vector<uint64_t> comp(mw, 0);
        comp[gi / 64] |= 1ull << (gi % 64);
        bool inserted = false;
        while (v[0] | v[1]) {
            int p = v[0] ? std::countr_zero(v[0]) : 64 + std::countr_zero(v[1]);
            Row& row = basis[static_cast<size_t>(p)];
            if (!row.used) {
                row.v = v;
                row.comp = comp;
                row.used = true;
                inserted = true;
                break;
            }
            v[0] ^= row.v[0];
            v[1] ^= row.v[1];
            for (size_t k = 0; k < mw; k++) comp[k] ^= row.comp[k];
        }
        if (inserted) continue;
        comp[gi / 64] ^= 1ull << (gi % 64);  // participants exclude the term itself
        BitVec fold = term_slot(s.terms[group[gi]], us);
        for (size_t k = 0; k < mw; k++) {
            uint64_t word = comp[k];
            while (word) {
                size_t pj = k * 64 + static_cast<size_t>(std::countr_zero(word));
                word &= word - 1;
                term_slot(s.terms[group[pj]], us) ^= fold;
            }
        }
        s.terms.erase(s.terms.begin() + group[gi]);
        return true;
    }
    return false;
}

}  // namespace

size_t reduce_full(Scheme& s) {
    check_nc(s);
    size_t removed = reduce_trivial(s);
    bool progress = true;
    while (progress) {
        progress = false;
        for (int ss = 0; ss < 3 && !progress; ss++) {
            for (int ts = 0; ts < 3 && !progress; ts++) {
                if (ts == ss) continue;
                int us = 3 - ss - ts;
                std::map<BitVec, std::vector<uint32_t>, BitVecLess> groups;
                for (uint32_t t = 0; t < s.terms.size(); t++)
                    groups[term_slot(s.terms[t], ss)].push_back(t);
                for (auto& [vec, g] : groups) {
                    if (g.size() < 2) continue;
                    if (try_reduce_group(s, g, ts, us)) {
                        progress = true;
                        break;
                    }
                }
                if (progress) removed += 1 + reduce_trivial(s);
            }
        }
    }
    return removed;
}

FlipWalker::FlipWalker(Scheme s) : s_(std::move(s)) {
    check_nc(s_);
    SlotDims sd = slot_dims(s_.mode, s_.dims);
    for (const Term& t : s_.terms)
        if (t.u.dim() != sd.s1 || t.v.dim() != sd.s2 || t.w.dim() != sd.s3)
            throw std::invalid_argument("FlipWalker: term dimension mismatch");
    reduce_trivial(s_);
    auto n = static_cast<uint32_t>(s_.terms.size());
    for (int slot = 0; slot < 3; slot++) pos_[slot].assign(n, 0);
    for (uint32_t t = 0; t < n; t++)
        for (int slot = 0; slot < 3; slot++) index_insert(t, slot);
}

void FlipWalker::index_insert(uint32_t t, int slot) {
    Group& g = groups_[slot][term_slot(s_.terms[t], slot)];
    for (uint32_t m : g) pairs_[slot].add_pair(t, m);
    pos_[slot][t] = static_cast<uint32_t>(g.size());
    g.push_back(t);
}

void FlipWalker::index_erase(uint32_t t, int slot) {
    auto it = groups_[slot].find(term_slot(s_.terms[t], slot));
    Group& g = it->second;
    uint32_t p = pos_[slot][t];
    uint32_t moved = g.back();
    g[p] = moved;
    g.pop_back();
    if (p < g.size()) pos_[slot][moved] = p;
    if (g.empty()) groups_[slot].erase(it);
    pairs_[slot].remove_element_pairs(t);
}

void FlipWalker::set_slot(uint32_t t, int slot, BitVec v) {
    index_erase(t, slot);
    term_slot(s_.terms[t], slot) = std::move(v);
    index_insert(t, slot);
}

uint32_t FlipWalker::add_term(Term term) {
    auto id = static_cast<uint32_t>(s_.terms.size());
    s_.terms.push_back(std::move(term));
    for (int slot = 0; slot < 3; slot++) pos_[slot].push_back(0);
    for (int slot = 0; slot < 3; slot++) index_insert(id, slot);
    return id;
}

void FlipWalker::remove_term(uint32_t t) {
    for (int slot = 0; slot < 3; slot++) index_erase(t, slot);
    auto last = static_cast<uint32_t>(s_.terms.size() - 1);
    if (t != last) {
        for (int slot = 0; slot < 3; slot++) {
            uint32_t p = pos_[slot][last];
            groups_[slot].find(term_slot(s_.terms[last], slot))->second[p] = t;
            pos_[slot][t] = p;
            pairs_[slot].element_moved(last, t);
        }
        s_.terms[t] = std::move(s_.terms[last]);
    }
    for (int slot = 0; slot < 3; slot++) pos_[slot].pop_back();
    s_.terms.pop_back();
}

void FlipWalker::drop(uint32_t t, std::vector<uint32_t>& work) {
    auto last = static_cast<uint32_t>(s_.terms.size() - 1);
    remove_term(t);
    for (uint32_t& w : work) {
        if (w == t)
            w = npos;
        else if (w == last)
            w = t;  // renumbered by the swap-remove
    }
}

void FlipWalker::cleanup(std::vector<uint32_t> work) {
    while (!work.empty()) {
        uint32_t t = work.back();
        work.pop_back();
        if (t == npos) continue;
        if (zero_term(s_.terms[t])) {
            drop(t, work);
            continue;
        }
        const Group& g = groups_[0].find(s_.terms[t].u)->second;
        uint32_t dup = npos;
        for (uint32_t m : g)
            if (m != t && same_term(s_.terms[m], s_.terms[t])) {
                dup = m;
                break;
            }
        if (dup != npos) {
            drop(std::max(t, dup), work);
            drop(std::min(t, dup), work);
        }
    }
}

bool FlipWalker::random_flip(std::mt19937_64& rng) {
    size_t total = flip_pair_count();
    if (total == 0) return false;
    uint64_t r = rng() % total;
    int slot = 0;
    while (r >= pairs_[slot].size()) {
        r -= pairs_[slot].size();
        slot++;
    }
    auto [a, b] = pairs_[slot].pair(static_cast<uint32_t>(r));
    if (rng() & 1) std::swap(a, b);
    int x = slot == 0 ? 1 : 0, y = slot == 2 ? 1 : 2;
    // a absorbs b's vector in slot x, b absorbs a's original vector in slot y
    BitVec nx = term_slot(s_.terms[a], x) ^ term_slot(s_.terms[b], x);
    BitVec ny = term_slot(s_.terms[b], y) ^ term_slot(s_.terms[a], y);
    set_slot(a, x, std::move(nx));
    set_slot(b, y, std::move(ny));
    cleanup({a, b});
    return true;
}

bool FlipWalker::random_plus(std::mt19937_64& rng) {
    auto n = static_cast<uint32_t>(s_.terms.size());
    if (n < 2) return false;
    for (int tries = 0; tries < 64; tries++) {
        auto i = static_cast<uint32_t>(rng() % n);
        auto j = static_cast<uint32_t>(rng() % n);
        if (i == j) continue;
        Term t1 = s_.terms[i];  // by value: set_slot invalidates references
        Term t2 = s_.terms[j];
        // distinct vectors in every slot keep all produced factors nonzero
        if (t1.u == t2.u || t1.v == t2.v || t1.w == t2.w) continue;
        switch (static_cast<int>(rng() % 3)) {
            case 0:
                set_slot(i, 1, t1.v ^ t2.v);
                set_slot(j, 0, t2.u ^ t1.u);
                cleanup({i, j, add_term({t1.u, t2.v, t2.w ^ t1.w})});
                break;
            case 1:
                set_slot(i, 2, t1.w ^ t2.w);
                set_slot(j, 1, t2.v ^ t1.v);
                cleanup({i, j, add_term({t2.u ^ t1.u, t1.v, t2.w})});
                break;
            case 2:
                set_slot(i, 0, t1.u ^ t2.u);
                set_slot(j, 2, t2.w ^ t1.w);
                cleanup({i, j, add_term({t2.u, t2.v ^ t1.v, t1.w})});
                break;
        }
        return true;
    }
    return false;
}

std::vector<std::pair<uint32_t, uint32_t>> FlipWalker::candidate_pairs(int slot) const {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    out.reserve(pairs_[slot].size());
    for (uint32_t pid = 0; pid < pairs_[slot].size(); pid++) {
        auto [a, b] = pairs_[slot].pair(pid);
        out.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool FlipWalker::check_consistency() const {
    FlipWalker fresh(s_);
    if (fresh.s_.terms.size() != s_.terms.size()) return false;
    for (int slot = 0; slot < 3; slot++) {
        if (candidate_pairs(slot) != fresh.candidate_pairs(slot)) return false;
        for (uint32_t t = 0; t < s_.terms.size(); t++) {
            auto it = groups_[slot].find(term_slot(s_.terms[t], slot));
            if (it == groups_[slot].end()) return false;
            const Group& g = it->second;
            if (pos_[slot][t] >= g.size() || g[pos_[slot][t]] != t) return false;
        }
    }
    return true;
}

}  // namespace flipsearch
