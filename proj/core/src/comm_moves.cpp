#include "flipsearch/comm_moves.hpp"

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

void check_comm(const Scheme& s) {
    if (s.mode != Mode::commutative)
        throw std::invalid_argument("commutative move on non-commutative scheme");
}

}  // namespace

std::vector<CommFlipCandidate> find_comm_flips(const Scheme& s) {
    check_comm(s);
    std::vector<CommFlipCandidate> out;
    std::map<BitVec, std::vector<uint32_t>, BitVecLess> cg;
    for (uint32_t t = 0; t < s.terms.size(); t++)
        if (!s.terms[t].w.is_zero()) cg[s.terms[t].w].push_back(t);
    for (auto& [w, g] : cg)
        for (size_t i = 0; i < g.size(); i++)
            for (size_t j = i + 1; j < g.size(); j++)
                for (int pos1 = 0; pos1 < 2; pos1++)
                    for (int pos2 = 0; pos2 < 2; pos2++)
                        out.push_back({g[i], g[j], CommFlipKind::c_slot, pos1, pos2, 0});
    // occurrence ids 2*term + position, ascending
    std::map<BitVec, std::vector<uint32_t>, BitVecLess> ug;
    for (uint32_t t = 0; t < s.terms.size(); t++) {
        if (!s.terms[t].u.is_zero()) ug[s.terms[t].u].push_back(2 * t);
        if (!s.terms[t].v.is_zero()) ug[s.terms[t].v].push_back(2 * t + 1);
    }
    for (auto& [vec, g] : ug)
        for (size_t i = 0; i < g.size(); i++)
            for (size_t j = i + 1; j < g.size(); j++) {
                if ((g[i] >> 1) == (g[j] >> 1)) continue;
                for (int variant = 0; variant < 2; variant++)
                    out.push_back({g[i] >> 1, g[j] >> 1, CommFlipKind::ab_slot,
                                   static_cast<int>(g[i] & 1), static_cast<int>(g[j] & 1),
                                   variant});
            }
    return out;
}

void apply_comm_flip(Scheme& s, const CommFlipCandidate& c) {
    check_comm(s);
    auto n = static_cast<uint32_t>(s.terms.size());
    if (c.idx1 >= n || c.idx2 >= n || c.idx1 == c.idx2)
        throw std::invalid_argument("apply_comm_flip: bad term indices");
    if (c.pos1 < 0 || c.pos1 > 1 || c.pos2 < 0 || c.pos2 > 1)
        throw std::invalid_argument("apply_comm_flip: bad factor positions");
    Term a = s.terms[c.idx1];
    Term b = s.terms[c.idx2];
    if (c.kind == CommFlipKind::c_slot) {
        if (c.variant != 0) throw std::invalid_argument("apply_comm_flip: bad variant");
        if (!(a.w == b.w))
            throw std::invalid_argument("apply_comm_flip: output vectors differ");
        BitVec x1 = c.pos1 ? a.v : a.u, y1 = c.pos1 ? a.u : a.v;
        BitVec x2 = c.pos2 ? b.v : b.u, y2 = c.pos2 ? b.u : b.v;
        s.terms[c.idx1] = canonical_comm({x1, y1 ^ y2, a.w});
        s.terms[c.idx2] = canonical_comm({x1 ^ x2, y2, b.w});
        return;
    }
    if (c.variant < 0 || c.variant > 1)
        throw std::invalid_argument("apply_comm_flip: bad variant");
    BitVec u = c.pos1 ? a.v : a.u;
    if (!(u == (c.pos2 ? b.v : b.u)))
        throw std::invalid_argument("apply_comm_flip: shared factor differs");
    BitVec y1 = c.pos1 ? a.u : a.v, y2 = c.pos2 ? b.u : b.v;
    if (c.variant == 0) {
        s.terms[c.idx1] = canonical_comm({u, y1 ^ y2, a.w});
        s.terms[c.idx2] = canonical_comm({u, y2, b.w ^ a.w});
    } else {
        s.terms[c.idx1] = canonical_comm({u, y1, a.w ^ b.w});
        s.terms[c.idx2] = canonical_comm({u, y2 ^ y1, b.w});
    }
}

void apply_comm_plus(Scheme& s, uint32_t idx1, uint32_t idx2, int variant) {
    check_comm(s);
    auto n = static_cast<uint32_t>(s.terms.size());
    if (idx1 >= n || idx2 >= n || idx1 == idx2)
        throw std::invalid_argument("apply_comm_plus: bad term indices");
    if (variant < 0 || variant > 2)
        throw std::invalid_argument("apply_comm_plus: bad variant");
    Term a = s.terms[idx1];
    Term b = s.terms[idx2];
    Term fresh;
    switch (variant) {
        case 0:
            s.terms[idx1] = canonical_comm({a.u, a.v ^ b.v, a.w});
            s.terms[idx2] = canonical_comm({b.u ^ a.u, b.v, b.w});
            fresh = {a.u, b.v, b.w ^ a.w};
            break;
        case 1:
            s.terms[idx1] = canonical_comm({a.u, a.v, a.w ^ b.w});
            s.terms[idx2] = canonical_comm({b.u, b.v ^ a.v, b.w});
            fresh = {b.u ^ a.u, a.v, b.w};
            break;
        case 2:
            s.terms[idx1] = canonical_comm({a.u ^ b.u, a.v, a.w});
            s.terms[idx2] = canonical_comm({b.u, b.v, b.w ^ a.w});
            fresh = {b.u, b.v ^ a.v, a.w};
            break;
    }
    s.terms.push_back(canonical_comm(std::move(fresh)));
}

size_t reduce_comm_trivial(Scheme& s) {
    check_comm(s);
    for (Term& t : s.terms) t = canonical_comm(std::move(t));
    return detail::strip_trivial_terms(s);
}

CommWalker::CommWalker(Scheme s) : s_(std::move(s)) {
    check_comm(s_);
    SlotDims sd = slot_dims(s_.mode, s_.dims);
    for (const Term& t : s_.terms)
        if (t.u.dim() != sd.s1 || t.v.dim() != sd.s1 || t.w.dim() != sd.s3)
            throw std::invalid_argument("CommWalker: term dimension mismatch");
    reduce_comm_trivial(s_);
    auto n = static_cast<uint32_t>(s_.terms.size());
    c_pos_.assign(n, 0);
    u_pos_.assign(2 * n, 0);
    for (uint32_t t = 0; t < n; t++) index_insert(t);
}

void CommWalker::index_insert(uint32_t t) {
    Group& cg = c_groups_[s_.terms[t].w];
    for (uint32_t m : cg) c_pairs_.add_pair(t, m);
    c_pos_[t] = static_cast<uint32_t>(cg.size());
    cg.push_back(t);
    for (uint32_t pos = 0; pos < 2; pos++) {
        uint32_t occ = 2 * t + pos;
        Group& ug = u_groups_[pos ? s_.terms[t].v : s_.terms[t].u];
        for (uint32_t m : ug)
            if ((m >> 1) != t) u_pairs_.add_pair(occ, m);
        u_pos_[occ] = static_cast<uint32_t>(ug.size());
        ug.push_back(occ);
    }
}

void CommWalker::index_erase(uint32_t t) {
    auto cit = c_groups_.find(s_.terms[t].w);
    Group& cg = cit->second;
    uint32_t p = c_pos_[t];
    uint32_t moved = cg.back();
    cg[p] = moved;
    cg.pop_back();
    if (p < cg.size()) c_pos_[moved] = p;
    if (cg.empty()) c_groups_.erase(cit);
    c_pairs_.remove_element_pairs(t);
    for (uint32_t pos = 0; pos < 2; pos++) {
        uint32_t occ = 2 * t + pos;
        auto uit = u_groups_.find(pos ? s_.terms[t].v : s_.terms[t].u);
        Group& ug = uit->second;
        uint32_t up = u_pos_[occ];
        uint32_t umoved = ug.back();
        ug[up] = umoved;
        ug.pop_back();
        if (up < ug.size()) u_pos_[umoved] = up;
        if (ug.empty()) u_groups_.erase(uit);
        u_pairs_.remove_element_pairs(occ);
    }
}

void CommWalker::set_term(uint32_t t, Term term) {
    index_erase(t);
    s_.terms[t] = canonical_comm(std::move(term));
    index_insert(t);
}

uint32_t CommWalker::add_term(Term term) {
    auto id = static_cast<uint32_t>(s_.terms.size());
    s_.terms.push_back(canonical_comm(std::move(term)));
    c_pos_.push_back(0);
    u_pos_.push_back(0);
    u_pos_.push_back(0);
    index_insert(id);
    return id;
}

void CommWalker::remove_term(uint32_t t) {
    index_erase(t);
    auto last = static_cast<uint32_t>(s_.terms.size() - 1);
    if (t != last) {
        uint32_t p = c_pos_[last];
        c_groups_.find(s_.terms[last].w)->second[p] = t;
        c_pos_[t] = p;
        c_pairs_.element_moved(last, t);
        for (uint32_t pos = 0; pos < 2; pos++) {
            uint32_t from = 2 * last + pos, to = 2 * t + pos;
            uint32_t up = u_pos_[from];
            u_groups_.find(pos ? s_.terms[last].v : s_.terms[last].u)->second[up] = to;
            u_pos_[to] = up;
            u_pairs_.element_moved(from, to);
        }
        s_.terms[t] = std::move(s_.terms[last]);
    }
    c_pos_.pop_back();
    u_pos_.pop_back();
    u_pos_.pop_back();
    s_.terms.pop_back();
}

void CommWalker::drop(uint32_t t, std::vector<uint32_t>& work) {
    auto last = static_cast<uint32_t>(s_.terms.size() - 1);
    remove_term(t);
    for (uint32_t& w : work) {
        if (w == t)
            w = npos;
        else if (w == last)
            w = t;  // renumbered by the swap-remove
    }
}

void CommWalker::cleanup(std::vector<uint32_t> work) {
    while (!work.empty()) {
        uint32_t t = work.back();
        work.pop_back();
        if (t == npos) continue;
        if (zero_term(s_.terms[t])) {
            drop(t, work);
            continue;
        }
        const Group& g = c_groups_.find(s_.terms[t].w)->second;
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

bool CommWalker::random_flip(std::mt19937_64& rng) {
    size_t total = flip_candidate_count();
    if (total == 0) return false;
    uint64_t r = rng() % total;
    if (r < 4 * c_pairs_.size()) {
        auto [t1, t2] = c_pairs_.pair(static_cast<uint32_t>(r / 4));
        int pos1 = static_cast<int>((r >> 1) & 1), pos2 = static_cast<int>(r & 1);
        Term a = s_.terms[t1], b = s_.terms[t2];
        BitVec x1 = pos1 ? a.v : a.u, y1 = pos1 ? a.u : a.v;
        BitVec x2 = pos2 ? b.v : b.u, y2 = pos2 ? b.u : b.v;
        set_term(t1, {x1, y1 ^ y2, a.w});
        set_term(t2, {x1 ^ x2, y2, b.w});
        cleanup({t1, t2});
    } else {
        r -= 4 * c_pairs_.size();
        auto [o1, o2] = u_pairs_.pair(static_cast<uint32_t>(r / 2));
        uint32_t t1 = o1 >> 1, t2 = o2 >> 1;
        Term a = s_.terms[t1], b = s_.terms[t2];
        BitVec u = (o1 & 1) ? a.v : a.u;
        BitVec y1 = (o1 & 1) ? a.u : a.v, y2 = (o2 & 1) ? b.u : b.v;
        if ((r & 1) == 0) {
            set_term(t1, {u, y1 ^ y2, a.w});
            set_term(t2, {u, y2, b.w ^ a.w});
        } else {
            set_term(t1, {u, y1, a.w ^ b.w});
            set_term(t2, {u, y2 ^ y1, b.w});
        }
        cleanup({t1, t2});
    }
    return true;
}

bool CommWalker::random_plus(std::mt19937_64& rng) {
    auto n = static_cast<uint32_t>(s_.terms.size());
    if (n < 2) return false;
    for (int tries = 0; tries < 64; tries++) {
        auto i = static_cast<uint32_t>(rng() % n);
        auto j = static_cast<uint32_t>(rng() % n);
        if (i == j) continue;
        Term a = s_.terms[i];
        Term b = s_.terms[j];
        if (rng() & 1) std::swap(a.u, a.v);  // either representative may act
        if (rng() & 1) std::swap(b.u, b.v);
        // distinct vectors in every slot keep all produced factors nonzero
        if (a.u == b.u || a.v == b.v || a.w == b.w) continue;
        switch (static_cast<int>(rng() % 3)) {
            case 0:
                set_term(i, {a.u, a.v ^ b.v, a.w});
                set_term(j, {b.u ^ a.u, b.v, b.w});
                cleanup({i, j, add_term({a.u, b.v, b.w ^ a.w})});
                break;
            case 1:
                set_term(i, {a.u, a.v, a.w ^ b.w});
                set_term(j, {b.u, b.v ^ a.v, b.w});
                cleanup({i, j, add_term({b.u ^ a.u, a.v, b.w})});
                break;
            case 2:
                set_term(i, {a.u ^ b.u, a.v, a.w});
                set_term(j, {b.u, b.v, b.w ^ a.w});
                cleanup({i, j, add_term({b.u, b.v ^ a.v, a.w})});
                break;
        }
        return true;
    }
    return false;
}

std::vector<std::pair<uint32_t, uint32_t>> CommWalker::c_pair_list() const {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    out.reserve(c_pairs_.size());
    for (uint32_t pid = 0; pid < c_pairs_.size(); pid++) {
        auto [a, b] = c_pairs_.pair(pid);
        out.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<uint32_t, uint32_t>> CommWalker::u_pair_list() const {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    out.reserve(u_pairs_.size());
    for (uint32_t pid = 0; pid < u_pairs_.size(); pid++) {
        auto [a, b] = u_pairs_.pair(pid);
        out.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool CommWalker::check_consistency() const {
    CommWalker fresh(s_);
    if (fresh.s_.terms.size() != s_.terms.size()) return false;
    if (c_pair_list() != fresh.c_pair_list()) return false;
    if (u_pair_list() != fresh.u_pair_list()) return false;
    for (uint32_t t = 0; t < s_.terms.size(); t++) {
        auto cit = c_groups_.find(s_.terms[t].w);
        if (cit == c_groups_.end()) return false;
        if (c_pos_[t] >= cit->second.size() || cit->second[c_pos_[t]] != t) return false;
        for (uint32_t pos = 0; pos < 2; pos++) {
            uint32_t occ = 2 * t + pos;
            auto uit = u_groups_.find(pos ? s_.terms[t].v : s_.terms[t].u);
            if (uit == u_groups_.end()) return false;
            if (u_pos_[occ] >= uit->second.size() || uit->second[u_pos_[occ]] != occ)
                return false;
        }
    }
    return true;
}

}  // namespace flipsearch
