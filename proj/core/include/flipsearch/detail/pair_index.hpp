#pragma once

#include <cstdint>
#include <vector>

namespace flipsearch::detail {

// Dense set of unordered pairs of element ids supporting O(1) uniform
// sampling, O(1) pair removal, and removal of every pair incident to an
// element.  Pair ids and list positions are maintained with swap-remove, so
// ids handed out earlier may be reused after removals; callers must not hold
// pair ids across mutations.  Elements of a pair are always distinct.
class PairIndex {
public:
    struct Pair {
        uint32_t a, b;
    };

    void clear() {
        pairs_.clear();
        for (auto& l : lists_) l.clear();
    }

    size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }

    uint32_t add_pair(uint32_t a, uint32_t b) {
        if (size_t need = static_cast<size_t>(a > b ? a : b) + 1; lists_.size() < need)
            lists_.resize(need);
        auto pid = static_cast<uint32_t>(pairs_.size());
        pairs_.push_back({a, b, static_cast<uint32_t>(lists_[a].size()),
                          static_cast<uint32_t>(lists_[b].size())});
        lists_[a].push_back(pid);
        lists_[b].push_back(pid);
        return pid;
    }

    void remove_pair(uint32_t pid) {
        Entry e = pairs_[pid];
        detach(e.a, e.pos_a);
        detach(e.b, e.pos_b);
        auto last = static_cast<uint32_t>(pairs_.size() - 1);
        if (pid != last) {
            pairs_[pid] = pairs_[last];
            Entry& m = pairs_[pid];
            lists_[m.a][m.pos_a] = pid;
            lists_[m.b][m.pos_b] = pid;
        }
        pairs_.pop_back();
    }

    void remove_element_pairs(uint32_t e) {
        if (e >= lists_.size()) return;
        while (!lists_[e].empty()) remove_pair(lists_[e].back());
    }

    // renumber an element after the caller swap-removed element `to` (whose
    // incident pairs must already be gone) and moved element `from` into its
    // slot
    void element_moved(uint32_t from, uint32_t to) {
        if (from >= lists_.size() || lists_[from].empty()) return;
        if (size_t need = static_cast<size_t>(to) + 1; lists_.size() < need) lists_.resize(need);
        lists_[to] = std::move(lists_[from]);
        lists_[from].clear();
        for (uint32_t pid : lists_[to]) {
            Entry& p = pairs_[pid];
            (p.a == from ? p.a : p.b) = to;
        }
    }

    Pair pair(uint32_t pid) const { return {pairs_[pid].a, pairs_[pid].b}; }

    // uniform over stored pairs; requires !empty().  Plain modulo keeps the
    // draw sequence identical across platforms for a given engine.
    template <typename Rng>
    Pair sample(Rng& rng) const {
        return pair(static_cast<uint32_t>(rng() % pairs_.size()));
    }

private:
    struct Entry {
        uint32_t a, b;       // endpoints, a != b
        uint32_t pos_a, pos_b;  // positions of this pair id inside lists_
    };

    void detach(uint32_t elem, uint32_t pos) {
        auto& list = lists_[elem];
        uint32_t moved = list.back();
        list[pos] = moved;
        list.pop_back();
        if (pos < list.size()) {
            Entry& m = pairs_[moved];
            (m.a == elem ? m.pos_a : m.pos_b) = pos;
        }
    }

    std::vector<Entry> pairs_;
    std::vector<std::vector<uint32_t>> lists_;
};

}  // namespace flipsearch::detail
