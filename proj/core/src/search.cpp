#include "flipsearch/search.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <type_traits>
#include <vector>

#include "flipsearch/comm_moves.hpp"
#include "flipsearch/gf2.hpp"
#include "flipsearch/moves.hpp"
#include "flipsearch/scheme_io.hpp"

namespace flipsearch {

namespace {

struct SharedState {
    std::atomic<int> best_rank{INT_MAX};
    std::mutex io;
};

uint64_t stream_seed(const SearchParams& p, int walker_id, int restart) {
    auto restarts = static_cast<uint64_t>(std::max(p.restarts, 1));
    return p.seed ^ splitmix64(static_cast<uint64_t>(walker_id) * restarts +
                               static_cast<uint64_t>(restart));
}

template <typename Walker>
SearchReport walk_once(const Scheme& start, const SearchParams& p, int walker_id, int restart,
                       SharedState& shared) {
    std::mt19937_64 rng(stream_seed(p, walker_id, restart));
    Walker w{Scheme(start)};
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    int local_best = w.rank();
    Scheme best_scheme = w.scheme();
    {
        int cur = shared.best_rank.load(std::memory_order_relaxed);
        while (local_best < cur && !shared.best_rank.compare_exchange_weak(
                                       cur, local_best, std::memory_order_relaxed)) {
        }
    }

    uint64_t it = 0;
    uint64_t last_improve = 0;
    // records a new walk best; returns true once the target rank is reached
    auto improved = [&](int r) {
        local_best = r;
        last_improve = it;
        best_scheme = w.scheme();
        if (!verify(best_scheme))
            throw std::runtime_error("internal error: walk produced an unverifiable scheme");
        int cur = shared.best_rank.load(std::memory_order_relaxed);
        bool global = false;
        while (r < cur)
            if (shared.best_rank.compare_exchange_weak(cur, r, std::memory_order_relaxed)) {
                global = true;
                break;
            }
        if (global) {
            std::lock_guard<std::mutex> lk(shared.io);
            if (!p.checkpoint_path.empty()) write_scheme_file(p.checkpoint_path, best_scheme);
            if (p.progress) p.progress({walker_id, it, r, r, elapsed()});
        }
        return p.target_rank > 0 && r <= p.target_rank;
    };

    while (it < p.max_iterations) {
        if (p.interrupt && p.interrupt->load(std::memory_order_relaxed)) break;
        if (p.target_rank > 0 &&
            shared.best_rank.load(std::memory_order_relaxed) <= p.target_rank)
            break;
        if (!w.random_flip(rng)) {
            if (!w.random_plus(rng)) break;  // no move at all: walk is stuck
            if (!w.random_flip(rng)) break;
        }
        it++;
        int r = w.rank();
        if (r < local_best) {
            if (improved(r)) break;
        } else if (p.plus_interval > 0 && r <= local_best + p.plus_cap) {
            // adaptive schedule: raise the plus frequency the longer the walk
            // has gone without an improvement, lower it again on progress
            uint64_t stag = it - last_improve;
            uint64_t interval = p.plus_interval;
            if (stag > 80 * p.plus_interval)
                interval = std::max<uint64_t>(p.plus_interval / 30, 1);
            else if (stag > 20 * p.plus_interval)
                interval = std::max<uint64_t>(p.plus_interval / 10, 1);
            else if (stag > 5 * p.plus_interval)
                interval = std::max<uint64_t>(p.plus_interval / 3, 1);
            if (rng() % interval == 0) w.random_plus(rng);
        }
        if constexpr (std::is_same_v<Walker, FlipWalker>) {
            if (p.full_reduction_interval > 0 && it % p.full_reduction_interval == 0) {
                Scheme cur = w.scheme();
                if (reduce_full(cur) > 0) {
                    w = Walker(std::move(cur));
                    if (w.rank() < local_best && improved(w.rank())) break;
                }
            }
        }
        if (p.debug_verify_interval > 0 && it % p.debug_verify_interval == 0 &&
            !verify(w.scheme()))
            throw std::runtime_error("sum invariant violated at iteration " + std::to_string(it));
        if (p.progress && it % 65536 == 0) {
            std::lock_guard<std::mutex> lk(shared.io);
            p.progress({walker_id, it, w.rank(), local_best, elapsed()});
        }
    }

    SearchReport rep;
    rep.best = std::move(best_scheme);
    rep.best_rank = local_best;
    rep.iterations_used = it;
    rep.wall_time_s = elapsed();
    rep.walker_id = walker_id;
    rep.seed = p.seed;
    return rep;
}

SearchReport run_walk(const Scheme& start, const SearchParams& p, int walker_id, int restart,
                      SharedState& shared) {
    if (start.mode == Mode::commutative)
        return walk_once<CommWalker>(start, p, walker_id, restart, shared);
    return walk_once<FlipWalker>(start, p, walker_id, restart, shared);
}

BitVec remap_bits(const BitVec& v, const std::vector<uint32_t>& map, uint32_t dim) {
    BitVec out(dim);
    v.for_each_set([&](uint32_t i) { out.set(map[i]); });
    return out;
}

}  // namespace

SearchParams default_params(Mode mode) {
    // defaults picked by measuring success rates on the small known targets;
    // the quotient walk wants rare, tightly capped plus kicks, since frequent
    // ones ratchet the rank up to the cap and stall the descent
    SearchParams p;
    if (mode == Mode::commutative) {
        p.plus_interval = 100'000;
        p.plus_cap = 4;
    } else {
        p.plus_interval = 3'000;
        p.plus_cap = 6;
    }
    return p;
}

SearchReport adaptive_search(const Scheme& start, const SearchParams& params) {
    if (!verify(start))
        throw std::invalid_argument("adaptive_search: start scheme does not verify");
    SharedState shared;
    return run_walk(start, params, 0, 0, shared);
}

SearchReport parallel_search(const Scheme& start, const SearchParams& params) {
    if (!verify(start))
        throw std::invalid_argument("parallel_search: start scheme does not verify");
    auto t0 = std::chrono::steady_clock::now();
    auto total_elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    int walkers = std::max(params.walkers, 1);
    int restarts = std::max(params.restarts, 1);

    SharedState shared;
    std::mutex merge;
    uint64_t total_iterations = 0;
    struct Entry {
        int rank, walker_id, restart;
        SearchReport rep;
    };
    std::vector<Entry> entries;

    auto run_stream = [&](int wid) {
        for (int r = 0; r < restarts; r++) {
            if (params.interrupt && params.interrupt->load(std::memory_order_relaxed)) break;
            if (params.target_rank > 0 &&
                shared.best_rank.load(std::memory_order_relaxed) <= params.target_rank)
                break;
            SearchReport rep = run_walk(start, params, wid, r, shared);
            std::lock_guard<std::mutex> lk(merge);
            total_iterations += rep.iterations_used;
            entries.push_back({rep.best_rank, wid, r, std::move(rep)});
        }
    };

    if (walkers == 1) {
        run_stream(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<size_t>(walkers));
        for (int wid = 0; wid < walkers; wid++) threads.emplace_back(run_stream, wid);
        for (auto& t : threads) t.join();
    }

    if (entries.empty()) {  // interrupted before any walk began
        SearchReport rep;
        rep.best = start;
        rep.best_rank = static_cast<int>(start.terms.size());
        rep.seed = params.seed;
        rep.wall_time_s = total_elapsed();
        return rep;
    }
    auto winner =
        std::min_element(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return std::tie(a.rank, a.walker_id, a.restart) <
                   std::tie(b.rank, b.walker_id, b.restart);
        });
    SearchReport rep = std::move(winner->rep);
    rep.iterations_used = total_iterations;
    rep.wall_time_s = total_elapsed();
    return rep;
}

SearchReport combined_search(Dims dims, const SearchParams& marakov_params,
                             const SearchParams& comm_params) {
    auto t0 = std::chrono::steady_clock::now();
    SearchReport m = parallel_search(standard_scheme(Mode::marakov, dims), marakov_params);
    Scheme comm_start = marakov_to_commutative(m.best);
    SearchReport c = parallel_search(comm_start, comm_params);
    c.iterations_used += m.iterations_used;
    c.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

Scheme extend_scheme(const Scheme& s, Axis axis) {
    if (!verify(s)) throw std::invalid_argument("extend_scheme: scheme does not verify");
    Dims d = s.dims;
    Dims d2 = d;
    switch (axis) {
        case Axis::l: d2.l++; break;
        case Axis::m: d2.m++; break;
        case Axis::n: d2.n++; break;
    }
    if (!dims_valid(d2))
        throw std::invalid_argument("extend_scheme: dimensions exceed the supported range");
    SlotDims sdn = slot_dims(s.mode, d2);
    SlotDims sdo = slot_dims(s.mode, d);
    bool comm = s.mode == Mode::commutative;
    std::vector<uint32_t> m1(sdo.s1), m2(comm ? 0 : sdo.s2), m3(sdo.s3);
    auto place = [&](SlotCoord o, SlotCoord nn) {
        if (comm)
            m1[o.index] = nn.index;  // both factor slots address the same space
        else
            (o.slot == 0 ? m1 : m2)[o.index] = nn.index;
    };
    for (int i = 1; i <= d.l; i++)
        for (int j = 1; j <= d.m; j++) place(a_coord(s.mode, d, i, j), a_coord(s.mode, d2, i, j));
    for (int j = 1; j <= d.m; j++)
        for (int k = 1; k <= d.n; k++) place(b_coord(s.mode, d, j, k), b_coord(s.mode, d2, j, k));
    for (int k = 1; k <= d.n; k++)
        for (int i = 1; i <= d.l; i++) m3[c_index(d, k, i)] = c_index(d2, k, i);

    Scheme out{s.mode, d2, {}};
    out.terms.reserve(s.terms.size() + static_cast<size_t>(d2.l) * d2.m * d2.n);
    for (const Term& t : s.terms)
        out.terms.push_back({remap_bits(t.u, m1, sdn.s1),
                             remap_bits(t.v, comm ? m1 : m2, comm ? sdn.s1 : sdn.s2),
                             remap_bits(t.w, m3, sdn.s3)});
    switch (axis) {
        case Axis::l:
            for (int j = 1; j <= d2.m; j++)
                for (int k = 1; k <= d2.n; k++)
                    out.terms.push_back(standard_term(s.mode, d2, d2.l, j, k));
            break;
        case Axis::m:
            for (int i = 1; i <= d2.l; i++)
                for (int k = 1; k <= d2.n; k++)
                    out.terms.push_back(standard_term(s.mode, d2, i, d2.m, k));
            break;
        case Axis::n:
            for (int i = 1; i <= d2.l; i++)
                for (int j = 1; j <= d2.m; j++)
                    out.terms.push_back(standard_term(s.mode, d2, i, j, d2.n));
            break;
    }
    if (!verify(out)) throw std::runtime_error("internal error: extended scheme does not verify");
    return out;
}

Scheme marakov_to_commutative(const Scheme& s) {
    if (s.mode != Mode::marakov)
        throw std::invalid_argument("marakov_to_commutative: input must be a marakov scheme");
    if (!verify(s))
        throw std::invalid_argument("marakov_to_commutative: scheme does not verify");
    Dims d = s.dims;
    SlotDims sdm = slot_dims(Mode::marakov, d);
    SlotDims sdc = slot_dims(Mode::commutative, d);
    std::vector<uint32_t> map0(sdm.s1), map1(sdm.s2);
    for (int i = 1; i <= d.l; i++)
        for (int j = 1; j <= d.m; j++) {
            SlotCoord mc = a_coord(Mode::marakov, d, i, j);
            (mc.slot == 0 ? map0 : map1)[mc.index] =
                a_coord(Mode::commutative, d, i, j).index;
        }
    for (int j = 1; j <= d.m; j++)
        for (int k = 1; k <= d.n; k++) {
            SlotCoord mc = b_coord(Mode::marakov, d, j, k);
            (mc.slot == 0 ? map0 : map1)[mc.index] =
                b_coord(Mode::commutative, d, j, k).index;
        }
    Scheme out{Mode::commutative, d, {}};
    out.terms.reserve(s.terms.size());
    for (const Term& t : s.terms)
        out.terms.push_back(
            canonical_comm({remap_bits(t.u, map0, sdc.s1), remap_bits(t.v, map1, sdc.s1), t.w}));
    if (!verify(out))
        throw std::runtime_error("internal error: converted scheme does not verify");
    return out;
}

}  // namespace flipsearch
