#include <algorithm>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "flipsearch/moves.hpp"
#include "helpers.hpp"

using namespace flipsearch;

TEST_CASE("find_flips on the standard 2x2x2 start") {
    Scheme s = standard_scheme(Mode::standard, {2, 2, 2});
    auto flips = find_flips(s);
    CHECK(flips.size() == 48);  // 12 sharing pairs, 4 oriented candidates each

    // candidates come in within-slot sharing groups; spot-check validity
    for (const auto& f : flips) {
        CHECK(f.idx1 != f.idx2);
        CHECK(term_slot(s.terms[f.idx1], f.shared_slot) ==
              term_slot(s.terms[f.idx2], f.shared_slot));
        CHECK(f.recv_slot != f.shared_slot);
    }
}

TEST_CASE("apply_flip preserves the represented tensor") {
    for (Mode mode : {Mode::standard, Mode::marakov}) {
        Scheme s = standard_scheme(mode, {2, 2, 2});
        DenseTensor target = DenseTensor::target(mode, s.dims);
        std::mt19937_64 rng(3);
        for (int step = 0; step < 300; step++) {
            auto flips = find_flips(s);
            if (flips.empty()) break;
            size_t old_rank = s.rank();
            apply_flip(s, flips[rng() % flips.size()]);
            CHECK(s.rank() == old_rank);  // a flip never changes the term count
            REQUIRE(embed_sum(s) == target);
        }
    }
}

TEST_CASE("apply_plus adds one term and preserves the tensor") {
    Scheme base = standard_scheme(Mode::standard, {2, 2, 2});
    DenseTensor target = DenseTensor::target(Mode::standard, base.dims);
    for (int variant = 0; variant < 3; variant++) {
        Scheme s = base;
        apply_plus(s, 0, 5, variant);
        CHECK(s.rank() == base.rank() + 1);
        CHECK(embed_sum(s) == target);
    }
}

TEST_CASE("reduce_trivial removes zero and duplicate terms") {
    Scheme s = standard_scheme(Mode::standard, {2, 2, 2});
    size_t base = s.rank();

    // a term with a zero factor contributes nothing
    Scheme z = s;
    z.terms.push_back({BitVec(4), BitVec::parse("1010"), BitVec::parse("0101")});
    CHECK(reduce_trivial(z) == 1);
    CHECK(z.rank() == base);
    CHECK(verify(z));

    // duplicated terms cancel pairwise over GF(2)
    Scheme d = s;
    d.terms.push_back(d.terms[2]);
    d.terms.push_back(d.terms[2]);
    CHECK(reduce_trivial(d) == 2);
    CHECK(d.rank() == base);
    CHECK(verify(d));

    // triple extra copy: four total, all cancel
    Scheme t = s;
    t.terms.push_back(t.terms[1]);
    t.terms.push_back(t.terms[1]);
    t.terms.push_back(t.terms[1]);
    CHECK(reduce_trivial(t) == 4);
    CHECK(t.rank() == base - 1);
}

TEST_CASE("reduce_full eliminates linearly dependent groups") {
    Dims d{2, 2, 2};
    Scheme s = standard_scheme(Mode::standard, d);
    DenseTensor before = embed_sum(s);

    // three terms sharing u whose w values are linearly dependent
    BitVec u = BitVec::parse("1100");
    BitVec v1 = BitVec::parse("1000"), v2 = BitVec::parse("0100"), v3 = BitVec::parse("0010");
    BitVec w1 = BitVec::parse("1010"), w2 = BitVec::parse("0110");
    s.terms.push_back({u, v1, w1});
    s.terms.push_back({u, v2, w2});
    s.terms.push_back({u, v3, w1 ^ w2});
    DenseTensor padded = embed_sum(s);

    Scheme r = s;
    int removed = reduce_full(r);
    CHECK(removed >= 1);
    CHECK(r.rank() < s.rank());
    CHECK(embed_sum(r) == padded);

    // reduce_full on a random walked scheme never raises the rank
    Scheme walked = testutil::random_walk_scheme(Mode::standard, d, 400, 17);
    DenseTensor sum = embed_sum(walked);
    Scheme w = walked;
    reduce_full(w);
    CHECK(w.rank() <= walked.rank());
    CHECK(embed_sum(w) == sum);
}

TEST_CASE("walker moves keep the scheme verified") {
    for (Mode mode : {Mode::standard, Mode::marakov}) {
        for (Dims d : {Dims{2, 2, 2}, Dims{2, 3, 2}}) {
            DenseTensor target = DenseTensor::target(mode, d);
            FlipWalker w(standard_scheme(mode, d));
            std::mt19937_64 rng(1234);
            for (int step = 0; step < 2000; step++) {
                if (!w.random_flip(rng)) w.random_plus(rng);
                if (step % 200 == 0) {
                    REQUIRE(embed_sum(w.scheme()) == target);
                    REQUIRE(w.check_consistency());
                }
            }
            CHECK(embed_sum(w.scheme()) == target);
            CHECK(w.check_consistency());
            CHECK(verify(w.scheme()));
        }
    }
}

TEST_CASE("walker pair index matches enumeration") {
    Scheme s = standard_scheme(Mode::standard, {2, 2, 2});
    FlipWalker w(s);

    // collect unordered sharing pairs per slot from find_flips
    std::set<std::tuple<int, uint32_t, uint32_t>> from_enum;
    for (const auto& f : find_flips(s)) {
        uint32_t a = std::min(f.idx1, f.idx2), b = std::max(f.idx1, f.idx2);
        from_enum.insert({f.shared_slot, a, b});
    }
    size_t walker_pairs = 0;
    for (int slot = 0; slot < 3; slot++) {
        auto pairs = w.candidate_pairs(slot);
        walker_pairs += pairs.size();
        for (auto [a, b] : pairs) CHECK(from_enum.count({slot, a, b}) == 1);
    }
    CHECK(walker_pairs == from_enum.size());
    CHECK(walker_pairs == 12);
    CHECK(w.flip_pair_count() == 12);
}

TEST_CASE("walker stays in sync with enumeration after random moves") {
    FlipWalker w(standard_scheme(Mode::standard, {2, 3, 2}));
    std::mt19937_64 rng(77);
    for (int step = 0; step < 500; step++)
        if (!w.random_flip(rng)) w.random_plus(rng);

    std::set<std::tuple<int, uint32_t, uint32_t>> from_enum;
    for (const auto& f : find_flips(w.scheme())) {
        uint32_t a = std::min(f.idx1, f.idx2), b = std::max(f.idx1, f.idx2);
        from_enum.insert({f.shared_slot, a, b});
    }
    size_t walker_pairs = 0;
    for (int slot = 0; slot < 3; slot++) {
        auto pairs = w.candidate_pairs(slot);
        walker_pairs += pairs.size();
        for (auto [a, b] : pairs) CHECK(from_enum.count({slot, a, b}) == 1);
    }
    CHECK(walker_pairs == from_enum.size());
}

TEST_CASE("walker trajectories are deterministic per seed") {
    auto run = [](uint64_t seed) {
        FlipWalker w(standard_scheme(Mode::marakov, {2, 3, 2}));
        std::mt19937_64 rng(seed);
        for (int step = 0; step < 1500; step++)
            if (!w.random_flip(rng)) w.random_plus(rng);
        return w.scheme();
    };
    CHECK(run(99) == run(99));
    CHECK(run(99) != run(100));
}

TEST_CASE("walker rejects commutative schemes") {
    CHECK_THROWS_AS(FlipWalker(standard_scheme(Mode::commutative, {2, 2, 2})),
                    std::invalid_argument);
    Scheme s = standard_scheme(Mode::commutative, {2, 2, 2});
    CHECK_THROWS_AS((void)find_flips(s), std::invalid_argument);
}
