#include <benchmark/benchmark.h>

#include <random>

#include "flipsearch/comm_moves.hpp"
#include "flipsearch/moves.hpp"
#include "flipsearch/tensors.hpp"

using namespace flipsearch;

namespace {

void bm_flip_standard(benchmark::State& state) {
    int d = static_cast<int>(state.range(0));
    FlipWalker w(standard_scheme(Mode::standard, {d, d, d}));
    std::mt19937_64 rng(7);
    for (auto _ : state) {
        if (!w.random_flip(rng)) w.random_plus(rng);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_flip_standard)->Arg(2)->Arg(3)->Arg(4);

void bm_flip_marakov(benchmark::State& state) {
    int d = static_cast<int>(state.range(0));
    FlipWalker w(standard_scheme(Mode::marakov, {d, d, d}));
    std::mt19937_64 rng(7);
    for (auto _ : state) {
        if (!w.random_flip(rng)) w.random_plus(rng);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_flip_marakov)->Arg(2)->Arg(3)->Arg(4);

void bm_flip_commutative(benchmark::State& state) {
    int d = static_cast<int>(state.range(0));
    CommWalker w(standard_scheme(Mode::commutative, {d, d, d}));
    std::mt19937_64 rng(7);
    for (auto _ : state) {
        if (!w.random_flip(rng)) w.random_plus(rng);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_flip_commutative)->Arg(2)->Arg(3)->Arg(4);

void bm_verify(benchmark::State& state) {
    int d = static_cast<int>(state.range(0));
    Scheme s = standard_scheme(Mode::standard, {d, d, d});
    for (auto _ : state) benchmark::DoNotOptimize(verify(s));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_verify)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
