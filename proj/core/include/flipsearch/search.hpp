#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>

#include "flipsearch/tensors.hpp"

namespace flipsearch {

struct ProgressRecord {
    int walker_id = 0;
    uint64_t iteration = 0;
    int current_rank = 0;
    int best_rank = 0;  // best of the reporting walk
    double elapsed_s = 0.0;
};

struct SearchParams {
    uint64_t max_iterations = 1'000'000;
    uint64_t plus_interval = 3'000;  // expected moves between plus splits
    int plus_cap = 6;                // no plus once rank exceeds walk best + cap
    int target_rank = 0;              // stop at or below this rank (0 = none)
    uint64_t seed = 0;
    int restarts = 1;  // walks per walker, all from the same start
    int walkers = 1;   // concurrent walkers
    uint64_t full_reduction_interval = 0;  // 0 = never
    uint64_t debug_verify_interval = 0;    // 0 = never
    std::string checkpoint_path;           // best scheme written on improvement
    // called on improvements and periodically; serialized across walkers
    std::function<void(const ProgressRecord&)> progress;
    const std::atomic<bool>* interrupt = nullptr;
};

// mode-tuned defaults (commutative walks split more often with a wider cap)
SearchParams default_params(Mode mode);

struct SearchReport {
    Scheme best;
    int best_rank = 0;
    uint64_t iterations_used = 0;  // summed over all walks
    double wall_time_s = 0.0;
    int walker_id = 0;  // walker that found the best scheme
    uint64_t seed = 0;
};

// one random walk from a verified start scheme: flip when possible, split
// when stuck or occasionally at random, keep the best verified scheme seen
SearchReport adaptive_search(const Scheme& start, const SearchParams& params);

// walkers x restarts walks sharing an atomic best rank for early target
// stops; ties between walks break toward the lower walker id, then the
// earlier restart.  A single walker runs inline and is bit-reproducible for
// a fixed seed.
SearchReport parallel_search(const Scheme& start, const SearchParams& params);

// marakov-stage search from the standard start, conversion to the
// commutative quotient, then a commutative-stage search
SearchReport combined_search(Dims dims, const SearchParams& marakov_params,
                             const SearchParams& comm_params);

enum class Axis { l, m, n };

// re-embed into dimensions with one axis grown by one and append the
// standard terms of the new slice; preserves verification
Scheme extend_scheme(const Scheme& s, Axis axis);

// map a verified marakov scheme onto the commutative quotient of the same
// dimensions; term count is preserved
Scheme marakov_to_commutative(const Scheme& s);

}  // namespace flipsearch
