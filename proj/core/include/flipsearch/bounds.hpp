#pragma once

#include <vector>

namespace flipsearch {

// upper bound on the rank of a commutative scheme from the direct
// construction; exact integer in all parity cases
int rosowski_bound(int l, int m, int n);

// minimum of the bound and its transposed counterpart
int improved_bound(int l, int m, int n);

struct BoundRow {
    int l, m, n;
    int rosowski, improved;
};

// all rows with 2 <= l <= n <= max and 2 <= m <= max, lexicographic in
// (l, m, n); throws std::invalid_argument for max < 2
std::vector<BoundRow> results_table(int max);

}  // namespace flipsearch
