#include "flipsearch/bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace flipsearch {

int rosowski_bound(int l, int m, int n) {
    if (l < 1 || m < 1 || n < 1)
        throw std::invalid_argument("rosowski_bound: dimensions must be positive");
    int base = m * (l * n + l + n - 1);
    if (m % 2 == 1 && n % 2 == 0) return (base + l - 1) / 2;
    return base / 2;
}

int improved_bound(int l, int m, int n) {
    return std::min(rosowski_bound(l, m, n), rosowski_bound(n, m, l));
}

std::vector<BoundRow> results_table(int max) {
    if (max < 2) throw std::invalid_argument("results_table: max must be at least 2");
    std::vector<BoundRow> rows;
    for (int l = 2; l <= max; l++)
        for (int m = 2; m <= max; m++)
            for (int n = l; n <= max; n++)
                rows.push_back({l, m, n, rosowski_bound(l, m, n), improved_bound(l, m, n)});
    return rows;
}

}  // namespace flipsearch
