#pragma once

#include <functional>
#include <vector>

#include "elicit/types.hpp"

namespace elicit {

/// Lattice over the simplex with spacing 1/denom: all distributions whose
/// entries are multiples of 1/denom. Visits points in lexicographic order.
inline void for_each_grid_point(int n, int denom,
                                const std::function<void(const Distribution&)>& fn) {
    std::vector<int> counts(n, 0);
    Vec p(n);
    std::function<void(int, int)> rec = [&](int coord, int remaining) {
        if (coord == n - 1) {
            counts[coord] = remaining;
            for (int i = 0; i < n; ++i) p[i] = static_cast<double>(counts[i]) / denom;
            fn(Distribution(p));
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[coord] = c;
            rec(coord + 1, remaining - c);
        }
    };
    rec(0, denom);
}

inline std::vector<Distribution> simplex_grid(int n, int denom) {
    std::vector<Distribution> pts;
    for_each_grid_point(n, denom, [&](const Distribution& p) { pts.push_back(p); });
    return pts;
}

}  // namespace elicit
