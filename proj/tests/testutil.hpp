#pragma once

#include "gridpath/grid.hpp"
#include "gridpath/rng.hpp"

#include <cstdint>

namespace gridpath::testutil {

// Random grid whose weights are dyadic rationals (multiples of 2^-16 in
// (0, 1]). Sums of a few hundred of these are exact in double precision, so
// comparisons between solvers, oracle and path_cost need no tolerance.
inline WeightGrid dyadic_grid(Eigen::Index k, std::uint64_t seed) {
    Rng rng(seed);
    WeightGrid g(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const std::uint64_t m = 1 + rng.uniform_int(1u << 16);
            g(i, j) = static_cast<double>(m) * 0x1.0p-16;
        }
    }
    return g;
}

}  // namespace gridpath::testutil
