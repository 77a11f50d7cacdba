// Original form of each schedule ledger inequality in long double, in ledger
// order, for p small enough that every quantity is exact.
#pragma once

#include "sl2/nash_moser.hpp"

#include <vector>

namespace sl2::testing {

inline std::vector<bool> float_ledger(const ScheduleParams& s) {
    using ld = long double;
    const ld p = s.p, xa = s.x_a, ya = s.y_a, xb = s.x_b, yb = s.y_b, xc = s.x_c, yc = s.y_c, al = s.alpha;
    return {13 * p * p + 2 * p - 1 < al / 2,
            24 * p * p - 9 * p - 1 < al / 2,
            12 * p * p + 13 * p - 1 < al / 2,
            -132 * p * p < -al * 5 / 2,
            -yc + 2 * p * p < -al * 5 / 2,
            yc > ya && 12 * p * p + 2 * al * (yb - ya + p - 1) / (yc - ya) < al * 3 / 2,
            4 * p < xb - xa,
            (p - 1) * xa <= ya,
            22 * p <= ya,
            xa + p == xc,
            ya + (p - 1) * (xb - p + 1) - 22 * p <= yb,
            2 * p + (p - 1) * (xb - p + 1) <= yb,
            3 * p + 1 <= ya,
            4 * p * (p - 1) + 3 < al};
}

} // namespace sl2::testing
