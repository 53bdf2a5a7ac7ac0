#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gnskit/rational.hpp"

namespace gnskit {

/// (row, coefficient) entries of one constraint column.
using SparseColumn = std::vector<std::pair<int, Rational>>;

struct LpSolution {
    std::vector<Rational> primal;  // one value per column
    std::vector<Rational> dual;    // shadow price per row, y >= 0
    Rational objective;
    std::size_t pivots = 0;
};

/// Exact revised simplex for max c.y s.t. A y <= b, y >= 0 with b >= 0,
/// started from the slack basis. Bland's rule on entering and leaving
/// variables, so the returned vertex is a deterministic function of the
/// input. Throws InputError if some b_i < 0 or the LP is unbounded.
LpSolution maximize_exact(int rows, const std::vector<SparseColumn>& columns, const std::vector<Rational>& c,
                          const std::vector<Rational>& b);

}  // namespace gnskit
