#include "gnskit/simplex.hpp"

#include <string>

#include "gnskit/error.hpp"

namespace gnskit {

LpSolution maximize_exact(int rows, const std::vector<SparseColumn>& columns, const std::vector<Rational>& c,
                          const std::vector<Rational>& b) {
    const std::size_t m = static_cast<std::size_t>(rows);
    const std::size_t n = columns.size();
    if (c.size() != n) throw InputError("objective length does not match column count");
    if (b.size() != m) throw InputError("right-hand side length does not match row count");
    for (std::size_t i = 0; i < m; ++i)
        if (sgn(b[i]) < 0) throw InputError("negative right-hand side in row " + std::to_string(i));
    for (const auto& col : columns)
        for (const auto& [row, value] : col)
            if (row < 0 || static_cast<std::size_t>(row) >= m) throw InputError("column entry outside row range");

    // variables 0..n-1 are structural, n..n+m-1 the slacks
    std::vector<std::size_t> basis(m);
    std::vector<long> position(n + m, -1);
    for (std::size_t i = 0; i < m; ++i) {
        basis[i] = n + i;
        position[n + i] = static_cast<long>(i);
    }
    std::vector<std::vector<Rational>> inv(m, std::vector<Rational>(m, 0));
    for (std::size_t i = 0; i < m; ++i) inv[i][i] = 1;
    std::vector<Rational> xb = b;
    auto cost = [&](std::size_t var) -> Rational { return var < n ? c[var] : Rational(0); };

    std::vector<Rational> y(m);
    std::vector<Rational> d(m);
    std::size_t pivots = 0;
    for (;;) {
        for (std::size_t i = 0; i < m; ++i) {
            y[i] = 0;
            for (std::size_t r = 0; r < m; ++r)
                if (sgn(inv[r][i]) != 0) y[i] += cost(basis[r]) * inv[r][i];
        }
        std::size_t entering = n + m;
        for (std::size_t j = 0; j < n + m && entering == n + m; ++j) {
            if (position[j] >= 0) continue;
            Rational reduced = cost(j);
            if (j < n) {
                for (const auto& [row, value] : columns[j]) reduced -= y[static_cast<std::size_t>(row)] * value;
            } else {
                reduced -= y[j - n];
            }
            if (sgn(reduced) > 0) entering = j;
        }
        if (entering == n + m) break;

        for (std::size_t r = 0; r < m; ++r) {
            d[r] = 0;
            if (entering < n) {
                for (const auto& [row, value] : columns[entering]) d[r] += inv[r][static_cast<std::size_t>(row)] * value;
            } else {
                d[r] = inv[r][entering - n];
            }
        }
        std::size_t leave = m;
        Rational best_ratio;
        for (std::size_t r = 0; r < m; ++r) {
            if (sgn(d[r]) <= 0) continue;
            Rational ratio = xb[r] / d[r];
            if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leave])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        if (leave == m) throw InputError("LP is unbounded");

        const Rational pivot = d[leave];
        for (std::size_t i = 0; i < m; ++i) inv[leave][i] /= pivot;
        xb[leave] /= pivot;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave || sgn(d[r]) == 0) continue;
            const Rational factor = d[r];
            for (std::size_t i = 0; i < m; ++i)
                if (sgn(inv[leave][i]) != 0) inv[r][i] -= factor * inv[leave][i];
            xb[r] -= factor * xb[leave];
        }
        position[basis[leave]] = -1;
        basis[leave] = entering;
        position[entering] = static_cast<long>(leave);
        ++pivots;
    }

    LpSolution solution;
    solution.primal.assign(n, Rational(0));
    solution.objective = 0;
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] < n) {
            solution.primal[basis[r]] = xb[r];
            solution.objective += c[basis[r]] * xb[r];
        }
    solution.dual = y;
    solution.pivots = pivots;
    return solution;
}

}  // namespace gnskit
