#include "dualwin/assignment.hpp"

#include <algorithm>
#include <limits>

#include "dualwin/error.hpp"

namespace dualwin {

Assignment solve_assignment(const Matrix<double>& cost) {
    if (cost.rows() != cost.cols()) fail(ErrorCode::invalid_argument, "solve_assignment: cost matrix must be square");
    const std::size_t n = cost.rows();
    Assignment result;
    result.column_for_row.assign(n, 0);
    if (n == 0) return result;

    // 1-based potentials u (rows) and v (columns); p[j] is the row assigned
    // to column j, column 0 is the virtual start of each augmenting path.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<double> minv(n + 1);
    std::vector<char> used(n + 1);

    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    for (std::size_t j = 1; j <= n; ++j) result.column_for_row[p[j] - 1] = j - 1;
    // Sum the chosen entries directly rather than trusting -v[0], so the
    // total is bit-identical to any other evaluation of the same pairing.
    for (std::size_t i = 0; i < n; ++i) result.total_cost += cost(i, result.column_for_row[i]);
    return result;
}

std::vector<std::size_t> assign_pairs(std::span<const RangeVelocity> a, std::span<const RangeVelocity> b) {
    if (a.size() != b.size()) fail(ErrorCode::invalid_argument, "assign_pairs: lists differ in length");
    Matrix<double> cost(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) cost(i, j) = squared_distance(a[i], b[j]);
    return solve_assignment(cost).column_for_row;
}

}  // namespace dualwin
