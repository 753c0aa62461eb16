#include <cmath>
#include <limits>
#include <string>

#include "sfas/estimators.hpp"

namespace sfas {

// Shortest augmenting path Hungarian method with row/column potentials, O(n^3).
std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost) {
    if (cost.rows() != cost.cols()) {
        throw InputError("solve_assignment: cost matrix must be square");
    }
    const auto n = static_cast<std::size_t>(cost.rows());
    if (n == 0) {
        return {};
    }
    if (!cost.allFinite()) {
        throw InputError("solve_assignment: cost matrix has non-finite entries");
    }
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based arrays; column 0 is a virtual start column.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        owner[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = owner[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = cost(static_cast<Eigen::Index>(i0 - 1),
                                        static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
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
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> result(n);
    for (std::size_t j = 1; j <= n; ++j) {
        result[owner[j] - 1] = j - 1;
    }
    return result;
}

}  // namespace sfas
