#include "msr/lp.hpp"

#include "msr/core.hpp"

#include <limits>

namespace msr {

// Tableau simplex over the standard-form problem with slack variables.
// Columns 0..N-1 are structural, N..N+M-1 slacks.  The initial basis is the
// slack basis, feasible because b >= 0.
LpSolution solve_lp(const LpProblem& problem) {
    const int n = problem.num_vars();
    const int m = problem.num_rows();
    if (problem.A.rows() != m || problem.A.cols() != n)
        throw input_error("LP dimensions disagree");
    for (int i = 0; i < m; ++i)
        if (problem.b(i) < 0.0)
            throw input_error("LP right-hand side must be non-negative");

    LpSolution sol;
    sol.x = Eigen::VectorXd::Zero(n);
    if (n == 0) return sol;
    if (m == 0) {
        // No constraints: any variable with positive cost is unbounded.
        for (int j = 0; j < n; ++j)
            if (problem.c(j) > kLpTolerance) {
                sol.status = LpStatus::unbounded;
                return sol;
            }
        return sol;
    }

    const int total = n + m;
    Eigen::MatrixXd tab(m, total + 1);
    tab.setZero();
    tab.block(0, 0, m, n) = problem.A;
    tab.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
    tab.col(total) = problem.b;

    Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
    cost.head(n) = problem.c;

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    // Reduced costs start at `cost` (slack basis has zero objective rows).
    Eigen::VectorXd reduced = cost;
    double objective = 0.0;

    // Bland's rule guarantees termination; the cap is a hard stop on bugs.
    const long max_iterations = 50L * (total + 1) * (m + 1) + 1000;
    for (long iter = 0; iter <= max_iterations; ++iter) {
        if (iter == max_iterations)
            throw internal_error("simplex failed to terminate");
        // Bland: entering = smallest index with positive reduced cost.
        int enter = -1;
        for (int j = 0; j < total; ++j)
            if (reduced(j) > kLpTolerance) {
                enter = j;
                break;
            }
        if (enter < 0) break;  // optimal

        // Ratio test; Bland ties broken by smallest basis variable index.
        int leave_row = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            const double a = tab(i, enter);
            if (a > kLpTolerance) {
                const double ratio = tab(i, total) / a;
                if (ratio < best_ratio - kLpTolerance ||
                    (ratio < best_ratio + kLpTolerance &&
                     (leave_row < 0 || basis[i] < basis[leave_row]))) {
                    best_ratio = ratio;
                    leave_row = i;
                }
            }
        }
        if (leave_row < 0) {
            sol.status = LpStatus::unbounded;
            return sol;
        }

        // Pivot.
        const double pivot = tab(leave_row, enter);
        tab.row(leave_row) /= pivot;
        for (int i = 0; i < m; ++i) {
            if (i == leave_row) continue;
            const double factor = tab(i, enter);
            if (factor != 0.0) tab.row(i) -= factor * tab.row(leave_row);
        }
        const double rc = reduced(enter);
        reduced -= rc * tab.row(leave_row).head(total).transpose();
        objective += rc * tab(leave_row, total);
        basis[leave_row] = enter;
    }

    for (int i = 0; i < m; ++i)
        if (basis[i] < n) sol.x(basis[i]) = tab(i, total);
    for (int j = 0; j < n; ++j)
        if (sol.x(j) < 0.0 && sol.x(j) > -kLpTolerance) sol.x(j) = 0.0;
    sol.value = problem.c.dot(sol.x);
    (void)objective;
    return sol;
}

bool lp_feasible(const LpProblem& problem, const Eigen::VectorXd& x,
                 double tolerance) {
    if (x.size() != problem.num_vars()) return false;
    if ((x.array() < -tolerance).any()) return false;
    if (problem.num_rows() == 0) return true;
    Eigen::VectorXd residual = problem.A * x - problem.b;
    return (residual.array() <= tolerance).all();
}

}  // namespace msr
