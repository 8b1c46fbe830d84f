#pragma once

// Small dense LP solver for the candidate-packing relaxation:
//   maximize c.x  subject to  A.x <= b,  x >= 0,  with b >= 0.
// Primal simplex with Bland's anti-cycling rule; fully deterministic.

#include <Eigen/Dense>

#include <vector>

namespace msr {

inline constexpr double kLpTolerance = 1e-7;

enum class LpStatus { optimal, unbounded, infeasible };

struct LpProblem {
    Eigen::VectorXd c;  // length N
    Eigen::MatrixXd A;  // M x N
    Eigen::VectorXd b;  // length M, all >= 0

    int num_vars() const { return static_cast<int>(c.size()); }
    int num_rows() const { return static_cast<int>(b.size()); }
};

struct LpSolution {
    Eigen::VectorXd x;
    double value = 0.0;
    LpStatus status = LpStatus::optimal;
};

LpSolution solve_lp(const LpProblem& problem);

// Residual check used by tests and the local-ratio selector: true when x >= 0
// and A.x <= b within kLpTolerance.
bool lp_feasible(const LpProblem& problem, const Eigen::VectorXd& x,
                 double tolerance = kLpTolerance);

}  // namespace msr
