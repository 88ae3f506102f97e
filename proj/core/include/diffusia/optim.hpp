#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace diffusia {

/**
 * Residual evaluator for least squares: resizes and fills `out`, and returns
 * false when the point is infeasible (model domain error), which the
 * optimizer treats as an automatically rejected step.
 */
using ResidualFn = std::function<bool(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LeastSquaresOptions {
    double lambda_init = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 10.0;
    double lambda_max = 1e14;
    double tolerance = 1e-10;   // relative SSE decrease on an accepted step
    int max_iterations = 500;
    double fd_relative_step = 1e-6;
    double fd_absolute_floor = 1e-10;
};

struct LeastSquaresResult {
    Eigen::VectorXd x;
    double sse = 0.0;
    int iterations = 0;
    bool converged = false;
    Eigen::MatrixXd jtj;          // J^T J at the final iterate
    bool jtj_valid = false;
    std::vector<double> sse_trace; // SSE after every accepted step
};

/**
 * Forward-difference Jacobian with per-parameter step
 * h_j = max(fd_relative_step * |x_j|, fd_absolute_floor). Falls back to a
 * backward step for a coordinate whose forward point is infeasible.
 */
Eigen::MatrixXd forward_difference_jacobian(const ResidualFn& fn, const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& r0,
                                            const LeastSquaresOptions& options);

/**
 * Levenberg-Marquardt minimization of ||r(x)||^2 with Marquardt diagonal
 * damping (J^T J + lambda diag(J^T J)) and projected box steps: candidate
 * points are clamped to [lower, upper] before evaluation. Accepted steps
 * never increase the SSE. Bounds may be +-infinity.
 */
LeastSquaresResult minimize_least_squares(const ResidualFn& fn, Eigen::VectorXd x0,
                                          const Eigen::VectorXd& lower,
                                          const Eigen::VectorXd& upper,
                                          const LeastSquaresOptions& options = {});

} // namespace diffusia
