#include "diffusia/optim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace diffusia {

namespace {

double clamped_sse(const ResidualFn& fn, const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    if (!fn(x, r) || !r.allFinite()) return std::numeric_limits<double>::infinity();
    return r.squaredNorm();
}

} // namespace

Eigen::MatrixXd forward_difference_jacobian(const ResidualFn& fn, const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& r0,
                                            const LeastSquaresOptions& options) {
    const Eigen::Index n = r0.size();
    const Eigen::Index k = x.size();
    Eigen::MatrixXd jac(n, k);
    Eigen::VectorXd r(n);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double h =
            std::max(options.fd_relative_step * std::fabs(x[j]), options.fd_absolute_floor);
        Eigen::VectorXd xp = x;
        xp[j] = x[j] + h;
        if (fn(xp, r) && r.allFinite()) {
            jac.col(j) = (r - r0) / h;
            continue;
        }
        xp[j] = x[j] - h;
        if (fn(xp, r) && r.allFinite()) {
            jac.col(j) = (r0 - r) / h;
            continue;
        }
        jac.col(j).setZero();
    }
    return jac;
}

LeastSquaresResult minimize_least_squares(const ResidualFn& fn, Eigen::VectorXd x0,
                                          const Eigen::VectorXd& lower,
                                          const Eigen::VectorXd& upper,
                                          const LeastSquaresOptions& options) {
    const Eigen::Index k = x0.size();
    if (lower.size() != k || upper.size() != k) {
        throw std::invalid_argument("minimize_least_squares: bounds size mismatch");
    }

    Eigen::VectorXd x = x0.cwiseMax(lower).cwiseMin(upper);
    Eigen::VectorXd r;
    {
        // Probe once to size the residual vector.
        Eigen::VectorXd probe(0);
        if (!fn(x, probe)) {
            throw std::invalid_argument("minimize_least_squares: initial point infeasible");
        }
        r = probe;
    }
    double sse = r.squaredNorm();
    if (!std::isfinite(sse)) {
        throw std::invalid_argument("minimize_least_squares: initial residuals not finite");
    }

    LeastSquaresResult result;
    result.sse_trace.push_back(sse);

    double lambda = options.lambda_init;
    int iteration = 0;
    bool converged = false;
    Eigen::MatrixXd jtj;
    bool jtj_fresh = false;

    Eigen::VectorXd r_try(r.size());
    while (iteration < options.max_iterations) {
        ++iteration;

        const Eigen::MatrixXd jac = forward_difference_jacobian(fn, x, r, options);
        jtj = jac.transpose() * jac;
        jtj_fresh = true;
        const Eigen::VectorXd gradient = jac.transpose() * r;

        // Marquardt scaling; guard zero diagonal entries (a parameter with no
        // local effect) so the damped system stays solvable.
        Eigen::VectorXd damping = jtj.diagonal();
        const double diag_floor = std::max(damping.maxCoeff() * 1e-14, 1e-300);
        damping = damping.cwiseMax(diag_floor);

        bool accepted = false;
        bool pinned = false;
        while (lambda <= options.lambda_max) {
            Eigen::MatrixXd system = jtj;
            system.diagonal() += lambda * damping;
            const Eigen::VectorXd step = system.ldlt().solve(-gradient);
            const Eigen::VectorXd x_try = (x + step).cwiseMax(lower).cwiseMin(upper);
            if ((x_try - x).cwiseAbs().maxCoeff() == 0.0) {
                // Zero effective step: stationary or pinned against the bounds
                // at working precision.
                pinned = true;
                break;
            }
            const double sse_try = clamped_sse(fn, x_try, r_try);
            if (sse_try < sse) {
                const double rel_change = (sse - sse_try) / std::max(sse, 1e-300);
                x = x_try;
                r = r_try;
                sse = sse_try;
                result.sse_trace.push_back(sse);
                lambda = std::max(lambda / options.lambda_down, 1e-300);
                accepted = true;
                jtj_fresh = false;
                if (rel_change < options.tolerance) converged = true;
                break;
            }
            lambda *= options.lambda_up;
        }

        if (pinned) {
            converged = true;
            break;
        }
        if (!accepted) {
            // No decrease possible at maximum damping: local minimum at
            // working precision, unless nothing was ever accepted.
            converged = result.sse_trace.size() > 1 || sse == 0.0;
            break;
        }
        if (converged) break;
    }

    if (!jtj_fresh) {
        // Refresh J^T J at the final iterate for covariance estimation.
        const Eigen::MatrixXd jac = forward_difference_jacobian(fn, x, r, options);
        jtj = jac.transpose() * jac;
    }

    result.x = std::move(x);
    result.sse = sse;
    result.iterations = iteration;
    result.converged = converged;
    result.jtj = std::move(jtj);
    result.jtj_valid = true;
    return result;
}

} // namespace diffusia
