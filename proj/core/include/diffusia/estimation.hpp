#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "diffusia/competition.hpp"
#include "diffusia/sales_series.hpp"

namespace diffusia {

/// Market-potential family fitted to the data.
enum class ModelKind { Cdmp, ConstantPotential, BassCurvePotential, GammaCdfPotential };

/// Scale of the least-squares objective: cumulative sales (the primary
/// regression) or monthly instantaneous sales against first differences of
/// the closed forms.
enum class FitScale { Cumulative, Instantaneous };

const char* model_name(ModelKind kind);
int parameter_count(ModelKind kind);  // 8, except 6 for the constant potential
std::vector<std::string> parameter_names(ModelKind kind);

/// Packs params into the model's flat optimization vector (potential
/// magnitudes first, then p1, q1, p2, q2, delta).
Eigen::VectorXd pack_parameters(ModelKind kind, const CompetitionParams& params);

/// Inverse of pack_parameters. Throws if the vector length does not match.
CompetitionParams unpack_parameters(ModelKind kind, const Eigen::VectorXd& x);

struct FitConfig {
    ModelKind model = ModelKind::Cdmp;
    FitScale scale = FitScale::Cumulative;
    CompetitionParams initial_values;
    double tolerance = 1e-10;
    int max_iterations = 500;
    /// Optional per-parameter box, overriding the default positivity box on
    /// the potential magnitudes.
    std::optional<Eigen::VectorXd> lower_bounds;
    std::optional<Eigen::VectorXd> upper_bounds;

    /**
     * Order-of-magnitude starting values: K (or m) = 1.5 x total observed
     * cumulative at N; pc = p1 = 1e-3; qc = q1 = q2 = 1e-2; p2 = 1e-4;
     * delta = 0; gamma variant starts at alpha0 = 0.05, alpha1 = 2.
     */
    static FitConfig defaults(ModelKind kind, const SalesSeries& data);
};

struct GoodnessOfFit {
    double r_squared;
    double rho_squared;
};

struct FitResult {
    ModelKind model = ModelKind::Cdmp;
    FitScale scale = FitScale::Cumulative;
    CompetitionParams estimates;
    Eigen::VectorXd estimate_vector;
    std::vector<std::string> param_names;
    Eigen::VectorXd std_errors;  // NaN entries when the covariance is unavailable
    std::vector<std::array<double, 2>> conf_intervals_95;
    Eigen::MatrixXd covariance;
    bool covariance_valid = false;
    double r_squared = 0.0;
    double rho_squared = 0.0;
    double sse = 0.0;
    int n_obs = 0;     // stacked, 2N
    int n_params = 0;
    int n_months = 0;  // N
    int iterations = 0;
    bool converged = false;
    std::array<std::vector<double>, 2> residuals_cumulative;     // observed - fitted
    std::array<std::vector<double>, 2> residuals_instantaneous;
};

/**
 * Ordinary nonlinear least squares on the stacked two-brand series
 * (brand 1's N observations followed by brand 2's), minimized by
 * Levenberg-Marquardt with a forward-difference Jacobian. Standard errors
 * come from s^2 (J^T J)^{-1} with s^2 = SSE / (2N - k); 95% intervals use
 * the normal quantile 1.96. R^2 is computed on the stacked cumulative
 * vectors and rho^2 on stacked instantaneous observed vs fitted, regardless
 * of the fitted scale.
 *
 * Non-convergence returns the best iterate with converged = false. A
 * singular J^T J leaves covariance_valid = false and NaN standard errors.
 */
FitResult fit(const SalesSeries& data, const FitConfig& config);

struct PredictedSeries {
    std::vector<double> t;
    std::array<std::vector<double>, 2> cumulative;
    std::array<std::vector<double>, 2> instantaneous;  // first differences on the grid
};

/// Evaluates the fitted closed forms on a time grid.
PredictedSeries predict(const FitResult& result, const std::vector<double>& t_grid);

/**
 * r_squared = 1 - SSE/SST on the stacked cumulative data (SST about the
 * stacked mean); rho_squared = squared Pearson correlation of stacked
 * instantaneous observed vs fitted. Throws std::domain_error when SST
 * degenerates to 0.
 */
GoodnessOfFit goodness_of_fit(const SalesSeries& observed,
                              const std::array<std::vector<double>, 2>& fitted_cumulative);

} // namespace diffusia
