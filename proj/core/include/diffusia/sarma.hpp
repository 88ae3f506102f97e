#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace diffusia {

/// Raised when a fitted seasonal ARMA polynomial is explosive or
/// non-invertible, or when the series is too short for the requested orders.
class SarmaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Multiplicative seasonal ARMA orders (p, q) x (P, Q)_s. The default is the
/// parsimonious (1,0)x(1,0)_12 used for monthly seasonality.
struct SarmaConfig {
    int ar_order = 1;
    int ma_order = 0;
    int seasonal_ar_order = 1;
    int seasonal_ma_order = 0;
    int season_length = 12;

    int total_parameters() const {
        return ar_order + ma_order + seasonal_ar_order + seasonal_ma_order;
    }

    /// Throws SarmaError unless orders >= 0, season_length >= 2,
    /// n >= 3 * season_length, and total parameters < n / 5.
    void validate(std::size_t n) const;
};

struct SarmaModel {
    SarmaConfig config;
    std::vector<double> ar;           // phi_1..phi_p
    std::vector<double> ma;           // theta_1..theta_q
    std::vector<double> seasonal_ar;  // Phi_1..Phi_P
    std::vector<double> seasonal_ma;  // Theta_1..Theta_Q
    std::vector<double> exog;         // regression coefficients, one per column
    double sse = 0.0;
    int n_effective = 0;  // residuals entering the conditional sum of squares
    bool converged = false;
};

/**
 * Conditional-least-squares fit of phi(B) Phi(B^s) x_t = theta(B) Theta(B^s)
 * eps_t, with optional exogenous regression columns subtracted from x first.
 * Pre-sample values and pre-sample eps are treated as zero (conditioning on
 * the first max-lag observations). The fitted polynomials are checked for
 * stationarity/invertibility; explosive or non-invertible results raise
 * SarmaError with a diagnostic.
 */
SarmaModel fit_sarma(const std::vector<double>& series, const SarmaConfig& config,
                     const std::vector<std::vector<double>>& exogenous = {});

/// CSS residuals of the model on a series (one value per t >= max AR lag).
std::vector<double> sarma_residuals(const SarmaModel& model, const std::vector<double>& series);

/// In-sample one-step predictions x_hat_t = x_t - eps_t, aligned with
/// sarma_residuals (first index = max AR lag).
std::vector<double> sarma_one_step_fitted(const SarmaModel& model,
                                          const std::vector<double>& series);

/// h-step forecasts with future eps = 0, iterating the recursion forward.
std::vector<double> sarma_forecast(const SarmaModel& model, const std::vector<double>& history,
                                   int horizon);

/// Per-brand refinement: a SARMA model on each brand's instantaneous-scale
/// residual series plus its h-step residual forecasts, to be added to the
/// mean-trajectory forecast.
struct SarmaRefinement {
    std::array<SarmaModel, 2> models;
    std::array<std::vector<double>, 2> residual_forecasts;
};

SarmaRefinement fit_sarma_refinement(const std::array<std::vector<double>, 2>& residuals,
                                     const SarmaConfig& config, int horizon);

} // namespace diffusia
