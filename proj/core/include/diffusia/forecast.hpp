#pragma once

#include <array>
#include <vector>

#include "diffusia/estimation.hpp"

namespace diffusia {

/**
 * Pointwise Wald forecast band on the cumulative-sales scale. Bands are
 * symmetric about the mean; when the parameter covariance is unavailable the
 * band arrays equal the mean and has_bands is false.
 */
struct ForecastBand {
    std::vector<double> t;  // N+1 .. N+horizon
    struct Brand {
        std::vector<double> mean;
        std::vector<double> lower;
        std::vector<double> upper;
    };
    std::array<Brand, 2> brands;
    double level = 0.95;
    bool has_bands = true;
};

/**
 * Delta-method predictive bands: mean = closed form at the fitted estimates;
 * variance at each t is g(t)^T Cov g(t) with g the central finite-difference
 * gradient of z_i(t; beta) at the estimate; band = mean +/- z_{(1+level)/2}
 * sqrt(variance).
 *
 * Requires a converged fit; throws std::invalid_argument otherwise.
 */
ForecastBand forecast_bands(const FitResult& result, int horizon, double level = 0.95);

/**
 * Differences a cumulative-scale band to the instantaneous (monthly) scale
 * for plotting, anchored at the fitted cumulative level of the last training
 * month per brand.
 */
ForecastBand to_instantaneous(const ForecastBand& cumulative, double last_fitted_cum1,
                              double last_fitted_cum2);

} // namespace diffusia
