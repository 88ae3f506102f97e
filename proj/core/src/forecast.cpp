#include "diffusia/forecast.hpp"

#include <cmath>
#include <stdexcept>

#include "diffusia/special_functions.hpp"

namespace diffusia {

ForecastBand forecast_bands(const FitResult& result, int horizon, double level) {
    if (!result.converged) {
        throw std::invalid_argument("forecast_bands: requires a converged fit");
    }
    if (horizon < 1) throw std::invalid_argument("forecast_bands: horizon must be >= 1");
    if (!(level > 0.0) || !(level < 1.0)) {
        throw std::invalid_argument("forecast_bands: level must lie in (0, 1)");
    }

    ForecastBand band;
    band.level = level;
    band.has_bands = result.covariance_valid;
    band.t.resize(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        band.t[static_cast<std::size_t>(h)] = static_cast<double>(result.n_months + 1 + h);
    }

    const TrajectoryEvaluator eval(result.estimates);
    for (auto& brand : band.brands) {
        brand.mean.resize(band.t.size());
        brand.lower.resize(band.t.size());
        brand.upper.resize(band.t.size());
    }
    for (std::size_t i = 0; i < band.t.size(); ++i) {
        const BrandPair z = eval(band.t[i]);
        band.brands[0].mean[i] = z.z1;
        band.brands[1].mean[i] = z.z2;
    }

    if (!band.has_bands) {
        for (auto& brand : band.brands) {
            brand.lower = brand.mean;
            brand.upper = brand.mean;
        }
        return band;
    }

    const double quantile = normal_quantile(0.5 * (1.0 + level));
    const int k = result.n_params;
    const Eigen::VectorXd& x = result.estimate_vector;

    // Central-difference gradient of (z1, z2) at each forecast month.
    Eigen::MatrixXd grad1(static_cast<Eigen::Index>(band.t.size()), k);
    Eigen::MatrixXd grad2(static_cast<Eigen::Index>(band.t.size()), k);
    for (int j = 0; j < k; ++j) {
        const double h = std::max(1e-6 * std::fabs(x[j]), 1e-10);
        Eigen::VectorXd xp = x;
        Eigen::VectorXd xm = x;
        xp[j] += h;
        xm[j] -= h;
        const TrajectoryEvaluator ep(unpack_parameters(result.model, xp));
        const TrajectoryEvaluator em(unpack_parameters(result.model, xm));
        for (std::size_t i = 0; i < band.t.size(); ++i) {
            const BrandPair zp = ep(band.t[i]);
            const BrandPair zm = em(band.t[i]);
            grad1(static_cast<Eigen::Index>(i), j) = (zp.z1 - zm.z1) / (2.0 * h);
            grad2(static_cast<Eigen::Index>(i), j) = (zp.z2 - zm.z2) / (2.0 * h);
        }
    }

    for (std::size_t i = 0; i < band.t.size(); ++i) {
        const Eigen::VectorXd g1 = grad1.row(static_cast<Eigen::Index>(i));
        const Eigen::VectorXd g2 = grad2.row(static_cast<Eigen::Index>(i));
        const double var1 = std::max(g1.dot(result.covariance * g1), 0.0);
        const double var2 = std::max(g2.dot(result.covariance * g2), 0.0);
        const double half1 = quantile * std::sqrt(var1);
        const double half2 = quantile * std::sqrt(var2);
        band.brands[0].lower[i] = band.brands[0].mean[i] - half1;
        band.brands[0].upper[i] = band.brands[0].mean[i] + half1;
        band.brands[1].lower[i] = band.brands[1].mean[i] - half2;
        band.brands[1].upper[i] = band.brands[1].mean[i] + half2;
    }
    return band;
}

ForecastBand to_instantaneous(const ForecastBand& cumulative, double last_fitted_cum1,
                              double last_fitted_cum2) {
    ForecastBand out = cumulative;
    const std::array<double, 2> base{last_fitted_cum1, last_fitted_cum2};
    for (int b = 0; b < 2; ++b) {
        const auto& src = cumulative.brands[static_cast<std::size_t>(b)];
        auto& dst = out.brands[static_cast<std::size_t>(b)];
        double prev_mean = base[static_cast<std::size_t>(b)];
        double prev_lower = prev_mean;
        double prev_upper = prev_mean;
        for (std::size_t i = 0; i < src.mean.size(); ++i) {
            dst.mean[i] = src.mean[i] - prev_mean;
            dst.lower[i] = src.lower[i] - prev_lower;
            dst.upper[i] = src.upper[i] - prev_upper;
            prev_mean = src.mean[i];
            prev_lower = src.lower[i];
            prev_upper = src.upper[i];
        }
    }
    return out;
}

} // namespace diffusia
