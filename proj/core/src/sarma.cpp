#include "diffusia/sarma.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "diffusia/optim.hpp"

namespace diffusia {

void SarmaConfig::validate(std::size_t n) const {
    if (ar_order < 0 || ma_order < 0 || seasonal_ar_order < 0 || seasonal_ma_order < 0) {
        throw SarmaError("SarmaConfig: orders must be nonnegative");
    }
    if (season_length < 2) throw SarmaError("SarmaConfig: season_length must be >= 2");
    if (n < static_cast<std::size_t>(3 * season_length)) {
        throw SarmaError("SarmaConfig: series shorter than 3 seasons");
    }
    if (total_parameters() * 5 >= static_cast<int>(n)) {
        throw SarmaError("SarmaConfig: too many parameters for the series length");
    }
}

namespace {

// Expanded lag polynomial of phi(B) Phi(B^s) with phi(B) = 1 - sum phi_i B^i
// (AR side), or of theta(B) Theta(B^s) with theta(B) = 1 + sum theta_i B^i
// (MA side). Index = lag; [0] = 1.
std::vector<double> expand_product(const std::vector<double>& nonseasonal,
                                   const std::vector<double>& seasonal, int season, double sign) {
    std::vector<double> a(nonseasonal.size() + 1, 0.0);
    a[0] = 1.0;
    for (std::size_t i = 0; i < nonseasonal.size(); ++i) a[i + 1] = sign * nonseasonal[i];
    std::vector<double> b(seasonal.size() * static_cast<std::size_t>(season) + 1, 0.0);
    b[0] = 1.0;
    for (std::size_t j = 0; j < seasonal.size(); ++j) {
        b[(j + 1) * static_cast<std::size_t>(season)] = sign * seasonal[j];
    }
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

struct CoefficientLayout {
    SarmaConfig config;
    int n_exog = 0;

    int size() const { return config.total_parameters() + n_exog; }

    void split(const Eigen::VectorXd& x, SarmaModel& model) const {
        int i = 0;
        auto take = [&](int count) {
            std::vector<double> v(static_cast<std::size_t>(count));
            for (int j = 0; j < count; ++j) v[static_cast<std::size_t>(j)] = x[i++];
            return v;
        };
        model.ar = take(config.ar_order);
        model.ma = take(config.ma_order);
        model.seasonal_ar = take(config.seasonal_ar_order);
        model.seasonal_ma = take(config.seasonal_ma_order);
        model.exog = take(n_exog);
    }
};

// CSS residual recursion. With ar_poly = expanded AR polynomial (sign -1) and
// ma_poly = expanded MA polynomial (sign +1):
//   eps_t = sum_l ar_poly[l] a_{t-l} - sum_{l>=1} ma_poly[l] eps_{t-l},
// where a = series - exogenous part, t runs from max AR lag, and earlier eps
// are zero.
std::vector<double> css_residuals(const std::vector<double>& adjusted,
                                  const std::vector<double>& ar_poly,
                                  const std::vector<double>& ma_poly) {
    const std::size_t t0 = ar_poly.size() - 1;
    const std::size_t n = adjusted.size();
    std::vector<double> eps(n, 0.0);
    std::vector<double> out;
    out.reserve(n - t0);
    for (std::size_t t = t0; t < n; ++t) {
        double value = 0.0;
        for (std::size_t l = 0; l < ar_poly.size(); ++l) value += ar_poly[l] * adjusted[t - l];
        for (std::size_t l = 1; l < ma_poly.size() && l <= t; ++l) {
            value -= ma_poly[l] * eps[t - l];
        }
        eps[t] = value;
        out.push_back(value);
    }
    return out;
}

std::vector<double> adjust_for_exogenous(const std::vector<double>& series,
                                         const std::vector<std::vector<double>>& exogenous,
                                         const std::vector<double>& coef) {
    std::vector<double> adjusted = series;
    for (std::size_t c = 0; c < exogenous.size(); ++c) {
        for (std::size_t t = 0; t < series.size(); ++t) {
            adjusted[t] -= coef[c] * exogenous[c][t];
        }
    }
    return adjusted;
}

// Spectral radius of the companion matrix of 1 - c_1 z - ... - c_k z^k (the
// coefficients as they act in the recursion). Radius >= 1 means a root on or
// inside the unit circle.
double companion_spectral_radius(const std::vector<double>& coef) {
    const int k = static_cast<int>(coef.size());
    if (k == 0) return 0.0;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j) companion(0, j) = coef[static_cast<std::size_t>(j)];
    for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
    return companion.eigenvalues().cwiseAbs().maxCoeff();
}

void check_polynomial(const std::vector<double>& coef, const char* label, double sign) {
    std::vector<double> recursion(coef.size());
    for (std::size_t i = 0; i < coef.size(); ++i) recursion[i] = sign * coef[i];
    const double radius = companion_spectral_radius(recursion);
    if (radius >= 1.0 - 1e-9) {
        throw SarmaError(std::string("fit_sarma: fitted ") + label +
                         " polynomial has a root on or inside the unit circle (spectral radius " +
                         std::to_string(radius) + ")");
    }
}

} // namespace

SarmaModel fit_sarma(const std::vector<double>& series, const SarmaConfig& config,
                     const std::vector<std::vector<double>>& exogenous) {
    config.validate(series.size());
    for (const auto& column : exogenous) {
        if (column.size() != series.size()) {
            throw SarmaError("fit_sarma: exogenous column length mismatch");
        }
    }

    CoefficientLayout layout{config, static_cast<int>(exogenous.size())};
    const int k = layout.size();

    SarmaModel model;
    model.config = config;
    if (k == 0) {
        model.converged = true;
        const auto eps = css_residuals(series, {1.0}, {1.0});
        model.n_effective = static_cast<int>(eps.size());
        for (double e : eps) model.sse += e * e;
        return model;
    }

    const ResidualFn residual_fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
        SarmaModel candidate;
        candidate.config = config;
        layout.split(x, candidate);
        const auto adjusted = adjust_for_exogenous(series, exogenous, candidate.exog);
        const auto ar_poly =
            expand_product(candidate.ar, candidate.seasonal_ar, config.season_length, -1.0);
        const auto ma_poly =
            expand_product(candidate.ma, candidate.seasonal_ma, config.season_length, 1.0);
        const auto eps = css_residuals(adjusted, ar_poly, ma_poly);
        out.resize(static_cast<Eigen::Index>(eps.size()));
        for (std::size_t i = 0; i < eps.size(); ++i) out[static_cast<Eigen::Index>(i)] = eps[i];
        return out.allFinite();
    };

    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(k);
    const Eigen::VectorXd lower = Eigen::VectorXd::Constant(k, -10.0);
    const Eigen::VectorXd upper = Eigen::VectorXd::Constant(k, 10.0);
    LeastSquaresOptions options;
    options.tolerance = 1e-12;
    const LeastSquaresResult opt = minimize_least_squares(residual_fn, x0, lower, upper, options);

    layout.split(opt.x, model);
    model.sse = opt.sse;
    model.converged = opt.converged;

    check_polynomial(model.ar, "AR", 1.0);
    check_polynomial(model.seasonal_ar, "seasonal AR", 1.0);
    check_polynomial(model.ma, "MA", -1.0);
    check_polynomial(model.seasonal_ma, "seasonal MA", -1.0);

    const auto eps = sarma_residuals(model, series);
    model.n_effective = static_cast<int>(eps.size());
    return model;
}

std::vector<double> sarma_residuals(const SarmaModel& model, const std::vector<double>& series) {
    const auto ar_poly =
        expand_product(model.ar, model.seasonal_ar, model.config.season_length, -1.0);
    const auto ma_poly =
        expand_product(model.ma, model.seasonal_ma, model.config.season_length, 1.0);
    if (series.size() < ar_poly.size()) {
        throw SarmaError("sarma_residuals: series shorter than the AR lag span");
    }
    return css_residuals(series, ar_poly, ma_poly);
}

std::vector<double> sarma_one_step_fitted(const SarmaModel& model,
                                          const std::vector<double>& series) {
    const auto eps = sarma_residuals(model, series);
    const std::size_t t0 = series.size() - eps.size();
    std::vector<double> fitted(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) fitted[i] = series[t0 + i] - eps[i];
    return fitted;
}

std::vector<double> sarma_forecast(const SarmaModel& model, const std::vector<double>& history,
                                   int horizon) {
    if (horizon < 0) throw SarmaError("sarma_forecast: horizon must be nonnegative");
    const auto ar_poly =
        expand_product(model.ar, model.seasonal_ar, model.config.season_length, -1.0);
    const auto ma_poly =
        expand_product(model.ma, model.seasonal_ma, model.config.season_length, 1.0);
    if (history.size() < ar_poly.size()) {
        throw SarmaError("sarma_forecast: history shorter than the AR lag span");
    }

    // Reconstruct in-sample eps, then iterate with future eps = 0.
    std::vector<double> x = history;
    std::vector<double> eps(history.size(), 0.0);
    {
        const auto tail = css_residuals(history, ar_poly, ma_poly);
        const std::size_t t0 = history.size() - tail.size();
        for (std::size_t i = 0; i < tail.size(); ++i) eps[t0 + i] = tail[i];
    }
    x.resize(history.size() + static_cast<std::size_t>(horizon));
    eps.resize(x.size(), 0.0);

    std::vector<double> out(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        const std::size_t t = history.size() + static_cast<std::size_t>(h);
        double value = 0.0;
        for (std::size_t l = 1; l < ar_poly.size(); ++l) value -= ar_poly[l] * x[t - l];
        for (std::size_t l = 1; l < ma_poly.size() && l <= t; ++l) {
            value += ma_poly[l] * eps[t - l];
        }
        x[t] = value;
        out[static_cast<std::size_t>(h)] = value;
    }
    return out;
}

SarmaRefinement fit_sarma_refinement(const std::array<std::vector<double>, 2>& residuals,
                                     const SarmaConfig& config, int horizon) {
    SarmaRefinement refinement;
    for (int b = 0; b < 2; ++b) {
        const auto& series = residuals[static_cast<std::size_t>(b)];
        refinement.models[static_cast<std::size_t>(b)] = fit_sarma(series, config);
        refinement.residual_forecasts[static_cast<std::size_t>(b)] =
            sarma_forecast(refinement.models[static_cast<std::size_t>(b)], series, horizon);
    }
    return refinement;
}

} // namespace diffusia
