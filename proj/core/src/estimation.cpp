#include "diffusia/estimation.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "diffusia/optim.hpp"

namespace diffusia {

namespace {

constexpr double kMagnitudeFloorK = 1e-8;
constexpr double kMagnitudeFloorRate = 1e-10;
constexpr double kCiQuantile = 1.96;

template <typename Variant>
bool holds(const PotentialSpec& spec) {
    return std::holds_alternative<Variant>(spec);
}

void check_model_branch(ModelKind kind, const CompetitionParams& params) {
    const bool ok = (kind == ModelKind::Cdmp && holds<SqrtBassPotential>(params.potential)) ||
                    (kind == ModelKind::ConstantPotential && holds<ConstantPotential>(params.potential)) ||
                    (kind == ModelKind::BassCurvePotential && holds<BassCurvePotential>(params.potential)) ||
                    (kind == ModelKind::GammaCdfPotential && holds<GammaCdfPotential>(params.potential));
    if (!ok) {
        throw std::invalid_argument(std::string("fit: initial potential variant does not match model '") +
                                    model_name(kind) + "'");
    }
}

std::vector<double> first_differences(const std::vector<double>& cumulative) {
    std::vector<double> out(cumulative.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        out[i] = cumulative[i] - prev;
        prev = cumulative[i];
    }
    return out;
}

} // namespace

const char* model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Cdmp: return "cdmp";
        case ModelKind::ConstantPotential: return "constant";
        case ModelKind::BassCurvePotential: return "gg-nosqrt";
        case ModelKind::GammaCdfPotential: return "gamma";
    }
    return "unknown";
}

int parameter_count(ModelKind kind) {
    return kind == ModelKind::ConstantPotential ? 6 : 8;
}

std::vector<std::string> parameter_names(ModelKind kind) {
    switch (kind) {
        case ModelKind::Cdmp:
        case ModelKind::BassCurvePotential:
            return {"K", "p_c", "q_c", "p_1", "q_1", "p_2", "q_2", "delta"};
        case ModelKind::ConstantPotential:
            return {"m", "p_1", "q_1", "p_2", "q_2", "delta"};
        case ModelKind::GammaCdfPotential:
            return {"K", "alpha_0", "alpha_1", "p_1", "q_1", "p_2", "q_2", "delta"};
    }
    return {};
}

Eigen::VectorXd pack_parameters(ModelKind kind, const CompetitionParams& params) {
    check_model_branch(kind, params);
    Eigen::VectorXd x(parameter_count(kind));
    int i = 0;
    switch (kind) {
        case ModelKind::Cdmp: {
            const auto& p = std::get<SqrtBassPotential>(params.potential);
            x[i++] = p.K; x[i++] = p.pc; x[i++] = p.qc;
            break;
        }
        case ModelKind::BassCurvePotential: {
            const auto& p = std::get<BassCurvePotential>(params.potential);
            x[i++] = p.K; x[i++] = p.pc; x[i++] = p.qc;
            break;
        }
        case ModelKind::GammaCdfPotential: {
            const auto& p = std::get<GammaCdfPotential>(params.potential);
            x[i++] = p.K; x[i++] = p.alpha0; x[i++] = p.alpha1;
            break;
        }
        case ModelKind::ConstantPotential: {
            const auto& p = std::get<ConstantPotential>(params.potential);
            x[i++] = p.m;
            break;
        }
    }
    x[i++] = params.p1;
    x[i++] = params.q1;
    x[i++] = params.p2;
    x[i++] = params.q2;
    x[i++] = params.delta;
    return x;
}

CompetitionParams unpack_parameters(ModelKind kind, const Eigen::VectorXd& x) {
    if (x.size() != parameter_count(kind)) {
        throw std::invalid_argument("unpack_parameters: vector length does not match model");
    }
    CompetitionParams params;
    int i = 0;
    switch (kind) {
        case ModelKind::Cdmp:
            params.potential = SqrtBassPotential{x[0], x[1], x[2]};
            i = 3;
            break;
        case ModelKind::BassCurvePotential:
            params.potential = BassCurvePotential{x[0], x[1], x[2]};
            i = 3;
            break;
        case ModelKind::GammaCdfPotential:
            params.potential = GammaCdfPotential{x[0], x[1], x[2]};
            i = 3;
            break;
        case ModelKind::ConstantPotential:
            params.potential = ConstantPotential{x[0]};
            i = 1;
            break;
    }
    params.p1 = x[i++];
    params.q1 = x[i++];
    params.p2 = x[i++];
    params.q2 = x[i++];
    params.delta = x[i++];
    return params;
}

FitConfig FitConfig::defaults(ModelKind kind, const SalesSeries& data) {
    if (data.months() == 0) throw std::invalid_argument("FitConfig::defaults: empty series");
    const double total = data.cum1.back() + data.cum2.back();
    const double magnitude = 1.5 * total;

    FitConfig config;
    config.model = kind;
    CompetitionParams init;
    switch (kind) {
        case ModelKind::Cdmp:
            init.potential = SqrtBassPotential{magnitude, 1e-3, 1e-2};
            break;
        case ModelKind::BassCurvePotential:
            init.potential = BassCurvePotential{magnitude, 1e-3, 1e-2};
            break;
        case ModelKind::GammaCdfPotential:
            init.potential = GammaCdfPotential{magnitude, 0.05, 2.0};
            break;
        case ModelKind::ConstantPotential:
            init.potential = ConstantPotential{magnitude};
            break;
    }
    init.p1 = 1e-3;
    init.q1 = 1e-2;
    init.p2 = 1e-4;
    init.q2 = 1e-2;
    init.delta = 0.0;
    config.initial_values = init;
    return config;
}

namespace {

Eigen::VectorXd default_lower_bounds(ModelKind kind) {
    const int k = parameter_count(kind);
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(k, -std::numeric_limits<double>::infinity());
    lo[0] = kMagnitudeFloorK;  // K or m
    if (kind != ModelKind::ConstantPotential) {
        lo[1] = kMagnitudeFloorRate;
        lo[2] = kMagnitudeFloorRate;
    }
    return lo;
}

// Stacked model evaluation: brand 1's N values then brand 2's, on the
// requested scale. Returns false on a model domain error.
bool evaluate_model(ModelKind kind, FitScale scale, const Eigen::VectorXd& x,
                    const std::vector<double>& t_grid, Eigen::VectorXd& out) {
    const std::size_t n = t_grid.size();
    out.resize(static_cast<Eigen::Index>(2 * n));
    try {
        const TrajectoryEvaluator eval(unpack_parameters(kind, x));
        double prev1 = 0.0;
        double prev2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const BrandPair z = eval(t_grid[i]);
            if (scale == FitScale::Cumulative) {
                out[static_cast<Eigen::Index>(i)] = z.z1;
                out[static_cast<Eigen::Index>(n + i)] = z.z2;
            } else {
                out[static_cast<Eigen::Index>(i)] = z.z1 - prev1;
                out[static_cast<Eigen::Index>(n + i)] = z.z2 - prev2;
                prev1 = z.z1;
                prev2 = z.z2;
            }
        }
    } catch (const std::domain_error&) {
        return false;
    }
    return out.allFinite();
}

} // namespace

FitResult fit(const SalesSeries& data, const FitConfig& config) {
    const int k = parameter_count(config.model);
    const int n_months = static_cast<int>(data.months());
    if (n_months < k / 2 + 2) {
        throw std::invalid_argument("fit: too few observations for the parameter count");
    }
    check_model_branch(config.model, config.initial_values);

    const Eigen::VectorXd x0 = pack_parameters(config.model, config.initial_values);
    if (!x0.allFinite()) throw std::invalid_argument("fit: initial values must be finite");

    Eigen::VectorXd observed(2 * n_months);
    for (int i = 0; i < n_months; ++i) {
        if (config.scale == FitScale::Cumulative) {
            observed[i] = data.cum1[i];
            observed[n_months + i] = data.cum2[i];
        } else {
            observed[i] = data.sales1[i];
            observed[n_months + i] = data.sales2[i];
        }
    }

    const ResidualFn residual_fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
        if (!evaluate_model(config.model, config.scale, x, data.t, out)) return false;
        out -= observed;
        return true;
    };

    const Eigen::VectorXd lower =
        config.lower_bounds ? *config.lower_bounds : default_lower_bounds(config.model);
    const Eigen::VectorXd upper =
        config.upper_bounds
            ? *config.upper_bounds
            : Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity());

    LeastSquaresOptions options;
    options.tolerance = config.tolerance;
    options.max_iterations = config.max_iterations;
    const LeastSquaresResult opt = minimize_least_squares(residual_fn, x0, lower, upper, options);

    FitResult result;
    result.model = config.model;
    result.scale = config.scale;
    result.estimate_vector = opt.x;
    result.estimates = unpack_parameters(config.model, opt.x);
    result.param_names = parameter_names(config.model);
    result.sse = opt.sse;
    result.n_obs = 2 * n_months;
    result.n_params = k;
    result.n_months = n_months;
    result.iterations = opt.iterations;
    result.converged = opt.converged;

    // Covariance s^2 (J^T J)^{-1}, inverted in correlation form so that the
    // wildly different parameter units (K in packages, rates in 1/month) do
    // not masquerade as rank deficiency; a genuinely singular system signals
    // over-parameterization and leaves the covariance unavailable.
    const double dof = static_cast<double>(result.n_obs - k);
    const double s2 = opt.sse / dof;
    result.std_errors = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::quiet_NaN());
    result.covariance = Eigen::MatrixXd::Constant(k, k, std::numeric_limits<double>::quiet_NaN());
    if (opt.jtj_valid && opt.jtj.diagonal().minCoeff() > 0.0) {
        const Eigen::VectorXd scale = opt.jtj.diagonal().cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd normalized =
            scale.asDiagonal() * opt.jtj * scale.asDiagonal();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(normalized);
        lu.setThreshold(1e-12);
        if (lu.rank() == k) {
            const Eigen::MatrixXd inv =
                scale.asDiagonal() * lu.inverse() * scale.asDiagonal();
            result.covariance = s2 * inv;
            result.covariance_valid = result.covariance.allFinite();
            if (result.covariance_valid) {
                for (int j = 0; j < k; ++j) {
                    result.std_errors[j] = std::sqrt(std::max(result.covariance(j, j), 0.0));
                }
            }
        }
    }
    result.conf_intervals_95.resize(k);
    for (int j = 0; j < k; ++j) {
        result.conf_intervals_95[static_cast<std::size_t>(j)] = {
            opt.x[j] - kCiQuantile * result.std_errors[j],
            opt.x[j] + kCiQuantile * result.std_errors[j]};
    }

    // Fitted series, residuals, and fit statistics (always reported on both
    // scales, whatever the fitted one).
    const PredictedSeries fitted = predict(result, data.t);
    const GoodnessOfFit gof = goodness_of_fit(data, fitted.cumulative);
    result.r_squared = gof.r_squared;
    result.rho_squared = gof.rho_squared;
    for (int b = 0; b < 2; ++b) {
        const auto& obs_cum = (b == 0) ? data.cum1 : data.cum2;
        const auto& obs_inst = (b == 0) ? data.sales1 : data.sales2;
        auto& rc = result.residuals_cumulative[static_cast<std::size_t>(b)];
        auto& ri = result.residuals_instantaneous[static_cast<std::size_t>(b)];
        rc.resize(static_cast<std::size_t>(n_months));
        ri.resize(static_cast<std::size_t>(n_months));
        for (int i = 0; i < n_months; ++i) {
            rc[static_cast<std::size_t>(i)] =
                obs_cum[static_cast<std::size_t>(i)] -
                fitted.cumulative[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
            ri[static_cast<std::size_t>(i)] =
                obs_inst[static_cast<std::size_t>(i)] -
                fitted.instantaneous[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
        }
    }
    return result;
}

PredictedSeries predict(const FitResult& result, const std::vector<double>& t_grid) {
    PredictedSeries out;
    out.t = t_grid;
    const TrajectoryEvaluator eval(result.estimates);
    for (int b = 0; b < 2; ++b) {
        out.cumulative[static_cast<std::size_t>(b)].resize(t_grid.size());
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const BrandPair z = eval(t_grid[i]);
        out.cumulative[0][i] = z.z1;
        out.cumulative[1][i] = z.z2;
    }
    out.instantaneous[0] = first_differences(out.cumulative[0]);
    out.instantaneous[1] = first_differences(out.cumulative[1]);
    return out;
}

GoodnessOfFit goodness_of_fit(const SalesSeries& observed,
                              const std::array<std::vector<double>, 2>& fitted_cumulative) {
    const std::size_t n = observed.months();
    if (fitted_cumulative[0].size() != n || fitted_cumulative[1].size() != n) {
        throw std::invalid_argument("goodness_of_fit: length mismatch");
    }

    // R^2 on stacked cumulative data, about the stacked mean.
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += observed.cum1[i] + observed.cum2[i];
    mean /= static_cast<double>(2 * n);
    double sse = 0.0;
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r1 = observed.cum1[i] - fitted_cumulative[0][i];
        const double r2 = observed.cum2[i] - fitted_cumulative[1][i];
        sse += r1 * r1 + r2 * r2;
        const double d1 = observed.cum1[i] - mean;
        const double d2 = observed.cum2[i] - mean;
        sst += d1 * d1 + d2 * d2;
    }
    if (sst == 0.0) throw std::domain_error("goodness_of_fit: degenerate SST = 0");

    // rho^2: squared Pearson correlation of stacked instantaneous series.
    const std::vector<double> fit_inst1 = first_differences(fitted_cumulative[0]);
    const std::vector<double> fit_inst2 = first_differences(fitted_cumulative[1]);
    double mean_obs = 0.0;
    double mean_fit = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_obs += observed.sales1[i] + observed.sales2[i];
        mean_fit += fit_inst1[i] + fit_inst2[i];
    }
    mean_obs /= static_cast<double>(2 * n);
    mean_fit /= static_cast<double>(2 * n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    auto accumulate = [&](double o, double f) {
        const double dx = o - mean_obs;
        const double dy = f - mean_fit;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    };
    for (std::size_t i = 0; i < n; ++i) accumulate(observed.sales1[i], fit_inst1[i]);
    for (std::size_t i = 0; i < n; ++i) accumulate(observed.sales2[i], fit_inst2[i]);

    GoodnessOfFit gof;
    gof.r_squared = 1.0 - sse / sst;
    gof.rho_squared =
        (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : (sse == 0.0 ? 1.0 : 0.0);
    return gof;
}

} // namespace diffusia
