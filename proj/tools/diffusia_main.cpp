// diffusia: duopoly diffusion modeling with a dynamic market potential.
//
// Subcommands: fit, compare, forecast, simulate, oracle-check. Reports are
// JSON, series are CSV; all numeric output uses fixed 12-significant-digit
// scientific formatting so artifacts are byte-stable. Exit codes: 0 success,
// 2 usage, 3 I/O, 4 input validation, 5 convergence failure, 6 oracle-check
// failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "diffusia/csv.hpp"
#include "diffusia/estimation.hpp"
#include "diffusia/forecast.hpp"
#include "diffusia/json_writer.hpp"
#include "diffusia/model_selection.hpp"
#include "diffusia/ode.hpp"
#include "diffusia/sarma.hpp"
#include "diffusia/simulation.hpp"

namespace fs = std::filesystem;
using namespace diffusia;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitValidation = 4;
constexpr int kExitNoConvergence = 5;
constexpr int kExitOracle = 6;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

ModelKind parse_model(const std::string& name) {
    if (name == "cdmp") return ModelKind::Cdmp;
    if (name == "constant") return ModelKind::ConstantPotential;
    if (name == "gg-nosqrt") return ModelKind::BassCurvePotential;
    if (name == "gamma") return ModelKind::GammaCdfPotential;
    throw UsageError("unknown model '" + name + "' (want cdmp|constant|gg-nosqrt|gamma)");
}

FitScale parse_scale(const std::string& name) {
    if (name == "cumulative") return FitScale::Cumulative;
    if (name == "instantaneous") return FitScale::Instantaneous;
    throw UsageError("unknown scale '" + name + "' (want cumulative|instantaneous)");
}

// Documented defaults-only truth vector for simulate/oracle-check; every
// effective coefficient is positive so synthetic monthly signals stay
// nonnegative.
CompetitionParams builtin_params(ModelKind kind) {
    CompetitionParams params;
    params.p1 = 2.0e-3;
    params.q1 = 2.0e-2;
    params.p2 = 1.5e-3;
    params.q2 = 1.5e-2;
    params.delta = 6.0e-3;
    switch (kind) {
        case ModelKind::Cdmp: params.potential = SqrtBassPotential{1e6, 8e-3, 8e-2}; break;
        case ModelKind::ConstantPotential: params.potential = ConstantPotential{2e5}; break;
        case ModelKind::BassCurvePotential:
            params.potential = BassCurvePotential{1e6, 8e-3, 8e-2};
            break;
        case ModelKind::GammaCdfPotential:
            params.potential = GammaCdfPotential{1e6, 0.05, 2.0};
            break;
    }
    return params;
}

CompetitionParams apply_init_overrides(ModelKind kind, CompetitionParams base,
                                       const std::vector<std::string>& inits) {
    Eigen::VectorXd x = pack_parameters(kind, base);
    const auto names = parameter_names(kind);
    for (const auto& token : inits) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--init expects key=value, got '" + token + "'");
        }
        const std::string key = token.substr(0, eq);
        double value = 0.0;
        try {
            std::size_t pos = 0;
            value = std::stod(token.substr(eq + 1), &pos);
            if (pos != token.size() - eq - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw UsageError("--init " + key + ": bad numeric value '" + token.substr(eq + 1) +
                             "'");
        }
        bool found = false;
        for (std::size_t j = 0; j < names.size(); ++j) {
            if (names[j] == key) {
                x[static_cast<Eigen::Index>(j)] = value;
                found = true;
                break;
            }
        }
        if (!found) {
            std::string known;
            for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
            throw UsageError("--init: unknown parameter '" + key + "' for this model (known: " +
                             known + ")");
        }
    }
    return unpack_parameters(kind, x);
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path path = dir / name;
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot write " + path.string());
    return out;
}

JsonValue estimates_json(const FitResult& result) {
    JsonValue rows = JsonValue::array();
    for (int j = 0; j < result.n_params; ++j) {
        JsonValue row = JsonValue::object();
        row["name"] = result.param_names[static_cast<std::size_t>(j)];
        row["estimate"] = result.estimate_vector[j];
        row["std_error"] = result.std_errors[j];
        row["ci_lower"] = result.conf_intervals_95[static_cast<std::size_t>(j)][0];
        row["ci_upper"] = result.conf_intervals_95[static_cast<std::size_t>(j)][1];
        rows.push_back(std::move(row));
    }
    return rows;
}

JsonValue fit_summary_json(const FitResult& result) {
    JsonValue fit = JsonValue::object();
    fit["converged"] = result.converged;
    fit["iterations"] = result.iterations;
    fit["sse"] = result.sse;
    fit["r_squared"] = result.r_squared;
    fit["rho_squared"] = result.rho_squared;
    fit["n_obs"] = result.n_obs;
    fit["n_params"] = result.n_params;
    fit["n_months"] = result.n_months;
    fit["covariance_valid"] = result.covariance_valid;
    return fit;
}

JsonValue effective_coefficients_json(const CompetitionParams& params) {
    const auto eff = effective_coefficients(params);
    JsonValue doc = JsonValue::object();
    auto brand = [](const EffectiveCoefficients::Brand& b) {
        JsonValue v = JsonValue::object();
        v["innovation"] = b.innovation;
        v["within_brand_wom"] = b.within_wom;
        v["cross_brand_wom"] = b.cross_wom;
        return v;
    };
    doc["brand1"] = brand(eff.brand1);
    doc["brand2"] = brand(eff.brand2);
    return doc;
}

void write_fit_report(std::ostream& out, const std::string& input, const FitResult& result,
                      const SalesSeries& data) {
    JsonValue doc = JsonValue::object();
    doc["command"] = "fit";
    doc["input"] = input;
    doc["model"] = model_name(result.model);
    doc["scale"] = result.scale == FitScale::Cumulative ? "cumulative" : "instantaneous";
    doc["brands"] = JsonValue::array();
    doc["brands"].push_back(data.brand_names[0]);
    doc["brands"].push_back(data.brand_names[1]);
    doc["fit"] = fit_summary_json(result);
    doc["estimates"] = estimates_json(result);
    if (result.covariance_valid) {
        JsonValue cov = JsonValue::array();
        for (int i = 0; i < result.n_params; ++i) {
            JsonValue row = JsonValue::array();
            for (int j = 0; j < result.n_params; ++j) row.push_back(result.covariance(i, j));
            cov.push_back(std::move(row));
        }
        doc["covariance"] = std::move(cov);
    } else {
        doc["covariance"] = JsonValue();
    }
    doc["effective_coefficients"] = effective_coefficients_json(result.estimates);
    out << doc.dump();
}

void write_fitted_curves(std::ostream& out, const SalesSeries& data,
                         const PredictedSeries& fitted) {
    out << "t,obs_inst_1,fit_inst_1,obs_cum_1,fit_cum_1,"
           "obs_inst_2,fit_inst_2,obs_cum_2,fit_cum_2\n";
    for (std::size_t i = 0; i < data.months(); ++i) {
        out << static_cast<long>(data.t[i]) << ',' << format_sci(data.sales1[i]) << ','
            << format_sci(fitted.instantaneous[0][i]) << ',' << format_sci(data.cum1[i]) << ','
            << format_sci(fitted.cumulative[0][i]) << ',' << format_sci(data.sales2[i]) << ','
            << format_sci(fitted.instantaneous[1][i]) << ',' << format_sci(data.cum2[i]) << ','
            << format_sci(fitted.cumulative[1][i]) << "\n";
    }
}

void write_potential_curve(std::ostream& out, const FitResult& result, int months) {
    out << "t,m_hat\n";
    for (int t = 1; t <= months; ++t) {
        out << t << ','
            << format_sci(market_potential(static_cast<double>(t), result.estimates.potential))
            << "\n";
    }
}

// ---------------------------------------------------------------- commands

struct CommonOptions {
    std::string input;
    std::string output_dir = ".";
    std::string model = "cdmp";
    std::string scale = "cumulative";
    double tolerance = 1e-10;
    int max_iter = 500;
    std::vector<std::string> init;
};

FitConfig build_config(const CommonOptions& options, const SalesSeries& data) {
    const ModelKind kind = parse_model(options.model);
    FitConfig config = FitConfig::defaults(kind, data);
    config.scale = parse_scale(options.scale);
    config.tolerance = options.tolerance;
    config.max_iterations = options.max_iter;
    config.initial_values = apply_init_overrides(kind, config.initial_values, options.init);
    return config;
}

int run_fit(const CommonOptions& options) {
    const SalesSeries data = ingest_sales_csv(fs::path(options.input));
    const FitConfig config = build_config(options, data);
    const FitResult result = fit(data, config);
    const PredictedSeries fitted = predict(result, data.t);

    {
        auto out = open_output(options.output_dir, "fit_report.json");
        write_fit_report(out, options.input, result, data);
    }
    {
        auto out = open_output(options.output_dir, "fitted_curves.csv");
        write_fitted_curves(out, data, fitted);
    }
    {
        auto out = open_output(options.output_dir, "potential_curve.csv");
        write_potential_curve(out, result, result.n_months);
    }
    if (!result.converged) {
        std::cerr << "fit did not converge within " << config.max_iterations << " iterations\n";
        return kExitNoConvergence;
    }
    std::cout << "fit: R^2 = " << format_sci(result.r_squared)
              << ", rho^2 = " << format_sci(result.rho_squared) << ", artifacts in "
              << options.output_dir << "\n";
    return kExitOk;
}

int run_compare(const CommonOptions& options) {
    const SalesSeries data = ingest_sales_csv(fs::path(options.input));
    std::vector<FitConfig> specs;
    for (ModelKind kind : {ModelKind::Cdmp, ModelKind::ConstantPotential,
                           ModelKind::BassCurvePotential, ModelKind::GammaCdfPotential}) {
        FitConfig config = FitConfig::defaults(kind, data);
        config.scale = parse_scale(options.scale);
        config.tolerance = options.tolerance;
        config.max_iterations = options.max_iter;
        specs.push_back(config);
    }
    const auto rows = compare_potentials(data, specs);

    JsonValue doc = JsonValue::object();
    doc["command"] = "compare";
    doc["input"] = options.input;
    JsonValue table = JsonValue::array();
    for (const auto& row : rows) {
        JsonValue r = JsonValue::object();
        r["model"] = model_name(row.model);
        r["fit_ok"] = row.fit_ok;
        if (row.fit_ok) {
            r["r_squared"] = row.r_squared;
            r["rho_squared"] = row.rho_squared;
            r["converged"] = row.fit->converged;
        } else {
            r["error"] = row.error;
        }
        if (row.nested_vs_full) {
            const auto& cmp = *row.nested_vs_full;
            JsonValue f = JsonValue::object();
            f["r2_full"] = cmp.r2_full;
            f["r2_reduced"] = cmp.r2_reduced;
            f["r2_partial"] = cmp.r2_partial;
            f["f_stat"] = cmp.f_stat;
            f["n_obs"] = cmp.n_obs;
            f["k_full"] = cmp.k_full;
            f["s"] = cmp.s;
            f["exceeds_robust_threshold"] = cmp.exceeds_robust_threshold;
            r["nested_f_vs_cdmp"] = std::move(f);
        }
        table.push_back(std::move(r));
    }
    doc["rows"] = std::move(table);
    auto out = open_output(options.output_dir, "comparison.json");
    out << doc.dump();
    std::cout << "compare: " << rows.size() << " rows written to " << options.output_dir
              << "/comparison.json\n";
    return kExitOk;
}

int run_forecast(const CommonOptions& options, int horizon, double level,
                 const std::string& sarma_spec, int season) {
    const SalesSeries data = ingest_sales_csv(fs::path(options.input));
    const FitConfig config = build_config(options, data);
    const FitResult result = fit(data, config);
    if (!result.converged) {
        std::cerr << "fit did not converge; no forecast produced\n";
        return kExitNoConvergence;
    }

    const ForecastBand cumulative = forecast_bands(result, horizon, level);
    const PredictedSeries at_end = predict(result, {static_cast<double>(result.n_months)});
    const ForecastBand band =
        to_instantaneous(cumulative, at_end.cumulative[0][0], at_end.cumulative[1][0]);

    std::array<std::vector<double>, 2> refinement{};
    bool refined = false;
    if (!sarma_spec.empty()) {
        SarmaConfig sarma;
        if (std::sscanf(sarma_spec.c_str(), "%d,%d,%d,%d", &sarma.ar_order, &sarma.ma_order,
                        &sarma.seasonal_ar_order, &sarma.seasonal_ma_order) != 4) {
            throw UsageError("--sarma expects P,Q,SP,SQ");
        }
        sarma.season_length = season;
        const auto fit_ref = fit_sarma_refinement(result.residuals_instantaneous, sarma, horizon);
        refinement = fit_ref.residual_forecasts;
        refined = true;
    }

    auto out = open_output(options.output_dir, "forecast_bands.csv");
    out << "t,mean_1,lower_1,upper_1,mean_2,lower_2,upper_2";
    if (refined) out << ",refined_mean_1,refined_mean_2";
    out << "\n";
    for (std::size_t i = 0; i < band.t.size(); ++i) {
        out << static_cast<long>(band.t[i]) << ',' << format_sci(band.brands[0].mean[i]) << ','
            << format_sci(band.brands[0].lower[i]) << ',' << format_sci(band.brands[0].upper[i])
            << ',' << format_sci(band.brands[1].mean[i]) << ','
            << format_sci(band.brands[1].lower[i]) << ','
            << format_sci(band.brands[1].upper[i]);
        if (refined) {
            // Additive refinement: mean trajectory plus residual forecast.
            out << ',' << format_sci(band.brands[0].mean[i] + refinement[0][i]) << ','
                << format_sci(band.brands[1].mean[i] + refinement[1][i]);
        }
        out << "\n";
    }
    std::cout << "forecast: horizon " << horizon << ", level " << level
              << (band.has_bands ? "" : " (covariance unavailable: mean-only)")
              << ", written to " << options.output_dir << "/forecast_bands.csv\n";
    return kExitOk;
}

int run_simulate(const CommonOptions& options, int months, int replications, double noise,
                 std::uint64_t seed, const std::string& noise_model_name,
                 const std::string& fit_model) {
    sim::SimScenario scenario;
    const ModelKind true_kind = parse_model(options.model);
    scenario.true_params =
        apply_init_overrides(true_kind, builtin_params(true_kind), options.init);
    scenario.n_months = months;
    scenario.replications = replications;
    scenario.noise_to_signal = noise;
    scenario.seed = seed;
    if (noise_model_name == "additive") {
        scenario.noise_model = sim::NoiseModel::AdditiveInstantaneous;
    } else if (noise_model_name == "multiplicative") {
        scenario.noise_model = sim::NoiseModel::MultiplicativeInstantaneous;
    } else {
        throw UsageError("--noise-model expects additive|multiplicative");
    }

    const ModelKind fitted_kind = fit_model.empty() ? true_kind : parse_model(fit_model);
    scenario.fitted_model = FitConfig::defaults(fitted_kind, sim::generate(scenario, 0));
    scenario.fitted_model.scale = parse_scale(options.scale);
    scenario.fitted_model.tolerance = options.tolerance;
    scenario.fitted_model.max_iterations = options.max_iter;

    const sim::SimReport report = sim::run_study(scenario);
    {
        auto out = open_output(options.output_dir, "sim_report.json");
        sim::write_report_json(report, out);
    }
    {
        auto out = open_output(options.output_dir, "sim_replications.csv");
        sim::write_replications_csv(report, out);
    }
    std::cout << "simulate: " << replications << " replications, convergence rate "
              << format_sci(report.convergence_rate) << ", artifacts in " << options.output_dir
              << "\n";
    return kExitOk;
}

int run_oracle_check(const CommonOptions& options, double t_start, double t_end, double step,
                     double tolerance) {
    const ModelKind kind = parse_model(options.model);
    const CompetitionParams params =
        apply_init_overrides(kind, builtin_params(kind), options.init);

    IntegrationConfig config;
    config.t_start = t_start;
    config.t_end = t_end;
    config.step = step;
    const auto seed = brand_trajectories(t_start, params);
    config.initial_state = {seed.z1, seed.z2};

    const TrajectoryEvaluator eval(params);
    double max_rel = 0.0;
    double at_t = t_start;
    for (const auto& sample : integrate_competition(params, config)) {
        const auto z = eval(sample.t);
        const double scale = std::max(std::fabs(z.z1), std::fabs(z.z2));
        const double dev = std::max(std::fabs(sample.z1 - z.z1), std::fabs(sample.z2 - z.z2)) /
                           scale;
        if (dev > max_rel) {
            max_rel = dev;
            at_t = sample.t;
        }
    }
    std::cout << "oracle-check: max relative deviation " << format_sci(max_rel) << " at t = "
              << at_t << " (tolerance " << format_sci(tolerance) << ")\n";
    if (max_rel > tolerance) {
        std::cerr << "oracle-check FAILED\n";
        return kExitOracle;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"diffusia: two-brand diffusion modeling with dynamic market potential"};
    app.footer("Environment: DIFFUSIA_THREADS caps internal parallelism.");
    app.require_subcommand(1);

    CommonOptions options;
    int horizon = 24;
    double level = 0.95;
    std::string sarma_spec;
    int season = 12;
    int months = 144;
    int replications = 200;
    double noise = 0.02;
    std::uint64_t seed = 0;
    std::string noise_model = "additive";
    std::string fit_model;
    double t_start = 0.5;
    double t_end = 188.0;
    double step = 0.01;
    double oracle_tol = 1e-6;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input) {
            cmd->add_option("-i,--input", options.input, "input sales CSV")->required();
        }
        cmd->add_option("-o,--output-dir", options.output_dir, "artifact directory");
        cmd->add_option("--model", options.model, "cdmp|constant|gg-nosqrt|gamma");
        cmd->add_option("--scale", options.scale, "cumulative|instantaneous");
        cmd->add_option("--tolerance", options.tolerance, "relative SSE stop tolerance");
        cmd->add_option("--max-iter", options.max_iter, "iteration cap");
        cmd->add_option("--init", options.init, "initial/true value overrides, key=value");
    };

    auto* cmd_fit = app.add_subcommand("fit", "estimate parameters from a sales CSV");
    add_common(cmd_fit, true);

    auto* cmd_compare =
        app.add_subcommand("compare", "fit all four market-potential specifications");
    add_common(cmd_compare, true);

    auto* cmd_forecast = app.add_subcommand("forecast", "forecast with confidence bands");
    add_common(cmd_forecast, true);
    cmd_forecast->add_option("--horizon", horizon, "months ahead");
    cmd_forecast->add_option("--level", level, "band level in (0,1)");
    cmd_forecast->add_option("--sarma", sarma_spec, "residual refinement orders P,Q,SP,SQ");
    cmd_forecast->add_option("--season", season, "season length for --sarma");

    auto* cmd_simulate = app.add_subcommand("simulate", "Monte Carlo parameter-recovery study");
    add_common(cmd_simulate, false);
    cmd_simulate->add_option("--months", months, "synthetic series length");
    cmd_simulate->add_option("--replications", replications, "number of replications");
    cmd_simulate->add_option("--noise", noise, "noise-to-signal ratio");
    cmd_simulate->add_option("--seed", seed, "RNG seed");
    cmd_simulate->add_option("--noise-model", noise_model, "additive|multiplicative");
    cmd_simulate->add_option("--fit-model", fit_model,
                             "fitted family (defaults to the true one)");

    auto* cmd_oracle =
        app.add_subcommand("oracle-check", "closed form vs RK4 integration deviation");
    add_common(cmd_oracle, false);
    cmd_oracle->add_option("--t-start", t_start, "integration start (months)");
    cmd_oracle->add_option("--t-end", t_end, "integration end (months)");
    cmd_oracle->add_option("--step", step, "RK4 step (months)");
    cmd_oracle->add_option("--oracle-tol", oracle_tol, "max relative deviation allowed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_fit->parsed()) return run_fit(options);
        if (cmd_compare->parsed()) return run_compare(options);
        if (cmd_forecast->parsed()) {
            return run_forecast(options, horizon, level, sarma_spec, season);
        }
        if (cmd_simulate->parsed()) {
            return run_simulate(options, months, replications, noise, seed, noise_model,
                                fit_model);
        }
        if (cmd_oracle->parsed()) {
            return run_oracle_check(options, t_start, t_end, step, oracle_tol);
        }
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::runtime_error& e) {
        // Missing files surface as runtime errors from the ingest layer.
        const std::string what = e.what();
        if (what.find("cannot open") != std::string::npos) {
            std::cerr << "I/O error: " << what << "\n";
            return kExitIo;
        }
        std::cerr << "error: " << what << "\n";
        return 1;
    }
}
