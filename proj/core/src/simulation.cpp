#include "diffusia/simulation.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "diffusia/json_writer.hpp"
#include "diffusia/parallel.hpp"
#include "diffusia/rng.hpp"
#include "diffusia/special_functions.hpp"

namespace diffusia {
namespace sim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ModelKind model_of(const PotentialSpec& potential) {
    if (std::holds_alternative<SqrtBassPotential>(potential)) return ModelKind::Cdmp;
    if (std::holds_alternative<ConstantPotential>(potential)) return ModelKind::ConstantPotential;
    if (std::holds_alternative<BassCurvePotential>(potential)) {
        return ModelKind::BassCurvePotential;
    }
    return ModelKind::GammaCdfPotential;
}

} // namespace

const char* noise_model_name(NoiseModel model) {
    return model == NoiseModel::AdditiveInstantaneous ? "additive-on-instantaneous"
                                                      : "multiplicative-on-instantaneous";
}

void SimScenario::validate() const {
    true_params.validate();
    if (n_months < 24) throw std::invalid_argument("SimScenario: n_months must be >= 24");
    if (replications < 1) throw std::invalid_argument("SimScenario: replications must be >= 1");
    if (noise_to_signal < 0.0) {
        throw std::invalid_argument("SimScenario: noise_to_signal must be >= 0");
    }
}

bool SimScenario::misspecified() const {
    return model_of(true_params.potential) != fitted_model.model;
}

SalesSeries generate(const SimScenario& scenario, int replication) {
    scenario.validate();

    // Model signal: first differences of the closed form on t = 1..N.
    const TrajectoryEvaluator eval(scenario.true_params);
    const std::size_t n = static_cast<std::size_t>(scenario.n_months);
    std::vector<double> signal1(n);
    std::vector<double> signal2(n);
    double prev1 = 0.0;
    double prev2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const BrandPair z = eval(static_cast<double>(i + 1));
        signal1[i] = z.z1 - prev1;
        signal2[i] = z.z2 - prev2;
        prev1 = z.z1;
        prev2 = z.z2;
    }

    if (scenario.noise_to_signal == 0.0) {
        return SalesSeries::from_instantaneous({"brand1", "brand2"}, std::move(signal1),
                                               std::move(signal2));
    }

    double sd1 = 0.0;
    double sd2 = 0.0;
    if (scenario.noise_model == NoiseModel::AdditiveInstantaneous) {
        // Fixed per-brand sd: noise_to_signal times the mean absolute signal.
        for (std::size_t i = 0; i < n; ++i) {
            sd1 += std::fabs(signal1[i]);
            sd2 += std::fabs(signal2[i]);
        }
        sd1 *= scenario.noise_to_signal / static_cast<double>(n);
        sd2 *= scenario.noise_to_signal / static_cast<double>(n);
    }

    SplitMix64 rng(scenario.seed, static_cast<std::uint64_t>(replication));
    std::vector<double> sales1(n);
    std::vector<double> sales2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e1 = rng.next_normal();
        const double e2 = rng.next_normal();
        if (scenario.noise_model == NoiseModel::AdditiveInstantaneous) {
            sales1[i] = signal1[i] + sd1 * e1;
            sales2[i] = signal2[i] + sd2 * e2;
        } else {
            sales1[i] = signal1[i] + scenario.noise_to_signal * std::fabs(signal1[i]) * e1;
            sales2[i] = signal2[i] + scenario.noise_to_signal * std::fabs(signal2[i]) * e2;
        }
        sales1[i] = std::max(sales1[i], 0.0);
        sales2[i] = std::max(sales2[i], 0.0);
    }
    return SalesSeries::from_instantaneous({"brand1", "brand2"}, std::move(sales1),
                                           std::move(sales2));
}

SimReport run_study(const SimScenario& scenario) {
    scenario.validate();

    SimReport report;
    report.true_model = model_of(scenario.true_params.potential);
    report.fitted_model = scenario.fitted_model.model;
    report.misspecified = scenario.misspecified();
    report.n_months = scenario.n_months;
    report.noise_to_signal = scenario.noise_to_signal;
    report.noise_model = scenario.noise_model;
    report.seed = scenario.seed;
    report.replications = scenario.replications;
    report.param_names = parameter_names(scenario.fitted_model.model);
    report.noise_note =
        std::string(noise_model_name(scenario.noise_model)) +
        (scenario.noise_model == NoiseModel::AdditiveInstantaneous
             ? "; sd = noise_to_signal x mean |monthly signal| per brand"
             : "; sd(t) = noise_to_signal x |monthly signal(t)| per brand") +
        "; negative draws truncated at 0";

    const std::size_t reps = static_cast<std::size_t>(scenario.replications);
    report.records.resize(reps);

    parallel_for(reps, [&](std::size_t r) {
        ReplicationRecord& record = report.records[r];
        record.replication = static_cast<int>(r);
        const SalesSeries data = generate(scenario, static_cast<int>(r));
        try {
            const FitResult result = fit(data, scenario.fitted_model);
            record.converged = result.converged;
            record.covariance_valid = result.covariance_valid;
            record.iterations = result.iterations;
            record.sse = result.sse;
            record.r_squared = result.r_squared;
            record.rho_squared = result.rho_squared;
            record.estimates = result.estimate_vector;
            record.std_errors = result.std_errors;
        } catch (const std::exception&) {
            record.converged = false;
        }
    });

    // True values matched by parameter name (all of them when correctly
    // specified; the shared p/q/delta block under misspecification).
    const std::vector<std::string> true_names = parameter_names(report.true_model);
    const Eigen::VectorXd true_vec = pack_parameters(report.true_model, scenario.true_params);
    const int k = parameter_count(scenario.fitted_model.model);
    Eigen::VectorXd matched_truth = Eigen::VectorXd::Constant(k, kNaN);
    for (int j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < true_names.size(); ++i) {
            if (true_names[i] == report.param_names[static_cast<std::size_t>(j)]) {
                matched_truth[j] = true_vec[static_cast<Eigen::Index>(i)];
                break;
            }
        }
    }

    int n_converged = 0;
    for (const auto& record : report.records) {
        if (record.converged) ++n_converged;
    }
    report.convergence_rate =
        static_cast<double>(n_converged) / static_cast<double>(scenario.replications);

    report.parameter_stats.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        ParamStat& stat = report.parameter_stats[static_cast<std::size_t>(j)];
        stat.name = report.param_names[static_cast<std::size_t>(j)];
        stat.true_value = matched_truth[j];
        stat.bias = kNaN;
        stat.rel_rmse = kNaN;
        stat.coverage_95 = kNaN;
        stat.n_used = 0;
        if (std::isnan(matched_truth[j])) continue;

        double sum_err = 0.0;
        double sum_sq = 0.0;
        int used = 0;
        int ci_total = 0;
        int ci_hits = 0;
        for (const auto& record : report.records) {
            if (!record.converged) continue;
            const double err = record.estimates[j] - matched_truth[j];
            sum_err += err;
            sum_sq += err * err;
            ++used;
            if (record.covariance_valid && std::isfinite(record.std_errors[j])) {
                ++ci_total;
                if (std::fabs(err) <= 1.96 * record.std_errors[j]) ++ci_hits;
            }
        }
        stat.n_used = used;
        if (used > 0) {
            stat.bias = sum_err / used;
            const double denom = std::fabs(matched_truth[j]);
            stat.rel_rmse = denom > 0.0 ? std::sqrt(sum_sq / used) / denom : kNaN;
        }
        if (ci_total > 0) stat.coverage_95 = static_cast<double>(ci_hits) / ci_total;
    }
    return report;
}

void write_report_json(const SimReport& report, std::ostream& out) {
    JsonValue doc = JsonValue::object();
    JsonValue& scenario = doc["scenario"];
    scenario["true_model"] = model_name(report.true_model);
    scenario["fitted_model"] = model_name(report.fitted_model);
    scenario["misspecified"] = report.misspecified;
    scenario["n_months"] = report.n_months;
    scenario["noise_to_signal"] = report.noise_to_signal;
    scenario["noise_model"] = noise_model_name(report.noise_model);
    scenario["noise_note"] = report.noise_note;
    scenario["seed"] = static_cast<std::int64_t>(report.seed);
    scenario["replications"] = report.replications;

    doc["convergence_rate"] = report.convergence_rate;
    JsonValue stats = JsonValue::array();
    for (const auto& s : report.parameter_stats) {
        JsonValue row = JsonValue::object();
        row["name"] = s.name;
        row["true_value"] = s.true_value;
        row["bias"] = s.bias;
        row["relative_rmse"] = s.rel_rmse;
        row["coverage_95"] = s.coverage_95;
        row["n_used"] = s.n_used;
        stats.push_back(std::move(row));
    }
    doc["parameter_stats"] = std::move(stats);
    out << doc.dump();
}

void write_replications_csv(const SimReport& report, std::ostream& out) {
    out << "replication,converged,iterations,sse,r_squared,rho_squared";
    for (const auto& name : report.param_names) out << ",est_" << name;
    for (const auto& name : report.param_names) out << ",se_" << name;
    out << "\n";
    for (const auto& record : report.records) {
        out << record.replication << ',' << (record.converged ? 1 : 0) << ','
            << record.iterations << ',' << format_sci(record.sse) << ','
            << format_sci(record.r_squared) << ',' << format_sci(record.rho_squared);
        const int k = static_cast<int>(report.param_names.size());
        for (int j = 0; j < k; ++j) {
            out << ',' << (record.estimates.size() == k ? format_sci(record.estimates[j]) : "");
        }
        for (int j = 0; j < k; ++j) {
            out << ',' << (record.std_errors.size() == k ? format_sci(record.std_errors[j]) : "");
        }
        out << "\n";
    }
}

} // namespace sim
} // namespace diffusia
