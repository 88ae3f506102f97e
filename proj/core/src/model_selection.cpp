#include "diffusia/model_selection.hpp"

#include <stdexcept>

#include "diffusia/parallel.hpp"

namespace diffusia {

double partial_r2(double r2_full, double r2_reduced) {
    if (r2_reduced >= 1.0) {
        throw std::domain_error("partial_r2: reduced-model R^2 must be below 1");
    }
    return (r2_full - r2_reduced) / (1.0 - r2_reduced);
}

double f_ratio(double r2_partial, int n_obs, int k_full, int s) {
    if (n_obs <= k_full) throw std::domain_error("f_ratio: need n_obs > k_full");
    if (s < 1) throw std::domain_error("f_ratio: need s >= 1");
    if (r2_partial >= 1.0) throw std::domain_error("f_ratio: r2_partial must be below 1");
    return (r2_partial * static_cast<double>(n_obs - k_full)) / ((1.0 - r2_partial) * s);
}

ModelComparison compare_nested(double r2_full, double r2_reduced, int n_obs, int k_full, int s) {
    ModelComparison cmp;
    cmp.r2_full = r2_full;
    cmp.r2_reduced = r2_reduced;
    cmp.n_obs = n_obs;
    cmp.k_full = k_full;
    cmp.s = s;
    cmp.r2_partial = partial_r2(r2_full, r2_reduced);
    cmp.f_stat = f_ratio(cmp.r2_partial, n_obs, k_full, s);
    cmp.exceeds_robust_threshold = cmp.f_stat > kRobustFThreshold;
    return cmp;
}

namespace {

// Embeds a constant-potential optimum in the CDMP space: pc = qc = 5 makes
// the communication curve saturate within the first month, so m(t) ~ K = m.
FitConfig embedded_warm_start(const FitConfig& full_config, const FitResult& reduced) {
    FitConfig warm = full_config;
    CompetitionParams init = reduced.estimates;
    const double m_hat = std::get<ConstantPotential>(reduced.estimates.potential).m;
    init.potential = SqrtBassPotential{m_hat, 5.0, 5.0};
    warm.initial_values = init;
    return warm;
}

// Centered total sum of squares of the stacked observations on the fitted
// scale; 1 - SSE/SST of a fit against this is the R^2 entering the F test.
double stacked_sst(const SalesSeries& data, FitScale scale) {
    const auto& b1 = (scale == FitScale::Cumulative) ? data.cum1 : data.sales1;
    const auto& b2 = (scale == FitScale::Cumulative) ? data.cum2 : data.sales2;
    double mean = 0.0;
    for (std::size_t i = 0; i < b1.size(); ++i) mean += b1[i] + b2[i];
    mean /= static_cast<double>(2 * b1.size());
    double sst = 0.0;
    for (std::size_t i = 0; i < b1.size(); ++i) {
        sst += (b1[i] - mean) * (b1[i] - mean) + (b2[i] - mean) * (b2[i] - mean);
    }
    return sst;
}

} // namespace

std::vector<PotentialComparisonRow> compare_potentials(const SalesSeries& data,
                                                       const std::vector<FitConfig>& specs) {
    std::vector<PotentialComparisonRow> rows(specs.size());

    parallel_for(specs.size(), [&](std::size_t i) {
        rows[i].model = specs[i].model;
        try {
            FitResult result = fit(data, specs[i]);
            rows[i].fit_ok = true;
            rows[i].r_squared = result.r_squared;
            rows[i].rho_squared = result.rho_squared;
            rows[i].fit = std::move(result);
        } catch (const std::exception& e) {
            rows[i].fit_ok = false;
            rows[i].error = e.what();
        }
    });

    // Locate the CDMP and constant rows for the nested comparison. The F is
    // built from R^2 on the scale the models were fitted on (matching SSEs),
    // so both fits must share a scale.
    PotentialComparisonRow* full_row = nullptr;
    PotentialComparisonRow* reduced_row = nullptr;
    std::size_t full_index = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].model == ModelKind::Cdmp && rows[i].fit_ok && !full_row) {
            full_row = &rows[i];
            full_index = i;
        }
        if (rows[i].model == ModelKind::ConstantPotential && rows[i].fit_ok && !reduced_row) {
            reduced_row = &rows[i];
        }
    }
    if (!full_row || !reduced_row) return rows;
    if (full_row->fit->scale != reduced_row->fit->scale) return rows;

    // Nesting must hold numerically: warm-start the full model from the
    // embedded reduced optimum if the first fit scored below it.
    if (full_row->fit->sse > reduced_row->fit->sse) {
        try {
            FitResult refit = fit(data, embedded_warm_start(specs[full_index], *reduced_row->fit));
            if (refit.sse < full_row->fit->sse) {
                full_row->r_squared = refit.r_squared;
                full_row->rho_squared = refit.rho_squared;
                full_row->fit = std::move(refit);
            }
        } catch (const std::exception&) {
            // keep the original fit
        }
    }

    const double sst = stacked_sst(data, full_row->fit->scale);
    const double r2_full = 1.0 - full_row->fit->sse / sst;
    const double r2_reduced = 1.0 - reduced_row->fit->sse / sst;
    const int k_full = full_row->fit->n_params;
    const int s = k_full - reduced_row->fit->n_params;
    reduced_row->nested_vs_full =
        compare_nested(r2_full, r2_reduced, full_row->fit->n_obs, k_full, s);
    return rows;
}

} // namespace diffusia
