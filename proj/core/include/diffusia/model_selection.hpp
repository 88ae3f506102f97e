#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diffusia/estimation.hpp"

namespace diffusia {

/// Robust F threshold for accepting the richer nested model.
inline constexpr double kRobustFThreshold = 4.0;

/// Nested-model comparison summary (full model M1 vs reduced M2).
struct ModelComparison {
    double r2_full;
    double r2_reduced;
    int n_obs;   // N (stacked observations)
    int k_full;  // parameters of M1
    int s;       // parameters dropped in M2
    double r2_partial;
    double f_stat;
    bool exceeds_robust_threshold;  // f_stat > 4
};

/// Squared multiple partial correlation (R2_M1 - R2_M2) / (1 - R2_M2).
/// Throws std::domain_error when r2_reduced >= 1.
double partial_r2(double r2_full, double r2_reduced);

/// Approximate F ratio [R~2 (N - k)] / [(1 - R~2) s].
/// Throws std::domain_error on r2_partial = 1 or N <= k or s < 1.
double f_ratio(double r2_partial, int n_obs, int k_full, int s);

/// Assembles a ModelComparison from two fits' R^2 values.
ModelComparison compare_nested(double r2_full, double r2_reduced, int n_obs, int k_full, int s);

/// One row of the market-potential comparison table.
struct PotentialComparisonRow {
    ModelKind model;
    bool fit_ok = false;
    std::string error;  // set when the fit failed outright
    double r_squared = 0.0;
    double rho_squared = 0.0;
    std::optional<ModelComparison> nested_vs_full;  // set for models nested in the CDMP row
    std::optional<FitResult> fit;
};

/**
 * Fits each spec to the same data and tabulates (model, R^2, rho^2) in the
 * given order (R^2 on cumulative data, rho^2 on instantaneous, as reported).
 * When both the CDMP and the constant-potential rows are present and share a
 * fit scale, the constant row carries the nested F test against CDMP (s = 2
 * dropped parameters), with the R^2 pair entering the partial correlation
 * computed on the fitted scale so it matches the minimized SSEs;
 * the other potentials are non-nested and report fit statistics only. If the
 * full model's SSE exceeds the reduced one's, it is refit warm-started from
 * the embedded reduced optimum so that nesting holds numerically. Per-row
 * fit failures are recorded without aborting the table.
 */
std::vector<PotentialComparisonRow> compare_potentials(const SalesSeries& data,
                                                       const std::vector<FitConfig>& specs);

} // namespace diffusia
