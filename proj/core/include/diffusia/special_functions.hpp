#pragma once

namespace diffusia {

/**
 * Regularized lower incomplete gamma function P(a, x).
 *
 * Series expansion for x < a+1, continued fraction otherwise; both
 * iterated to a relative tolerance of 1e-15 (well inside the 1e-12
 * requirement of the gamma-CDF market potential).
 *
 * Throws std::domain_error for a <= 0 or x < 0.
 */
double regularized_gamma_p(double a, double x);

/// Gamma density with rate `alpha0` and shape `alpha1`, f(t; alpha0, alpha1).
double gamma_pdf(double t, double alpha0, double alpha1);

/**
 * Inverse standard normal CDF (Acklam's rational approximation with one
 * Halley refinement step; absolute error below 1e-12).
 *
 * Throws std::domain_error unless 0 < p < 1.
 */
double normal_quantile(double p);

} // namespace diffusia
