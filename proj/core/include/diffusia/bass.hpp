#pragma once

#include <cmath>
#include <stdexcept>

namespace diffusia {

/// Bass diffusion parameters: market potential m, innovation coefficient p,
/// imitation coefficient q. Units: m in packages, p and q in 1/month.
struct BassParams {
    double m;
    double p;
    double q;

    void validate() const {
        if (!(m > 0.0)) throw std::domain_error("BassParams: m must be positive");
        if (!(p > 0.0)) throw std::domain_error("BassParams: p must be positive");
        if (q < 0.0) throw std::domain_error("BassParams: q must be nonnegative");
    }
};

/**
 * Normalized Bass adoption curve
 *
 *   w(t; p, q) = (1 - e^{-(p+q)t}) / (1 + (q/p) e^{-(p+q)t}),
 *
 * the fraction of the market reached at time t. w(0) = 0, strictly
 * increasing, w -> 1 as t -> infinity.
 */
inline double bass_w(double t, double p, double q) {
    if (t < 0.0) throw std::domain_error("bass_w: t must be nonnegative");
    if (!(p > 0.0)) throw std::domain_error("bass_w: p must be positive");
    if (!(p + q > 0.0)) throw std::domain_error("bass_w: p + q must be positive");
    const double e = std::exp(-(p + q) * t);
    return (1.0 - e) / (1.0 + (q / p) * e);
}

/// Time derivative of w, from the Bass equation: w' = (p + q w)(1 - w).
inline double bass_w_rate(double t, double p, double q) {
    const double wt = bass_w(t, p, q);
    return (p + q * wt) * (1.0 - wt);
}

/// Mean cumulative sales m * w(t; p, q).
inline double bass_cumulative(double t, const BassParams& params) {
    params.validate();
    return params.m * bass_w(t, params.p, params.q);
}

} // namespace diffusia
