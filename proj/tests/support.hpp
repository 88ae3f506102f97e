#pragma once

#include <cmath>
#include <cstdint>

#include "diffusia/competition.hpp"
#include "diffusia/rng.hpp"

namespace testsupport {

// Reference CDMP parameter set used throughout the suite (sqrt potential,
// mixed-sign p2 and delta, monthly units).
inline diffusia::CompetitionParams reference_params() {
    diffusia::CompetitionParams params;
    params.potential = diffusia::SqrtBassPotential{4.8669e7, 2.3837e-3, 4.5235e-2};
    params.p1 = 3.2004e-3;
    params.q1 = 1.4277e-2;
    params.p2 = -7.9208e-4;
    params.q2 = 1.2709e-3;
    params.delta = -2.2248e-2;
    return params;
}

// Well-behaved truth vector with every effective coefficient positive, so
// monthly signals stay positive and synthetic series need no truncation.
inline diffusia::CompetitionParams positive_signal_params() {
    diffusia::CompetitionParams params;
    params.potential = diffusia::SqrtBassPotential{1.0e6, 8.0e-3, 8.0e-2};
    params.p1 = 2.0e-3;
    params.q1 = 2.0e-2;
    params.p2 = 1.5e-3;
    params.q2 = 1.5e-2;
    params.delta = 6.0e-3;
    return params;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

inline double uniform_in(diffusia::SplitMix64& rng, double lo, double hi) {
    return lo + (hi - lo) * rng.next_uniform();
}

/**
 * Draws a random valid parameter vector. Potential variants rotate through
 * all four families; every ~10th draw lands exactly on delta = 0 or
 * delta = qs so all three closed-form branches get exercised.
 */
inline diffusia::CompetitionParams random_params(diffusia::SplitMix64& rng, int index,
                                                 bool nonnegative_rates = false) {
    diffusia::CompetitionParams params;
    const double K = std::pow(10.0, uniform_in(rng, 2.0, 8.0));
    const double pc = uniform_in(rng, 1e-4, 0.05);
    const double qc = uniform_in(rng, 1e-3, 0.3);
    switch (index % 4) {
        case 0: params.potential = diffusia::SqrtBassPotential{K, pc, qc}; break;
        case 1: params.potential = diffusia::ConstantPotential{K}; break;
        case 2: params.potential = diffusia::BassCurvePotential{K, pc, qc}; break;
        default:
            params.potential =
                diffusia::GammaCdfPotential{K, uniform_in(rng, 0.01, 0.5), uniform_in(rng, 0.5, 4.0)};
    }

    if (nonnegative_rates) {
        params.p1 = uniform_in(rng, 1e-5, 0.02);
        params.p2 = uniform_in(rng, 1e-5, 0.02);
        params.q1 = uniform_in(rng, 1e-4, 0.15);
        params.q2 = uniform_in(rng, 1e-4, 0.15);
        // Keep every effective coefficient nonnegative: -q2 <= delta <= q1
        // would flip signs, so stay well inside.
        params.delta = uniform_in(rng, -0.5 * params.q2, 0.5 * params.q1);
    } else {
        do {
            params.p1 = uniform_in(rng, -0.005, 0.02);
            params.p2 = uniform_in(rng, -0.005, 0.02);
        } while (!(params.ps() > 1e-4));
        do {
            params.q1 = uniform_in(rng, -0.05, 0.2);
            params.q2 = uniform_in(rng, -0.05, 0.2);
        } while (!(params.qs() > 1e-3));
        params.delta = uniform_in(rng, -0.08, 0.08);
    }

    if (index % 10 == 7) params.delta = 0.0;
    if (index % 10 == 9) params.delta = params.qs();
    return params;
}

/**
 * Parameter draws for the branch-continuity checks: diffusion-plausible
 * positive rates with qs bounded away from zero. Near the removable
 * singularities the comparison mixes numerical error with the true model
 * sensitivity (of order |dz/ddelta| x 1e-8, which scales like 1/qs), so tiny
 * qs would push even an exact evaluation outside the 1e-6 window.
 */
inline diffusia::CompetitionParams random_params_continuity(diffusia::SplitMix64& rng,
                                                            int index) {
    diffusia::CompetitionParams params;
    const double K = std::pow(10.0, uniform_in(rng, 3.0, 7.0));
    const double pc = uniform_in(rng, 1e-3, 0.02);
    const double qc = uniform_in(rng, 0.01, 0.15);
    switch (index % 3) {
        case 0: params.potential = diffusia::SqrtBassPotential{K, pc, qc}; break;
        case 1: params.potential = diffusia::ConstantPotential{K}; break;
        default: params.potential = diffusia::BassCurvePotential{K, pc, qc};
    }
    params.p1 = uniform_in(rng, 1e-3, 0.01);
    params.p2 = uniform_in(rng, 1e-3, 0.01);
    params.q1 = uniform_in(rng, 0.012, 0.1);
    params.q2 = uniform_in(rng, 0.012, 0.1);
    params.delta = 0.0;
    return params;
}

} // namespace testsupport
