#pragma once

#include "diffusia/potential.hpp"

namespace diffusia {

/// Cumulative (or rate) values for the two competing brands.
struct BrandPair {
    double z1;
    double z2;
};

/**
 * Full parameter vector of the two-brand competition model: a shared market
 * potential plus per-brand innovation (p1, p2) and word-of-mouth (q1, q2)
 * coefficients, and the within/cross asymmetry delta.
 *
 * Individual p's, q's and delta are not sign-constrained; only the sums
 * ps = p1 + p2 and qs = q1 + q2 must be positive for the closed forms to
 * exist.
 */
struct CompetitionParams {
    PotentialSpec potential = ConstantPotential{1.0};
    double p1 = 1e-3;
    double q1 = 1e-2;
    double p2 = 1e-4;
    double q2 = 1e-2;
    double delta = 0.0;

    double ps() const { return p1 + p2; }
    double qs() const { return q1 + q2; }

    /// Throws std::domain_error when ps <= 0, qs <= 0, or the potential is invalid.
    void validate() const;
};

/// Branch-dispatch half-width for the degenerate cases delta = 0 and delta = qs.
inline constexpr double kDeltaBranchEpsilon = 1e-9;

/**
 * Auxiliary curve y(t) = 1 + (qs/ps) w(t; ps, qs).
 *
 * y(0) = 1 and y -> 1 + qs/ps as t -> infinity. Throws std::domain_error
 * if ps <= 0.
 */
double aux_y(double t, double ps, double qs);

/**
 * Numerically stable evaluation of (y^{delta/qs} - 1) / (delta/qs),
 * computed as expm1((delta/qs) ln y) / (delta/qs), and continued by ln y
 * at delta = 0. Continuous and monotone in delta for fixed y > 1.
 *
 * Requires y >= 1 and qs != 0.
 */
double power_ratio(double y, double delta, double qs);

/**
 * Closed-form mean cumulative sales (z1(t), z2(t)) of the competition system.
 *
 * |delta - qs| <= eps dispatches to the y ln y branch (the one genuine
 * singularity); everything else, including delta = 0, goes through the
 * general formula, whose power_ratio bracket evaluates the delta = 0 form
 * exactly and stays continuous through it. The two components always sum to
 * market_potential(t) * w(t; ps, qs): brand 2's coefficients are computed as
 * exact complements of brand 1's, so the sum identity holds to rounding on
 * every branch.
 */
BrandPair brand_trajectories(double t, const CompetitionParams& params);

/**
 * Reusable closed-form evaluator: validates the parameters and resolves the
 * delta branch once, then evaluates trajectories for many t. Equivalent to
 * brand_trajectories at every t; estimation and forecasting use it to avoid
 * re-dispatching inside residual loops.
 */
class TrajectoryEvaluator {
  public:
    explicit TrajectoryEvaluator(CompetitionParams params);

    BrandPair operator()(double t) const;

    const CompetitionParams& params() const { return params_; }

  private:
    enum class Branch { General, DeltaEqualQs };

    CompetitionParams params_;
    double ps_;
    double qs_;
    double a1_;  // brand-1 coefficient on w
    double b1_;  // brand-1 coefficient on the delta bracket
    Branch branch_;
};

/**
 * Instantaneous mean sales (z1'(t), z2'(t)): the right-hand sides of the
 * coupled system evaluated at the closed-form state, including the
 * self-reinforcing z_i m'(t)/m(t) terms.
 *
 * Requires t > 0 (m'/m diverges at 0 for the sqrt potential). Throws
 * std::domain_error if z1 + z2 exceeds m(t) beyond numerical tolerance.
 */
BrandPair instantaneous_rates(double t, const CompetitionParams& params);

/// Per-brand (innovation, within-brand WOM, cross-brand WOM) coefficient triples.
struct EffectiveCoefficients {
    struct Brand {
        double innovation;
        double within_wom;
        double cross_wom;
    };
    Brand brand1;  // (p1, q1 + delta, q1)
    Brand brand2;  // (p2, q2, q2 - delta)
};

EffectiveCoefficients effective_coefficients(const CompetitionParams& params);

} // namespace diffusia
