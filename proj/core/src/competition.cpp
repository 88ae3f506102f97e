#include "diffusia/competition.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "diffusia/bass.hpp"

namespace diffusia {

void CompetitionParams::validate() const {
    diffusia::validate(potential);
    if (!(ps() > 0.0)) throw std::domain_error("CompetitionParams: p1 + p2 must be positive");
    if (!(qs() > 0.0)) throw std::domain_error("CompetitionParams: q1 + q2 must be positive");
}

double aux_y(double t, double ps, double qs) {
    if (!(ps > 0.0)) throw std::domain_error("aux_y: ps must be positive");
    return 1.0 + (qs / ps) * bass_w(t, ps, qs);
}

double power_ratio(double y, double delta, double qs) {
    if (y < 1.0) throw std::domain_error("power_ratio: y must be >= 1");
    if (qs == 0.0) throw std::domain_error("power_ratio: qs must be nonzero");
    const double logy = std::log(y);
    const double r = delta / qs;
    if (r == 0.0) return logy;
    return std::expm1(r * logy) / r;
}

TrajectoryEvaluator::TrajectoryEvaluator(CompetitionParams params)
    : params_(std::move(params)) {
    params_.validate();
    ps_ = params_.ps();
    qs_ = params_.qs();
    const double delta = params_.delta;

    // Brand-1 coefficients (a1 on w, b1 on the bracket). Brand 2 always takes
    // the exact complements (1 - a1, -b1), the same algebra after
    // substituting ps = p1 + p2 and qs = q1 + q2, which makes the sum
    // identity z1 + z2 = m(t) w(t; ps, qs) hold to rounding on every branch.
    //
    // Only delta = qs is a genuine singularity. The delta = 0 case needs no
    // branch of its own: power_ratio is exact there (ln y) and continuous
    // through it, so the general path evaluates the delta = 0 formula
    // bit-for-bit at delta = 0 while staying responsive to perturbations
    // smaller than the dispatch epsilon (finite-difference Jacobians probe
    // |delta| ~ 1e-10).
    if (std::fabs(delta - qs_) <= kDeltaBranchEpsilon) {
        branch_ = Branch::DeltaEqualQs;
        a1_ = params_.p1 / ps_ - params_.q1 / qs_;
        b1_ = params_.q1 * ps_ / (qs_ * qs_);
    } else {
        if (std::fabs(qs_ - delta) <= kDeltaBranchEpsilon) {
            throw std::domain_error(
                "brand_trajectories: delta too close to qs for the general branch");
        }
        branch_ = Branch::General;
        a1_ = params_.q1 / (qs_ - delta);
        b1_ = (ps_ / qs_) * (params_.p1 / ps_ - a1_);
    }
}

BrandPair TrajectoryEvaluator::operator()(double t) const {
    if (t < 0.0) throw std::domain_error("brand_trajectories: t must be nonnegative");

    const double mt = market_potential(t, params_.potential);
    const double wt = bass_w(t, ps_, qs_);

    double bracket;
    if (branch_ == Branch::DeltaEqualQs) {
        // z1 = m [ (p1/ps - q1/qs) w + (q1 ps / qs^2) y ln y ]
        const double yt = aux_y(t, ps_, qs_);
        bracket = yt * std::log(yt);
    } else {
        // z1 = m [ a1 w + (ps/qs)(p1/ps - a1) (y^{delta/qs} - 1)/(delta/qs) ],
        // with the bracket reducing to ln y at delta = 0.
        bracket = power_ratio(aux_y(t, ps_, qs_), params_.delta, qs_);
    }

    const double share1 = a1_ * wt + b1_ * bracket;
    const double share2 = (1.0 - a1_) * wt - b1_ * bracket;
    return {mt * share1, mt * share2};
}

BrandPair brand_trajectories(double t, const CompetitionParams& params) {
    return TrajectoryEvaluator(params)(t);
}

BrandPair instantaneous_rates(double t, const CompetitionParams& params) {
    params.validate();
    if (!(t > 0.0)) throw std::domain_error("instantaneous_rates: t must be positive");

    const auto [z1, z2] = brand_trajectories(t, params);
    const double mt = market_potential(t, params.potential);
    const double mp = market_potential_derivative(t, params.potential);

    const double total = z1 + z2;
    if (total > mt * (1.0 + 1e-9)) {
        throw std::domain_error("instantaneous_rates: z1 + z2 exceeds m(t)");
    }

    const double residual = 1.0 - total / mt;
    const double r1 =
        mt * (params.p1 + (params.q1 + params.delta) * z1 / mt + params.q1 * z2 / mt) * residual +
        z1 * mp / mt;
    const double r2 =
        mt * (params.p2 + (params.q2 - params.delta) * z1 / mt + params.q2 * z2 / mt) * residual +
        z2 * mp / mt;
    return {r1, r2};
}

EffectiveCoefficients effective_coefficients(const CompetitionParams& params) {
    return {{params.p1, params.q1 + params.delta, params.q1},
            {params.p2, params.q2, params.q2 - params.delta}};
}

} // namespace diffusia
