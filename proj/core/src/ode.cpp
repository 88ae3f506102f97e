#include "diffusia/ode.hpp"

#include <cmath>

#include "diffusia/potential.hpp"

namespace diffusia {

void IntegrationConfig::validate(const PotentialSpec& potential) const {
    if (!(t_end > t_start) || t_start < 0.0) {
        throw std::domain_error("IntegrationConfig: need t_end > t_start >= 0");
    }
    if (!(step > 0.0) || step > (t_end - t_start)) {
        throw std::domain_error("IntegrationConfig: need 0 < step <= t_end - t_start");
    }
    const double m0 = market_potential(t_start, potential);
    const double total = initial_state[0] + initial_state[1];
    // Envelope constraint on the category sum. Individual components may be
    // negative (the closed form itself dips below zero when a brand carries
    // negative innovation or word-of-mouth coefficients).
    if (total < -envelope_tolerance * m0 || total > m0 * (1.0 + envelope_tolerance)) {
        throw std::domain_error("IntegrationConfig: initial state outside [0, m(t_start)]");
    }
}

namespace {

int step_count(const IntegrationConfig& config) {
    return static_cast<int>(std::lround((config.t_end - config.t_start) / config.step));
}

template <typename State, typename Rhs>
State rk4_step(const Rhs& rhs, double t, double h, const State& z) {
    const State k1 = rhs(t, z);
    State zt;
    for (std::size_t i = 0; i < z.size(); ++i) zt[i] = z[i] + 0.5 * h * k1[i];
    const State k2 = rhs(t + 0.5 * h, zt);
    for (std::size_t i = 0; i < z.size(); ++i) zt[i] = z[i] + 0.5 * h * k2[i];
    const State k3 = rhs(t + 0.5 * h, zt);
    for (std::size_t i = 0; i < z.size(); ++i) zt[i] = z[i] + h * k3[i];
    const State k4 = rhs(t + h, zt);
    State out;
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = z[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

void check_envelope(double total, double mt, double tol, double t) {
    if (total < -tol * mt || total > mt * (1.0 + tol)) {
        throw IntegrationError("integration left the [0, m(t)] envelope at t = " +
                               std::to_string(t));
    }
}

} // namespace

std::vector<TrajectorySample> integrate_competition(const CompetitionParams& params,
                                                    const IntegrationConfig& config) {
    params.validate();
    config.validate(params.potential);

    // The system's right-hand side, written out from its definition. This is
    // deliberately independent of the closed forms it certifies.
    const auto rhs = [&params](double t, const std::array<double, 2>& z) {
        const double mt = market_potential(t, params.potential);
        const double mp = market_potential_derivative(t, params.potential);
        const double residual = 1.0 - (z[0] + z[1]) / mt;
        const double growth = mp / mt;
        return std::array<double, 2>{
            mt * (params.p1 + (params.q1 + params.delta) * z[0] / mt + params.q1 * z[1] / mt) *
                    residual +
                z[0] * growth,
            mt * (params.p2 + (params.q2 - params.delta) * z[0] / mt + params.q2 * z[1] / mt) *
                    residual +
                z[1] * growth};
    };

    const int n = step_count(config);
    const double h = (config.t_end - config.t_start) / n;

    std::vector<TrajectorySample> samples;
    samples.reserve(static_cast<std::size_t>(n) + 1);
    std::array<double, 2> z = config.initial_state;
    samples.push_back({config.t_start, z[0], z[1]});
    for (int i = 0; i < n; ++i) {
        const double t = config.t_start + i * h;
        z = rk4_step(rhs, t, h, z);
        const double tn = config.t_start + (i + 1) * h;
        check_envelope(z[0] + z[1], market_potential(tn, params.potential),
                       config.envelope_tolerance, tn);
        samples.push_back({tn, z[0], z[1]});
    }
    return samples;
}

std::vector<UnivariateSample> integrate_univariate(const PotentialSpec& potential, double ps,
                                                   double qs, const IntegrationConfig& config) {
    validate(potential);
    if (!(ps > 0.0) || !(qs > 0.0)) {
        throw std::domain_error("integrate_univariate: ps and qs must be positive");
    }
    config.validate(potential);

    const auto rhs = [&](double t, const std::array<double, 1>& z) {
        const double mt = market_potential(t, potential);
        const double mp = market_potential_derivative(t, potential);
        return std::array<double, 1>{mt * (ps + qs * z[0] / mt) * (1.0 - z[0] / mt) +
                                     z[0] * mp / mt};
    };

    const int n = step_count(config);
    const double h = (config.t_end - config.t_start) / n;

    std::vector<UnivariateSample> samples;
    samples.reserve(static_cast<std::size_t>(n) + 1);
    std::array<double, 1> z{config.initial_state[0]};
    samples.push_back({config.t_start, z[0]});
    for (int i = 0; i < n; ++i) {
        const double t = config.t_start + i * h;
        z = rk4_step(rhs, t, h, z);
        const double tn = config.t_start + (i + 1) * h;
        check_envelope(z[0], market_potential(tn, potential), config.envelope_tolerance, tn);
        samples.push_back({tn, z[0]});
    }
    return samples;
}

} // namespace diffusia
