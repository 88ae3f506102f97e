#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "diffusia/competition.hpp"

namespace diffusia {

/// Raised when an RK4 trajectory leaves the [0, m(t)] envelope, which signals
/// invalid parameters or a step too large for the dynamics.
class IntegrationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Fixed-step RK4 configuration. The step is snapped to divide the interval
/// into a whole number of steps.
struct IntegrationConfig {
    double t_start;
    double t_end;
    double step;
    std::array<double, 2> initial_state{0.0, 0.0};

    /// Envelope slack, relative to m(t), tolerated before integration fails.
    double envelope_tolerance = 1e-6;

    void validate(const PotentialSpec& potential) const;
};

struct TrajectorySample {
    double t;
    double z1;
    double z2;
};

struct UnivariateSample {
    double t;
    double z;
};

/**
 * Classical fixed-step RK4 integration of the two-brand competition system,
 * used as the brute-force oracle for the closed forms. The right-hand side is
 * evaluated directly from the system's definition (never through the closed
 * forms). Returns a sample at t_start and after every step.
 *
 * Throws IntegrationError if the category sum z1 + z2 leaves [0, m(t)] by
 * more than the configured tolerance.
 */
std::vector<TrajectorySample> integrate_competition(const CompetitionParams& params,
                                                    const IntegrationConfig& config);

/**
 * RK4 integration of the univariate dynamic-potential equation
 * z' = m(t)[ps + qs z/m][1 - z/m] + z m'/m. One state dimension; same
 * envelope contract as integrate_competition (initial_state[0] is used).
 */
std::vector<UnivariateSample> integrate_univariate(const PotentialSpec& potential, double ps,
                                                   double qs, const IntegrationConfig& config);

} // namespace diffusia
