#pragma once

#include <stdexcept>
#include <variant>

namespace diffusia {

/// Fixed market potential m(t) = m.
struct ConstantPotential {
    double m = 1.0;
};

/// Dynamic potential m(t) = K sqrt(w(t; pc, qc)): the square root of a
/// Bass-type communication curve describing latent knowledge diffusion.
struct SqrtBassPotential {
    double K = 1.0;
    double pc = 1e-3;
    double qc = 1e-2;
};

/// Dynamic potential m(t) = K w(t; pc, qc) (same communication curve,
/// without the square root).
struct BassCurvePotential {
    double K = 1.0;
    double pc = 1e-3;
    double qc = 1e-2;
};

/// Dynamic potential m(t) = K P(alpha1, alpha0 t), proportional to the CDF
/// of a Gamma(shape alpha1, rate alpha0) random variable.
struct GammaCdfPotential {
    double K = 1.0;
    double alpha0 = 0.05;
    double alpha1 = 2.0;
};

using PotentialSpec =
    std::variant<ConstantPotential, SqrtBassPotential, BassCurvePotential, GammaCdfPotential>;

/// Throws std::domain_error if any magnitude parameter is not strictly positive.
void validate(const PotentialSpec& spec);

/// Asymptotic potential: K (dynamic variants) or m (constant).
double asymptotic_potential(const PotentialSpec& spec);

/// Market potential m(t). Nondecreasing in t with finite limit for every variant.
double market_potential(double t, const PotentialSpec& spec);

/**
 * Analytic derivative m'(t). Zero for the constant variant, nonnegative for
 * all variants. The sqrt variant diverges at t = 0 (w(0) = 0 under the root),
 * so it requires t > 0 and throws std::domain_error otherwise.
 */
double market_potential_derivative(double t, const PotentialSpec& spec);

} // namespace diffusia
