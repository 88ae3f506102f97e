#include "diffusia/potential.hpp"

#include <cmath>

#include "diffusia/bass.hpp"
#include "diffusia/special_functions.hpp"

namespace diffusia {

namespace {

struct Validator {
    void operator()(const ConstantPotential& c) const {
        if (!(c.m > 0.0)) throw std::domain_error("ConstantPotential: m must be positive");
    }
    void operator()(const SqrtBassPotential& s) const {
        if (!(s.K > 0.0)) throw std::domain_error("SqrtBassPotential: K must be positive");
        if (!(s.pc > 0.0) || !(s.qc > 0.0)) {
            throw std::domain_error("SqrtBassPotential: pc and qc must be positive");
        }
    }
    void operator()(const BassCurvePotential& s) const {
        if (!(s.K > 0.0)) throw std::domain_error("BassCurvePotential: K must be positive");
        if (!(s.pc > 0.0) || !(s.qc > 0.0)) {
            throw std::domain_error("BassCurvePotential: pc and qc must be positive");
        }
    }
    void operator()(const GammaCdfPotential& g) const {
        if (!(g.K > 0.0)) throw std::domain_error("GammaCdfPotential: K must be positive");
        if (!(g.alpha0 > 0.0) || !(g.alpha1 > 0.0)) {
            throw std::domain_error("GammaCdfPotential: alpha0 and alpha1 must be positive");
        }
    }
};

} // namespace

void validate(const PotentialSpec& spec) { std::visit(Validator{}, spec); }

double asymptotic_potential(const PotentialSpec& spec) {
    return std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantPotential>) {
                return v.m;
            } else {
                return v.K;
            }
        },
        spec);
}

double market_potential(double t, const PotentialSpec& spec) {
    validate(spec);
    if (t < 0.0) throw std::domain_error("market_potential: t must be nonnegative");
    return std::visit(
        [t](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantPotential>) {
                return v.m;
            } else if constexpr (std::is_same_v<T, SqrtBassPotential>) {
                return v.K * std::sqrt(bass_w(t, v.pc, v.qc));
            } else if constexpr (std::is_same_v<T, BassCurvePotential>) {
                return v.K * bass_w(t, v.pc, v.qc);
            } else {
                return v.K * regularized_gamma_p(v.alpha1, v.alpha0 * t);
            }
        },
        spec);
}

double market_potential_derivative(double t, const PotentialSpec& spec) {
    validate(spec);
    return std::visit(
        [t](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantPotential>) {
                if (t < 0.0) throw std::domain_error("market_potential_derivative: t < 0");
                return 0.0;
            } else if constexpr (std::is_same_v<T, SqrtBassPotential>) {
                // m' = K w' / (2 sqrt(w)); unbounded as t -> 0+.
                if (!(t > 0.0)) {
                    throw std::domain_error(
                        "market_potential_derivative: sqrt potential requires t > 0");
                }
                const double wt = bass_w(t, v.pc, v.qc);
                const double wp = (v.pc + v.qc * wt) * (1.0 - wt);
                return v.K * wp / (2.0 * std::sqrt(wt));
            } else if constexpr (std::is_same_v<T, BassCurvePotential>) {
                if (t < 0.0) throw std::domain_error("market_potential_derivative: t < 0");
                return v.K * bass_w_rate(t, v.pc, v.qc);
            } else {
                if (t < 0.0) throw std::domain_error("market_potential_derivative: t < 0");
                return v.K * gamma_pdf(t, v.alpha0, v.alpha1);
            }
        },
        spec);
}

} // namespace diffusia
