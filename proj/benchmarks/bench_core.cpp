#include <benchmark/benchmark.h>

#include "diffusia/competition.hpp"
#include "diffusia/estimation.hpp"
#include "diffusia/ode.hpp"
#include "diffusia/simulation.hpp"
#include "diffusia/special_functions.hpp"

namespace {

diffusia::CompetitionParams reference_params() {
    diffusia::CompetitionParams params;
    params.potential = diffusia::SqrtBassPotential{4.8669e7, 2.3837e-3, 4.5235e-2};
    params.p1 = 3.2004e-3;
    params.q1 = 1.4277e-2;
    params.p2 = -7.9208e-4;
    params.q2 = 1.2709e-3;
    params.delta = -2.2248e-2;
    return params;
}

void BM_BrandTrajectories(benchmark::State& state) {
    const diffusia::TrajectoryEvaluator eval(reference_params());
    double t = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval(t));
        t = t < 188.0 ? t + 1.0 : 1.0;
    }
}
BENCHMARK(BM_BrandTrajectories);

void BM_RegularizedGammaP(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(diffusia::regularized_gamma_p(2.5, x));
        x = x < 20.0 ? x + 0.1 : 0.1;
    }
}
BENCHMARK(BM_RegularizedGammaP);

void BM_IntegrateCompetition(benchmark::State& state) {
    const auto params = reference_params();
    diffusia::IntegrationConfig config;
    config.t_start = 0.5;
    config.t_end = 188.0;
    config.step = state.range(0) / 1000.0;
    const auto seed = diffusia::brand_trajectories(config.t_start, params);
    config.initial_state = {seed.z1, seed.z2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(diffusia::integrate_competition(params, config));
    }
}
BENCHMARK(BM_IntegrateCompetition)->Arg(100)->Arg(10);

void BM_FitNoiseless(benchmark::State& state) {
    diffusia::CompetitionParams params;
    params.potential = diffusia::SqrtBassPotential{1.0e6, 8.0e-3, 8.0e-2};
    params.p1 = 2.0e-3;
    params.q1 = 2.0e-2;
    params.p2 = 1.5e-3;
    params.q2 = 1.5e-2;
    params.delta = 6.0e-3;

    diffusia::sim::SimScenario scenario;
    scenario.true_params = params;
    scenario.n_months = 120;
    scenario.noise_to_signal = 0.0;
    scenario.fitted_model.model = diffusia::ModelKind::Cdmp;
    scenario.fitted_model.initial_values = params;
    const auto data = diffusia::sim::generate(scenario, 0);

    diffusia::FitConfig config = scenario.fitted_model;
    for (auto _ : state) {
        benchmark::DoNotOptimize(diffusia::fit(data, config));
    }
}
BENCHMARK(BM_FitNoiseless);

} // namespace

BENCHMARK_MAIN();
