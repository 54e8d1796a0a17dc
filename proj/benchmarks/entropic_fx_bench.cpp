#include <benchmark/benchmark.h>

#include <cmath>

#include "entropic_fx/dynamics.hpp"
#include "entropic_fx/fokker_planck.hpp"
#include "entropic_fx/maxent.hpp"
#include "entropic_fx/pricing.hpp"

namespace {

using namespace efx;

const MarketParams kMarket = MarketParams::risk_neutral(1.0, 0.05, 0.02, 0.2);
const pricing::OptionSpec kCall{pricing::OptionKind::call, 1.0, 1.0};

void BM_ClosedForm(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(pricing::closed_form_price(kMarket, kCall).premium);
}
BENCHMARK(BM_ClosedForm);

void BM_ClosedFormFarOutOfTheMoney(benchmark::State& state) {
    const pricing::OptionSpec otm{pricing::OptionKind::call, 3.0, 0.25};
    for (auto _ : state) benchmark::DoNotOptimize(pricing::closed_form_price(kMarket, otm).premium);
}
BENCHMARK(BM_ClosedFormFarOutOfTheMoney);

void BM_Quadrature(benchmark::State& state) {
    const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pricing::quadrature_price(kMarket, kCall, tol).premium);
}
BENCHMARK(BM_Quadrature)->Arg(8)->Arg(10)->Arg(12);

void BM_MonteCarlo(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pricing::mc_price(kMarket, kCall, n, 1).premium);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_Pde(benchmark::State& state) {
    const auto grid = pricing::default_pde_grid(kMarket, kCall, static_cast<std::size_t>(state.range(0)), 400);
    for (auto _ : state) benchmark::DoNotOptimize(pricing::pde_price(kMarket, kCall, grid).premium);
}
BENCHMARK(BM_Pde)->Arg(801)->Arg(1601)->Arg(3201)->Unit(benchmark::kMillisecond);

void BM_SimulatePaths(benchmark::State& state) {
    const auto params = MarketParams::physical(1.0, 0.05, 0.02, 0.2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dynamics::simulate_paths(params, 1.0, 12, static_cast<std::size_t>(state.range(0)), 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 12);
}
BENCHMARK(BM_SimulatePaths)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_EvolveDensity(benchmark::State& state) {
    const auto params = MarketParams::physical(1.0, 0.03, 0.03, 0.2);
    const auto spec = fokker_planck::default_grid(params, 1.0, 1e-4, static_cast<std::size_t>(state.range(0)));
    const auto initial = DensityGrid::gaussian(spec.grid(), 0.0, 1e-4);
    for (auto _ : state) benchmark::DoNotOptimize(fokker_planck::evolve_density(initial, params, 1.0, spec));
}
BENCHMARK(BM_EvolveDensity)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond);

void BM_SolveMaxent(benchmark::State& state) {
    const double k = 0.04 / 12.0, m = 0.001;
    const auto grid = UniformGrid::from_bounds(m - 10.0 * std::sqrt(k), m + 10.0 * std::sqrt(k), 1156);
    const auto prior = DensityGrid::uniform(grid);
    maxent::ConstraintSpec spec;
    spec.first_moment(m).second_central_moment(0.0, k + m * m);
    for (auto _ : state) benchmark::DoNotOptimize(maxent::solve_maxent(prior, spec).residual_norm);
}
BENCHMARK(BM_SolveMaxent)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
