#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "nmm/curve.hpp"
#include "nmm/gas.hpp"
#include "nmm/level_spacing.hpp"
#include "nmm/orthopoly.hpp"
#include "nmm/poly_roots.hpp"
#include "nmm/schwarz.hpp"
#include "nmm/toda.hpp"

using nmm::cplx;

namespace {

const nmm::PolynomialCurve kHypotrochoid{0.3, {0.0, 0.0, 0.027}};
const nmm::HarmonicMoments kEllipseMoments{0.21, {0.0, 0.2}};

void BM_MomentsContour(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(nmm::moments_of_curve(kHypotrochoid, 5));
}
BENCHMARK(BM_MomentsContour);

void BM_MomentsSeries(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(nmm::moments_of_curve_series(kHypotrochoid, 5));
}
BENCHMARK(BM_MomentsSeries);

void BM_CurveFromMoments(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(nmm::curve_from_moments(kEllipseMoments));
}
BENCHMARK(BM_CurveFromMoments);

void BM_SchwarzEval(benchmark::State& state) {
    cplx z(0.9, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(nmm::schwarz_eval(kHypotrochoid, z));
}
BENCHMARK(BM_SchwarzEval);

void BM_VerifyFlow(benchmark::State& state) {
    nmm::HarmonicMoments moments{0.1, {0.0, 0.1}};
    for (auto _ : state) benchmark::DoNotOptimize(nmm::verify_flow(moments, 2, 1e-4));
}
BENCHMARK(BM_VerifyFlow);

void BM_BuildFamily(benchmark::State& state) {
    int n_max = static_cast<int>(state.range(0));
    nmm::PotentialSpec pot{0.1, {0.0, 0.2}, 32};
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, n_max), 200,
                                std::max(128, 4 * n_max + 16));
    for (auto _ : state) benchmark::DoNotOptimize(nmm::build_family(pot, grid, n_max));
}
BENCHMARK(BM_BuildFamily)->Arg(12)->Arg(26);

void BM_OperatorMatrices(benchmark::State& state) {
    nmm::PotentialSpec pot{0.1, {0.0, 0.2}, 24};
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, 24), 200, 128);
    auto family = nmm::build_family(pot, grid, 24);
    for (auto _ : state) benchmark::DoNotOptimize(nmm::operator_matrices(family));
}
BENCHMARK(BM_OperatorMatrices);

void BM_PolynomialZeros(benchmark::State& state) {
    nmm::PotentialSpec pot{0.1, {0.0, 0.2}, 40};
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, 40), 220, 192);
    auto family = nmm::build_family(pot, grid, 40);
    for (auto _ : state) benchmark::DoNotOptimize(nmm::polynomial_zeros(family, 40));
}
BENCHMARK(BM_PolynomialZeros);

void BM_GasSweeps(benchmark::State& state) {
    nmm::PotentialSpec pot{0.1, {0.0, 0.2}, 32};
    for (auto _ : state) {
        nmm::GasOptions options;
        options.sweeps = 2000;
        options.burn_in = 1000;
        options.seed = 11;
        benchmark::DoNotOptimize(nmm::mcmc_run(pot, options));
    }
    state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_GasSweeps);

void BM_LevelSpacingTable(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(nmm::gaussian_level_spacing_table(1.0, 64, 2.0));
}
BENCHMARK(BM_LevelSpacingTable);

}  // namespace

BENCHMARK_MAIN();
