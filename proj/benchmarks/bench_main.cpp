#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "lvsmile/black_scholes.hpp"
#include "lvsmile/divided_diff.hpp"
#include "lvsmile/mc.hpp"
#include "lvsmile/model.hpp"
#include "lvsmile/pricer.hpp"
#include "lvsmile/smile.hpp"

namespace {

using cd = std::complex<double>;
const lvsmile::ModelParams params(0.25, 0.0225, -0.75, 0.0);

lvsmile::ContourSpec contour() {
    return lvsmile::ContourSpec::for_payoff(lvsmile::PayoffSpec::call_at(0.0));
}

void BM_PriceSeries(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto series = lvsmile::price(params, lvsmile::PayoffSpec::call_at(0.0), 1.0, order,
                                     contour());
        benchmark::DoNotOptimize(series.total);
    }
}
BENCHMARK(BM_PriceSeries)->Arg(0)->Arg(4)->Arg(10);

void BM_DividedDiffPrefixes(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<cd> nodes;
    for (int k = 0; k <= n; ++k)
        nodes.push_back(lvsmile::phi0(cd{3.0, -1.5} - cd{0.0, 1.0} * (k * -0.75), 0.25));
    std::vector<cd> out(nodes.size());
    for (auto _ : state) {
        lvsmile::divided_diff_exp_prefixes(1.0, nodes, out);
        benchmark::DoNotOptimize(out.back());
    }
}
BENCHMARK(BM_DividedDiffPrefixes)->Arg(4)->Arg(10)->Arg(16);

void BM_ImpliedVol(benchmark::State& state) {
    const double price = lvsmile::bs_price({0.29, 1.0, 0.0, 0.1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(lvsmile::implied_vol(price, 1.0, 0.0, 0.1));
    }
}
BENCHMARK(BM_ImpliedVol);

void BM_SmileCurvePoint(benchmark::State& state) {
    const std::vector<double> ks{0.1};
    for (auto _ : state) {
        auto curve = lvsmile::smile_curve(params, 1.0, ks, 5, contour(), false);
        benchmark::DoNotOptimize(curve.points[0].sigmas.back());
    }
}
BENCHMARK(BM_SmileCurvePoint);

void BM_McPaths(benchmark::State& state) {
    lvsmile::McConfig cfg;
    cfg.n_paths = static_cast<long>(state.range(0));
    cfg.dt = 1e-2;
    cfg.seed = 123;
    for (auto _ : state) {
        auto est = lvsmile::simulate_call(params, 1.0, 0.0, cfg);
        benchmark::DoNotOptimize(est.price);
    }
    state.SetItemsProcessed(state.iterations() * cfg.n_paths * 100);  // path-steps
}
BENCHMARK(BM_McPaths)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
