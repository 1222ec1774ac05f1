#include "eonpower/gradient_descent.hpp"
#include "eonpower/hurricane.hpp"
#include "eonpower/net_model.hpp"
#include "eonpower/qot.hpp"

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

namespace {

using namespace eonpower;

const LoadedNetwork& bundled() {
    static const LoadedNetwork loaded = load_network_file(std::string(EONPOWER_CONFIG_DIR) + "/table3.cfg");
    return loaded;
}

// Psi for every channel, over networks of 12 x copies lightpaths.
void BM_PsiEvaluation(benchmark::State& state) {
    const auto& base = bundled();
    const auto copies = static_cast<std::size_t>(state.range(0));
    const Network network = copies == 1 ? base.network : replicate(base.network, copies, base.physical.carrier_hz);
    const QotEvaluator qot(network, base.physical, 0.0);
    const std::vector<double> powers(network.size(), 0.0);
    std::vector<double> psi(network.size());
    for (auto _ : state) {
        qot.psi_dbm(powers, psi);
        benchmark::DoNotOptimize(psi.data());
    }
    state.SetComplexityN(static_cast<benchmark::IterationCount>(network.size()));
}
BENCHMARK(BM_PsiEvaluation)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Complexity(benchmark::oNSquared);

void BM_ChsoRun(benchmark::State& state) {
    const auto& base = bundled();
    const QotEvaluator qot(base.network, base.physical, 0.0);
    auto params = HurricaneParams::chso();
    params.iterations = static_cast<std::size_t>(state.range(0));
    const std::vector<double> start(qot.size(), 0.0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        params.seed = seed++;
        auto report = optimize(qot, params, start);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_ChsoRun)->Arg(20)->Arg(180)->Unit(benchmark::kMillisecond);

void BM_GdRun(benchmark::State& state) {
    const auto& base = bundled();
    const QotEvaluator qot(base.network, base.physical, 0.0);
    const GdParams params;
    const std::vector<double> start(qot.size(), 0.0);
    for (auto _ : state) {
        auto report = optimize_gd(qot, params, start);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_GdRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
