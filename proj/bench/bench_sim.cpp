#include <benchmark/benchmark.h>

#include "cllr/generate.hpp"
#include "cllr/laws.hpp"
#include "cllr/refinement.hpp"

using namespace cllr;

namespace {

const std::vector<Term>& roots(std::size_t nodes) {
    static std::vector<std::vector<Term>> memo(8);
    if (memo[nodes].empty()) memo[nodes] = enumerate_terms(nodes, {"a", "b"});
    return memo[nodes];
}

void simulation(benchmark::State& state, Exec exec) {
    const auto& r = roots(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        RefinementChecker c(r, kDefaultStateBound, SimOptions{exec, false});
        benchmark::DoNotOptimize(c.deletions());
    }
    state.counters["roots"] = static_cast<double>(r.size());
}

void laws(benchmark::State& state, Exec exec) {
    FuzzConfig cfg;
    cfg.count = static_cast<std::size_t>(state.range(0));
    cfg.exec = exec;
    cfg.shrink = false;
    for (auto _ : state)
        for (std::size_t k = 0; k < law_catalogue().size(); ++k) benchmark::DoNotOptimize(run_law(law_catalogue()[k], k, cfg));
}

}  // namespace

BENCHMARK_CAPTURE(simulation, serial, Exec::Serial)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(simulation, parallel, Exec::Parallel)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(laws, serial, Exec::Serial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(laws, parallel, Exec::Parallel)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
