// Serial reference vs blocked parallel kernels.
//
//   ./bench_kernels --benchmark_filter=Gram
//
// Thread count follows OMP_NUM_THREADS.

#include <vector>

#include <benchmark/benchmark.h>

#include "gmmrec/kernels.hpp"
#include "gmmrec/rng.hpp"

namespace {

std::vector<double> filled(std::size_t count, std::uint64_t seed) {
    gmmrec::CounterRng rng(seed);
    std::vector<double> v(count);
    for (double& x : v) x = rng.normal();
    return v;
}

template <auto Kernel>
void gram_case(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = static_cast<std::size_t>(state.range(1));
    const auto y = filled(p * n, 1);
    std::vector<double> out(n * n);
    for (auto _ : state) {
        Kernel(y, p, n, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n + 1) / 2 * p));
}

template <auto Kernel>
void symv_case(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = filled(n * n, 2);
    const auto x = filled(n, 3);
    std::vector<double> out(n);
    for (auto _ : state) {
        Kernel(a, n, x, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void gram_args(benchmark::internal::Benchmark* b) {
    b->Args({200, 100})->Args({200, 2000})->Args({500, 3107})->Unit(benchmark::kMillisecond)->UseRealTime();
}

void symv_args(benchmark::internal::Benchmark* b) {
    b->Arg(200)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond)->UseRealTime();
}

}  // namespace

BENCHMARK(gram_case<gmmrec::reference::gram>)->Name("Gram/reference")->Apply(gram_args);
BENCHMARK(gram_case<gmmrec::kernels::gram>)->Name("Gram/parallel")->Apply(gram_args);
BENCHMARK(symv_case<gmmrec::reference::symv>)->Name("Symv/reference")->Apply(symv_args);
BENCHMARK(symv_case<gmmrec::kernels::symv>)->Name("Symv/parallel")->Apply(symv_args);

BENCHMARK_MAIN();
