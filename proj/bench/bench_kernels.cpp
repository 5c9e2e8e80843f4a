// Serial reference kernels against the OpenMP sweeps on the same grids.
// Set OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include "ngd/analysis.hpp"
#include "ngd/funcspec.hpp"

namespace {

ngd::FunctionDef instance() {
  ngd::GeneratorProfile p;
  p.basis = {2, 3, 5};
  p.max_hinges = 8;
  return ngd::generate(42, p);
}

template <bool Parallel>
void BM_wright(benchmark::State& state) {
  const ngd::FunctionDef f = instance();
  const auto n = static_cast<std::size_t>(state.range(0));
  const ngd::SampleGrid grid = ngd::make_grid(f.interval, n, n / 2, f.basis, 1);
  ngd::StepProfile steps;
  steps.max_grid_steps = 2 * n;
  std::uint64_t triples = 0;
  for (auto _ : state) {
    const ngd::CheckResult r = Parallel ? ngd::wright_check(f, grid, steps) : ngd::serial::wright_check(f, grid, steps);
    triples += r.checked;
    benchmark::DoNotOptimize(r.violation);
  }
  state.counters["triples/s"] = benchmark::Counter(static_cast<double>(triples), benchmark::Counter::kIsRate);
}

template <bool Parallel>
void BM_jensen(benchmark::State& state) {
  const ngd::FunctionDef f = instance();
  const auto n = static_cast<std::size_t>(state.range(0));
  const ngd::SampleGrid grid = ngd::make_grid(f.interval, n, n / 2, f.basis, 1);
  std::uint64_t pairs = 0;
  for (auto _ : state) {
    const ngd::CheckResult r = Parallel ? ngd::jensen_check(f, grid) : ngd::serial::jensen_check(f, grid);
    pairs += r.checked;
    benchmark::DoNotOptimize(r.violation);
  }
  state.counters["pairs/s"] = benchmark::Counter(static_cast<double>(pairs), benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK(BM_wright<false>)->Name("wright/serial")->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_wright<true>)->Name("wright/openmp")->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_jensen<false>)->Name("jensen/serial")->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_jensen<true>)->Name("jensen/openmp")->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
