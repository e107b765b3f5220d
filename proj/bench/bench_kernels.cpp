// Serial reference kernels against their OpenMP twins.
#include <benchmark/benchmark.h>

#include <random>

#include "fermitheta/kernels.hpp"
#include "fermitheta/models.hpp"

using namespace fermitheta;

namespace {

const Ensemble& syk_ensemble() {
  static const Ensemble ens(ModelKind::syk, 16, 4, 1);
  return ens;
}

void assemble(benchmark::State& state, bool parallel) {
  const auto& ens = syk_ensemble();
  const auto g = ens.draw(0).g;
  const double scale = 1.0 / std::sqrt(static_cast<double>(ens.m()));
  for (auto _ : state) {
    auto h = parallel ? kernels::assemble_hamiltonian_parallel(ens.terms(), g, scale, static_cast<int>(state.range(0)))
                      : kernels::assemble_hamiltonian_serial(ens.terms(), g, scale);
    benchmark::DoNotOptimize(h.data());
  }
}

void adjacency(benchmark::State& state, bool parallel) {
  const auto set = enumerate_set(OperatorKind::majorana, 16, 4);
  for (auto _ : state) {
    auto rows = parallel ? kernels::adjacency_rows_parallel(set, static_cast<int>(state.range(0)))
                         : kernels::adjacency_rows_serial(set);
    benchmark::DoNotOptimize(rows.data());
  }
}

void walsh(benchmark::State& state, bool parallel) {
  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  std::vector<double> base(std::size_t{1} << 20);
  for (auto& v : base) v = nd(rng);
  for (auto _ : state) {
    auto f = base;
    if (parallel) {
      kernels::walsh_hadamard_parallel(f, static_cast<int>(state.range(0)));
    } else {
      kernels::walsh_hadamard_serial(f);
    }
    benchmark::DoNotOptimize(f.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(assemble, serial, false)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(assemble, openmp, true)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(adjacency, serial, false)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(adjacency, openmp, true)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(walsh, serial, false)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(walsh, openmp, true)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
