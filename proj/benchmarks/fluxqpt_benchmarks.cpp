#include <benchmark/benchmark.h>

#include "fluxqpt/dynamics.hpp"
#include "fluxqpt/eigensolver.hpp"
#include "fluxqpt/qpt_metrics.hpp"

using namespace fluxqpt;

namespace {

SweepModel chain(std::size_t n) {
  SweepModel model;
  model.network = SpinNetwork::nn_nnn_chain(n);
  return model;
}

void BM_BuildHamiltonian(benchmark::State& state) {
  const auto model = chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(model.hamiltonian_at_fraction(0.5));
}
BENCHMARK(BM_BuildHamiltonian)->DenseRange(6, 14, 4);

void BM_Matvec(benchmark::State& state) {
  const auto h = chain(static_cast<std::size_t>(state.range(0))).hamiltonian_at_fraction(0.5);
  std::vector<Complex> x(h.dim(), 1.0);
  std::vector<Complex> y(h.dim());
  for (auto _ : state) {
    fluxqpt::apply(h, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.nonzeros()));
}
BENCHMARK(BM_Matvec)->DenseRange(6, 14, 2);

void BM_GroundStateDense(benchmark::State& state) {
  const auto h = chain(static_cast<std::size_t>(state.range(0))).hamiltonian_at_fraction(0.6);
  EigenOptions opts;
  opts.method = SolverMethod::dense;
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(h, 1, opts));
}
BENCHMARK(BM_GroundStateDense)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_GroundStateLanczos(benchmark::State& state) {
  const auto h = chain(static_cast<std::size_t>(state.range(0))).hamiltonian_at_fraction(0.6);
  EigenOptions opts;
  opts.method = SolverMethod::lanczos;
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(h, 1, opts));
}
BENCHMARK(BM_GroundStateLanczos)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

void BM_ChiPoint(benchmark::State& state) {
  const auto model = chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fidelity_susceptibility(model, 0.6, 1e-4));
}
BENCHMARK(BM_ChiPoint)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_EvolveTriangle(benchmark::State& state) {
  const SweepModel model;
  const auto psi0 = StateVector::plus(3);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_schrodinger(model, psi0));
}
BENCHMARK(BM_EvolveTriangle)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
