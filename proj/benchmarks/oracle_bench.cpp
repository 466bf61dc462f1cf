#include <benchmark/benchmark.h>

#include "bhs/oracle.hpp"

namespace {

using namespace bhs::oracle;

void BM_ApplyHamiltonian(benchmark::State& state) {
  const FockBasis b(static_cast<int>(state.range(0)));
  const FockState psi = FockState::basis_state(b, {0, b.total(), 0});
  for (auto _ : state) benchmark::DoNotOptimize(apply_hamiltonian(psi, 1.0, 1e-3));
}
BENCHMARK(BM_ApplyHamiltonian)->Arg(20)->Arg(200);

void BM_Evolve(benchmark::State& state) {
  const FockBasis b(static_cast<int>(state.range(0)));
  const FockState psi = FockState::basis_state(b, {0, b.total(), 0});
  const Propagator prop(b, 1.0, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(prop.evolve(psi, 1.0));
}
// 20 -> dense eigenbasis, 70 -> adaptive ODE
BENCHMARK(BM_Evolve)->Arg(20)->Arg(70)->Unit(benchmark::kMillisecond);

void BM_PropagatorSetup(benchmark::State& state) {
  const FockBasis b(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Propagator(b, 1.0, 1e-3));
}
BENCHMARK(BM_PropagatorSetup)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_BsExact(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bs_exact(SqueezedInput{1.0}));
}
BENCHMARK(BM_BsExact);

}  // namespace
