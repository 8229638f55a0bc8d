// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <random>

#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "magbloch/bloch.hpp"
#include "magbloch/kernels.hpp"

using namespace magbloch;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::serial : Execution::parallel; }

void BM_FiberSweep(benchmark::State& state) {
  std::mt19937_64 rng(1);
  // a 4x4 supercell of the 3-vertex quotient gives 48x48 fibers
  const auto base = fixtures::random_lieb3(rng);
  const auto sc = build_supercell(base.complex, base.covering, {{4, 4}, Boundary::periodic});
  const Connection c(fixtures::random_angles(sc.complex.edge_count(), rng));
  const auto momenta = BlochBasis({static_cast<std::size_t>(state.range(1)), static_cast<std::size_t>(state.range(1))}).momenta();
  for (auto _ : state) benchmark::DoNotOptimize(fiber_sweep(sc.complex, sc.covering, c, momenta, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(momenta.size()));
}
BENCHMARK(BM_FiberSweep)->ArgsProduct({{0, 1}, {8, 16}})->Unit(benchmark::kMillisecond);

void BM_BlochTransform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  const BlochBasis basis({n, n});
  const CVector s = CVector::Random(static_cast<Eigen::Index>(basis.size() * 3));
  for (auto _ : state) benchmark::DoNotOptimize(bloch_transform_fast(s, basis, 3, mode(state)));
}
BENCHMARK(BM_BlochTransform)->ArgsProduct({{0, 1}, {8, 16}})->Unit(benchmark::kMicrosecond);

void BM_BlochDense(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const BlochBasis basis({n, n});
  const CVector s = CVector::Random(static_cast<Eigen::Index>(basis.size() * 3));
  for (auto _ : state) {
    const CMatrix phi = bloch_matrix(basis, 3);
    benchmark::DoNotOptimize(CVector(phi * s));
  }
}
BENCHMARK(BM_BlochDense)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_CharacterRelations(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  const BlochBasis basis({n, n});
  for (auto _ : state) benchmark::DoNotOptimize(character_relation_residuals(basis, mode(state)));
}
BENCHMARK(BM_CharacterRelations)->ArgsProduct({{0, 1}, {6, 8}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
