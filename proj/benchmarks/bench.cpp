#include <benchmark/benchmark.h>

#include <numbers>

#include "maslovflow/bvp.hpp"
#include "maslovflow/harness.hpp"
#include "maslovflow/maslov.hpp"
#include "maslovflow/random.hpp"

using namespace maslovflow;

static void BM_PairUnitary(benchmark::State& state) {
  const Index n = state.range(0);
  random::CounterRng rng(1, 1, 0);
  const auto space = symplectic::SymplecticSpace::make(random::balanced_form(rng, n));
  const auto split = symplectic::make_splitting(space);
  const auto l = random::random_lagrangian(rng, space);
  const auto m = random::random_lagrangian(rng, space);
  for (auto _ : state) benchmark::DoNotOptimize(symplectic::pair_unitary(space, split, l, m));
}
BENCHMARK(BM_PairUnitary)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_TransferMatrix(benchmark::State& state) {
  const auto sc = *harness::find_builtin("S3");
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bvp::transfer_matrix(sc.family, 0.5, 0.3, steps));
}
BENCHMARK(BM_TransferMatrix)->Arg(512)->Arg(2048)->Arg(8192);

static void BM_MaslovRotation(benchmark::State& state) {
  const Index h = state.range(0);
  const double pi = std::numbers::pi;
  CMatrix j = CMatrix::Zero(2 * h, 2 * h);
  j.topLeftCorner(h, h) = Complex(0, -1) * CMatrix::Identity(h, h);
  j.bottomRightCorner(h, h) = Complex(0, 1) * CMatrix::Identity(h, h);
  const maslov::PairPath path{[&](double s) {
                                CMatrix l(2 * h, h), m(2 * h, h);
                                l << CMatrix::Identity(h, h), CMatrix::Identity(h, h);
                                m << CMatrix::Identity(h, h), std::exp(Complex(0, 2 * pi * s)) * CMatrix::Identity(h, h);
                                return maslov::PairSample{j, symplectic::Subspace::span(l), symplectic::Subspace::span(m)};
                              },
                              0.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(maslov::maslov_index(path).index);
}
BENCHMARK(BM_MaslovRotation)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Scenario(benchmark::State& state) {
  const auto sc = harness::builtin_scenarios()[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) benchmark::DoNotOptimize(harness::run_scenario(sc).sf);
  state.SetLabel(sc.name);
}
BENCHMARK(BM_Scenario)->DenseRange(0, 4)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
