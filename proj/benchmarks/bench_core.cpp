#include <benchmark/benchmark.h>

#include "bdkit/bdkit.hpp"

namespace {

void BM_SpectralApprox(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const bdkit::RecurrenceCoefficients co = bdkit::recurrence_from_rates(bdkit::mminf(1, 1, 0), n);
  for (auto _ : state) benchmark::DoNotOptimize(bdkit::spectral_approx(co, n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpectralApprox)->RangeMultiplier(2)->Range(50, 400)->Complexity();

void BM_TransitionFull(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const bdkit::RateSet r = bdkit::mm1(2, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(bdkit::transition(r, 1.0, n, 1e-10));
}
BENCHMARK(BM_TransitionFull)->Arg(50)->Arg(100)->Arg(150);

void BM_TransitionRows(benchmark::State& state) {
  const bdkit::RateSet r = bdkit::mminf(1, 1, 0);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bdkit::transition_rows(r, t, 150, {0, 1, 2, 3, 4, 5}, 1e-12));
  }
}
BENCHMARK(BM_TransitionRows)->Arg(1)->Arg(5);

void BM_KmTransition(benchmark::State& state) {
  const bdkit::RateSet r = bdkit::mminf(1, 1, 0);
  const bdkit::DiscreteMeasure psi =
      bdkit::spectral_approx(bdkit::recurrence_from_rates(r, 200), 200);
  for (auto _ : state) benchmark::DoNotOptimize(bdkit::km_transition(psi, r, 3, 5, 1.0));
}
BENCHMARK(BM_KmTransition);

void BM_Classify(benchmark::State& state) {
  const bdkit::RateSet q = bdkit::quartic();
  for (auto _ : state) benchmark::DoNotOptimize(bdkit::classify(q, 200, 1e-10));
}
BENCHMARK(BM_Classify);

void BM_MaximalParams(benchmark::State& state) {
  const bdkit::ChainSource src = bdkit::chain_source(bdkit::mm1(2, 1, 0));
  for (auto _ : state) benchmark::DoNotOptimize(bdkit::maximal_params(src, 50, 1e-12));
}
BENCHMARK(BM_MaximalParams);

}  // namespace

BENCHMARK_MAIN();
