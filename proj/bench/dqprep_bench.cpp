#include "dqprep/autarky.hpp"
#include "dqprep/fuzzer.hpp"
#include "dqprep/reduce.hpp"

#include <benchmark/benchmark.h>

using namespace dqprep;

namespace {

// No single-variable autarky exists, so every variable is examined.
Formula dense(std::size_t clauses) {
  RandomModelParams p;
  p.n_universal = 20;
  p.n_existential = static_cast<std::uint32_t>(clauses / 5);
  p.dep_prob = 0.3;
  p.n_clauses = clauses;
  p.clause_width = 3;
  p.seed = 1;
  return generate(p);
}

void BM_E1Serial(benchmark::State& state) {
  const Formula f = dense(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_e1_autarky_serial(f));
}
BENCHMARK(BM_E1Serial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_E1Parallel(benchmark::State& state) {
  const Formula f = dense(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_e1_autarky(f));
}
BENCHMARK(BM_E1Parallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ReduceE1(benchmark::State& state) {
  RandomModelParams p;
  p.n_universal = 20;
  p.n_existential = static_cast<std::uint32_t>(state.range(0) * 4 / 5);
  p.dep_prob = 0.3;
  p.n_clauses = static_cast<std::size_t>(state.range(0));
  p.clause_width = 2;
  p.seed = 1;
  const Formula f = generate(p);
  AutarkySystemConfig cfg;
  cfg.a_k.reset();
  for (auto _ : state) benchmark::DoNotOptimize(reduce_to_lean_kernel(f, cfg));
}
BENCHMARK(BM_ReduceE1)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  RandomModelParams base;
  base.n_universal = 3;
  base.n_existential = 2;
  for (auto _ : state)
    benchmark::DoNotOptimize(sweep_phase_transition(base, {0.5, 1.0, 1.5, 2.0}, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Sweep)->Arg(50)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
