#include <benchmark/benchmark.h>

#include "cstarmod/corpus.hpp"
#include "cstarmod/equivalence.hpp"
#include "cstarmod/frames.hpp"
#include "cstarmod/l2.hpp"
#include "cstarmod/module.hpp"
#include "cstarmod/rng.hpp"

namespace {

using namespace cstarmod;

struct Fixture {
  AlgebraSpec spec;
  ModuleSpec module;
  FrameSet frame;
  ChainComplex complex;
  OperatorMatrix op;

  Fixture() {
    Rng rng(2024);
    spec = corpus::random_algebra(rng, 6);
    module = corpus::random_module(rng, spec, 3);
    frame = corpus::random_frame(rng, module, 6);
    complex = corpus::random_complex(rng, spec, 3, 3);
    op = corpus::random_operator(rng, spec, 3, 3);
  }
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

void bm_moore_penrose(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(moore_penrose_matrix(f.op));
}
BENCHMARK(bm_moore_penrose);

void bm_canonical_tight(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(canonical_tight(f.frame));
}
BENCHMARK(bm_canonical_tight);

void bm_canonical_decomposition(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(canonical_decomposition(f.module));
}
BENCHMARK(bm_canonical_decomposition);

void bm_betti(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(l2_betti(f.complex, 1));
}
BENCHMARK(bm_betti);

void bm_scalarize(benchmark::State& state) {
  const Fixture& f = fixture();
  Rng rng(7);
  const AlgebraSpec small = corpus::small_algebra(rng);
  const ModuleSpec m = corpus::random_module(rng, small, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(scalarize(m));
  (void)f;
}
BENCHMARK(bm_scalarize);

}  // namespace

BENCHMARK_MAIN();
