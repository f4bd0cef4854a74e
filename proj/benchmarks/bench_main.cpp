#include <benchmark/benchmark.h>

#include "latfricke/counting.hpp"
#include "latfricke/fricke.hpp"
#include "latfricke/lattice.hpp"
#include "latfricke/normal_form.hpp"
#include "latfricke/random.hpp"
#include "latfricke/sampling.hpp"

using namespace latfricke;

namespace {

IntMatrix random_matrix(Rng& rng, std::size_t n, long bound) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Integer(rng.uniform(-bound, bound));
  return m;
}

ScaledRationalMatrix bulk_point(long n, long N) {
  return sample_bulk(LevelContext(n, N), derive_seed(7, static_cast<std::uint64_t>(n * 1000 + N)), 1).samples[0].z();
}

}  // namespace

static void BM_Hnf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  std::vector<IntMatrix> ms;
  for (int i = 0; i < 64; ++i) ms.push_back(random_matrix(rng, n, 50));
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(hnf(ms[k++ % ms.size()]));
}
BENCHMARK(BM_Hnf)->Arg(2)->Arg(3)->Arg(4)->Arg(6);

static void BM_SuccessiveMinima(benchmark::State& state) {
  const long n = state.range(0);
  const Lattice l(bulk_point(n, 11));
  for (auto _ : state) benchmark::DoNotOptimize(successive_minima(Lattice(l.basis())));
}
BENCHMARK(BM_SuccessiveMinima)->Arg(2)->Arg(3)->Arg(4);

static void BM_FrickeReduce(benchmark::State& state) {
  const long n = state.range(0);
  const long N = 17;
  Rng rng(3);
  std::vector<ScaledRationalMatrix> zs;
  for (int i = 0; i < 16; ++i) zs.push_back(sample_translate(rng, n, N));
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fricke_reduce(LevelContext(n, N), zs[k++ % zs.size()]));
}
BENCHMARK(BM_FrickeReduce)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_EnumerateH(benchmark::State& state) {
  const long n = state.range(0);
  const long M = state.range(1);
  const long N = 23;
  const ScaledRationalMatrix z = bulk_point(n, N);
  for (auto _ : state) {
    HQuery q(LevelContext(n, N), z, DeterminantSpec::up_to(Integer(M)));
    q.c2 = Rational(n);
    benchmark::DoNotOptimize(enumerate_H(q).count);
  }
}
BENCHMARK(BM_EnumerateH)->Args({2, 4})->Args({2, 10})->Args({3, 4})->Args({3, 10})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
