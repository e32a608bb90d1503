// Serial reference against the OpenMP brute force on random instances.

#include <random>

#include <benchmark/benchmark.h>

#include "fh/solvers.hpp"

namespace {

fh::Instance random_instance(unsigned n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rel(0, 12), proc(1, 8), den(1, 3);
  fh::Instance inst;
  for (unsigned i = 0; i < n; ++i)
    inst.jobs.push_back({"j" + std::to_string(i + 1), fh::Rational(rel(rng), den(rng)),
                         fh::Rational(proc(rng), den(rng))});
  for (auto& j : inst.jobs) {
    j.release.canonicalize();
    j.proc.canonicalize();
  }
  return inst;
}

void run(benchmark::State& state, bool serial) {
  fh::Instance inst = random_instance(static_cast<unsigned>(state.range(0)), 42);
  fh::ObjectiveKind obj{fh::Measure::Flow, fh::NormExponent::integer(2)};
  fh::BruteOptions opt;
  opt.serial = serial;
  for (auto _ : state) {
    auto r = fh::brute_force_optimal(inst, obj, opt);
    benchmark::DoNotOptimize(r.value);
  }
}

void BM_BruteSerial(benchmark::State& state) { run(state, true); }
void BM_BruteParallel(benchmark::State& state) { run(state, false); }

}  // namespace

BENCHMARK(BM_BruteSerial)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteParallel)->DenseRange(5, 8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
