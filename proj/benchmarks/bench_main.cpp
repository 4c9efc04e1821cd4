#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "glimm/envelope.hpp"
#include "glimm/glimm.hpp"
#include "glimm/riemann.hpp"
#include "glimm/sampler.hpp"

using namespace glimm;

namespace {

State s1(double a) { return State::Constant(1, a); }

void BM_Envelope(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1, 1);
  SampledFunction f;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / n;
    f.grid.push_back(x);
    f.values.push_back(std::sin(7 * x) + 0.1 * U(rng));
  }
  for (auto _ : st) benchmark::DoNotOptimize(lower_convex_envelope(f));
  st.SetComplexityN(n);
}
BENCHMARK(BM_Envelope)->RangeMultiplier(4)->Range(64, 65536)->Complexity(benchmark::oN);

void BM_RiemannCubic(benchmark::State& st) {
  ModelPtr m = make_cubic();
  for (auto _ : st) benchmark::DoNotOptimize(solve_riemann(*m, s1(-1), s1(1)));
}
BENCHMARK(BM_RiemannCubic);

void BM_RiemannPSystem(benchmark::State& st) {
  ModelPtr m = make_p_system();
  State a(2), b(2);
  a << -0.05, 0.02;
  b << 0.04, -0.03;
  for (auto _ : st) benchmark::DoNotOptimize(solve_riemann(*m, a, b));
}
BENCHMARK(BM_RiemannPSystem);

void BM_DiscrepancyBound(benchmark::State& st) {
  const auto n = static_cast<std::uint64_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(verify_discrepancy_bound(SamplingSequence::vdc(), n));
}
BENCHMARK(BM_DiscrepancyBound)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_GlimmStepCubic(benchmark::State& st) {
  ModelPtr m = make_cubic();
  const GridProfile p = init_profile(riemann_data(s1(-1), s1(1)), 1.0 / 256);
  for (auto _ : st) benchmark::DoNotOptimize(step(*m, p, 0.3));
}
BENCHMARK(BM_GlimmStepCubic);

}  // namespace

BENCHMARK_MAIN();
