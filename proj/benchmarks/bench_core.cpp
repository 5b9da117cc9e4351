#include <benchmark/benchmark.h>

#include "calderon/beltrami.hpp"
#include "calderon/cgo.hpp"
#include "calderon/domains.hpp"
#include "calderon/dtn.hpp"

using namespace calderon;

namespace {

void BM_BeltramiPrincipal(benchmark::State& state) {
  const GridSpec g{2.0, int(state.range(0))};
  const SpectralTransform t(g);
  const ComplexField mu = ComplexField::sample(g, [](Complex z) {
    return std::abs(z) < 1.0 ? Complex(0.3, 0.2) * (1.0 - std::norm(z)) : Complex(0.0);
  });
  for (auto _ : state) benchmark::DoNotOptimize(beltrami::solve_principal(t, mu).residual);
}
BENCHMARK(BM_BeltramiPrincipal)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_DtnMatrix(benchmark::State& state) {
  const double h = 1.0 / double(state.range(0));
  const ConductivityModel s = constant_on_disc({4.0, 0.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(dtn::dtn_matrix(s, h, 8).matrix()(0, 0));
}
BENCHMARK(BM_DtnMatrix)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SolveCgo(benchmark::State& state) {
  const GridSpec g{2.0, 256};
  const SpectralTransform t(g);
  const RealField mu2 = RealField::sample(g, [](Complex z) { return std::abs(z) < 1.0 ? -0.2 : 0.0; });
  const double k = double(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cgo::solve_cgo(t, mu2, Complex(k, 0.0)).residual);
}
BENCHMARK(BM_SolveCgo)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_BeurlingAhlforsEvaluate(benchmark::State& state) {
  const domains::BeurlingAhlfors f(
      CircleHomeomorphism::from_function([](double t) { return t + 0.1 * std::sin(t); }, 256));
  const Complex w(0.3, -0.4);
  for (auto _ : state) benchmark::DoNotOptimize(f.evaluate(w));
}
BENCHMARK(BM_BeurlingAhlforsEvaluate);

void BM_RecoverBoundaryMap(benchmark::State& state) {
  const dtn::DtnMatrix lambda = dtn::dtn_matrix(constant_on_disc({4.0, 0.0, 1.0}), 0.02, 24);
  for (auto _ : state) benchmark::DoNotOptimize(cgo::recover_boundary_map(lambda, 4.0, 256).front());
}
BENCHMARK(BM_RecoverBoundaryMap)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
