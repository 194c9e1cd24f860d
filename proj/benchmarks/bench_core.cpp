#include <benchmark/benchmark.h>

#include "ppext/approx.hpp"
#include "ppext/cutoff.hpp"
#include "ppext/extension.hpp"
#include "ppext/verify.hpp"

using namespace ppext;

namespace {

const CantorParams& two() {
  static const CantorParams p = CantorParams::parse("2", "1/4");
  return p;
}

}  // namespace

static void BM_EnumerateNodes(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_nodes(state.range(0)));
}
BENCHMARK(BM_EnumerateNodes)->Arg(256)->Arg(4096);

static void BM_UniformPrefixes(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(first_nonuniform_prefix(state.range(0)));
}
BENCHMARK(BM_UniformPrefixes)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_ProductJet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<BigReal> roots;
  for (int i = 0; i < n; ++i) roots.push_back(BigReal::from_rational(Rational(i, n), 192));
  BigReal x = BigReal::from_rational(Rational(1, 3), 192);
  for (auto _ : state) benchmark::DoNotOptimize(product_derivs(roots, x, 4, 192));
}
BENCHMARK(BM_ProductJet)->Arg(64)->Arg(256);

static void BM_GridTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  int depth = top_level(n) + 2;
  LevelData L = build_levels(two(), depth);
  NodeSeq Z = enumerate_nodes(n, L);
  for (auto _ : state) benchmark::DoNotOptimize(GridTable(L, Z, depth));
}
BENCHMARK(BM_GridTable)->Arg(64)->Arg(257)->Unit(benchmark::kMillisecond);

static void BM_GridSweep(benchmark::State& state) {
  GridSweepOptions o;
  o.n_max = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(grid_sweep(two(), o));
}
BENCHMARK(BM_GridSweep)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_ProfileSweep(benchmark::State& state) {
  ProfileSweepOptions o;
  o.m_max = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(sweep_profile_inequalities(two(), o));
}
BENCHMARK(BM_ProfileSweep)->Arg(130)->Arg(258)->Unit(benchmark::kMillisecond);

static void BM_DividedDifferences(benchmark::State& state) {
  JetFn f = jet_exp();
  for (auto _ : state) benchmark::DoNotOptimize(divided_differences(f, two(), state.range(0)));
}
BENCHMARK(BM_DividedDifferences)->Arg(63)->Arg(255)->Unit(benchmark::kMillisecond);

static void BM_PhiDeriv(benchmark::State& state) {
  BigReal x = BigReal::from_rational(Rational(3, 10), 256);
  const int k = static_cast<int>(state.range(0));
  phi_deriv(k, x, 256);  // first call runs the recursion check
  for (auto _ : state) benchmark::DoNotOptimize(phi_deriv(k, x, 256));
}
BENCHMARK(BM_PhiDeriv)->Arg(1)->Arg(4)->Arg(8);

static void BM_ExtensionEval(benchmark::State& state) {
  static const ExtensionOperator op(jet_exp(), OperatorConfig{two(), 255, 2, 2, 8});
  Locus x{PointExpr::level(1), BigReal::from_rational(Rational(1, 100), 192)};
  for (auto _ : state) benchmark::DoNotOptimize(op.eval(x, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ExtensionEval)->Arg(0)->Arg(2)->Unit(benchmark::kMicrosecond);

static void BM_GridExchange(benchmark::State& state) {
  JetFn f = jet_exp();
  for (auto _ : state) benchmark::DoNotOptimize(en_grid_exchange(f, two(), state.range(0)));
}
BENCHMARK(BM_GridExchange)->Arg(7)->Arg(15)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
