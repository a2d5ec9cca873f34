#include <benchmark/benchmark.h>

#include "normaudit/audit.hpp"
#include "normaudit/catalog.hpp"
#include "normaudit/chart_geometry.hpp"
#include "normaudit/dsl.hpp"
#include "normaudit/math.hpp"

using namespace normaudit;

namespace {

void BM_InvarianceAudit(benchmark::State& state) {
  const auto& e = catalog_entry("binary");
  const auto& q = e.find("marginal_effect").q;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto verdict = invariance_audit(q, e.family, e.base_point, e.context, n, 1e-9, 7);
    benchmark::DoNotOptimize(verdict);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_InvarianceAudit)->Arg(100)->Arg(1000);

void BM_ApplyNetwork(benchmark::State& state) {
  const auto& e = catalog_entry("network");
  const auto g = sample_group(e.family, 5, 1).front();
  for (auto _ : state) {
    auto moved = apply(e.family, g, e.base_point);
    benchmark::DoNotOptimize(moved);
  }
}
BENCHMARK(BM_ApplyNetwork);

void BM_TwoQuantileNormalize(benchmark::State& state) {
  NetworkModel m;
  m.cov_grid = {0.0, 1.0};
  m.w = {{0.3, -0.2}, {-0.2, 0.5}};
  m.unit_cov = {0, 1, 0, 1};
  m.fixed_effects = {0.1, 0.2, -0.3, 0.4};
  m.errdist = DistHandle::logistic(0.7, 1.9);
  for (auto _ : state) {
    auto normalized = two_quantile_normalize(m, 0.25);
    benchmark::DoNotOptimize(normalized);
  }
}
BENCHMARK(BM_TwoQuantileNormalize);

void BM_Logsumexp(benchmark::State& state) {
  std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 0.01 * static_cast<double>(i) - 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(logsumexp(xs));
  }
}
BENCHMARK(BM_Logsumexp)->Arg(8)->Arg(512);

void BM_ParseExpr(benchmark::State& state) {
  const std::string src =
      "(mu/alpha) * (logsumexp(d0/mu, d1/mu, d2/mu) - logsumexp(e0/mu, e1/mu, e2/mu))";
  for (auto _ : state) {
    auto ast = dsl::parse_expr(src);
    benchmark::DoNotOptimize(ast);
  }
}
BENCHMARK(BM_ParseExpr);

void BM_StrongEquivalence(benchmark::State& state) {
  for (auto _ : state) {
    auto report = strong_equivalence_check(static_cast<int>(state.range(0)), 5, 21);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_StrongEquivalence)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
