#include <benchmark/benchmark.h>

#include "hiercut/metrics.hpp"
#include "hiercut/objectives.hpp"
#include "hiercut/synth.hpp"
#include "hiercut/treecut.hpp"

using namespace hiercut;

namespace {

const SynthFixture& desk() {
  static const SynthFixture fx = generate_synthetic(SynthConfig{});
  return fx;
}

void BM_BuildMatrices(benchmark::State& state) {
  const auto tree = balanced_tree(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(build_matrices(tree));
}
BENCHMARK(BM_BuildMatrices)->Arg(27)->Arg(256)->Arg(1024);

void BM_SampleTreecut(benchmark::State& state) {
  const auto tree = balanced_tree(static_cast<std::size_t>(state.range(0)), 4);
  const auto bundle = build_matrices(tree);
  Rng64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_treecut(tree, bundle, 0.3, rng));
}
BENCHMARK(BM_SampleTreecut)->Arg(27)->Arg(256)->Arg(1024);

void BM_DtlLoss(benchmark::State& state) {
  const auto& fx = desk();
  std::vector<std::size_t> rows(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i * 7 % fx.train.size();
  const auto batch = fx.train.subset(rows);
  const auto params = PromptParams::identity(fx.emb.dim(), kDefaultTau);
  const auto cut = leaf_label_set(fx.tree);
  for (auto _ : state) benchmark::DoNotOptimize(dtl_loss_and_grad(batch, cut, params, fx.emb, fx.tree));
}
BENCHMARK(BM_DtlLoss)->Arg(32)->Arg(128);

void BM_NclLoss(benchmark::State& state) {
  const auto& fx = desk();
  std::vector<std::size_t> rows(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i * 7 % fx.train.size();
  const auto batch = fx.train.subset(rows);
  const auto params = PromptParams::identity(fx.emb.dim(), kDefaultTau);
  for (auto _ : state) benchmark::DoNotOptimize(ncl_loss_and_grad(batch, fx.tree, params, fx.emb));
}
BENCHMARK(BM_NclLoss)->Arg(32)->Arg(128);

void BM_Evaluate(benchmark::State& state) {
  const auto& fx = desk();
  const auto params = PromptParams::identity(fx.emb.dim(), kDefaultTau);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(fx.tree, params, fx.emb, fx.test));
}
BENCHMARK(BM_Evaluate);

}  // namespace

BENCHMARK_MAIN();
