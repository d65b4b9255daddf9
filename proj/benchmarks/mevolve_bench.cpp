#include <benchmark/benchmark.h>

#include "mevolve/augmentation.hpp"
#include "mevolve/classify.hpp"
#include "mevolve/dataset.hpp"
#include "mevolve/evolve.hpp"

namespace {

using namespace mevolve;

const GraphDataset& mutag() {
  static const GraphDataset ds = load_tu_dataset(MEVOLVE_DATA_DIR "/MUTAG", "MUTAG");
  return ds;
}

void BM_LoadMutag(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(load_tu_dataset(MEVOLVE_DATA_DIR "/MUTAG", "MUTAG"));
}
BENCHMARK(BM_LoadMutag)->Unit(benchmark::kMillisecond);

void BM_Augment(benchmark::State& state) {
  AugmentationConfig cfg;
  cfg.mapping = state.range(0) == 0 ? MappingKind::random : MappingKind::motif_similarity;
  const auto& ds = mutag();
  Rng rng(1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(augment(ds.graphs[i++ % ds.size()], cfg, rng));
  }
  state.SetLabel(to_string(cfg.mapping));
}
BENCHMARK(BM_Augment)->Arg(0)->Arg(1);

void BM_Features(benchmark::State& state) {
  const auto kind = state.range(0) == 0 ? FeatureKind::spectral : FeatureKind::heat_trace;
  const auto& ds = mutag();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(ds.graphs[i++ % ds.size()], kind, 128));
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_Features)->Arg(0)->Arg(1);

void BM_Fit(benchmark::State& state) {
  const auto& ds = mutag();
  const auto x = extract_features(ds.graphs, FeatureKind::spectral, 128);
  ClassifierSettings settings;
  settings.kind = state.range(0) == 0 ? ClassifierKind::knn : ClassifierKind::logreg;
  for (auto _ : state) benchmark::DoNotOptimize(fit(x, ds.labels, ds.class_count(), settings));
  state.SetLabel(to_string(settings.kind));
}
BENCHMARK(BM_Fit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MEvolveSplit(benchmark::State& state) {
  const auto& ds = mutag();
  const Split split = stratified_split(ds, SplitRatios{}, 0);
  EvolveConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(m_evolve(ds, split, cfg, 0).final_test_accuracy);
}
BENCHMARK(BM_MEvolveSplit)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
