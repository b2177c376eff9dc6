#include <benchmark/benchmark.h>

#include "alloyscope/filter.hpp"
#include "alloyscope/mlp.hpp"
#include "alloyscope/neighbors.hpp"
#include "alloyscope/sensitivity.hpp"
#include "alloyscope/synthetic.hpp"
#include "alloyscope/train.hpp"

namespace {

using namespace alloyscope;

const Dataset& table() {
  static const Dataset ds = synthesize_dataset(20000, 1);
  return ds;
}

const NormStats& stats() {
  static const NormStats s = compute_norm_stats(table());
  return s;
}

MlpModel production_model() {
  const std::vector<std::size_t> dims{12, 1024, 1024, 20};
  auto m = make_random_model(dims, 3);
  m.input_names = default_input_columns(table());
  m.output_names = default_output_columns(table());
  return m;
}

void BM_Classify(benchmark::State& state) {
  const BoundsSpec bounds{{{"YS", {250.0, 320.0}},
                           {"hardness", {80.0, 130.0}},
                           {"density", {2.6, 2.75}},
                           {"Si", {0.0, 6.0}}}};
  const auto& dataset = table();
  const auto& norm = stats();
  for (auto _ : state) benchmark::DoNotOptimize(classify(dataset, norm, bounds));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(dataset.row_count()));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMicrosecond);

void BM_TopK(benchmark::State& state) {
  const auto normalized = normalize(table(), stats());
  const TargetVector target{{{"YS", 400.0}, {"density", 2.6}, {"CSC", 0.3}, {"delta_T", 50.0}}};
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(top_k(normalized, stats(), target, k));
}
BENCHMARK(BM_TopK)->Arg(20)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_ForwardAndJacobian(benchmark::State& state) {
  const auto model = production_model();
  const auto center = composition_center(table(), model.input_names);
  const std::span<const double> x(center.data(), 12);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(model, x));
}
BENCHMARK(BM_ForwardAndJacobian)->Unit(benchmark::kMicrosecond);

void BM_SensitivityCurve(benchmark::State& state) {
  const auto model = production_model();
  const auto center = composition_center(table(), model.input_names);
  const std::span<const double> x(center.data(), 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sensitivity_curve(model, x, "Si", {0.0, 13.0}, 51));
  }
}
BENCHMARK(BM_SensitivityCurve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
