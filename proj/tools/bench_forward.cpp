// Serial vs OpenMP batch inference on the two case-study models.

#include <benchmark/benchmark.h>

#include "tnn/batch.hpp"
#include "tnn/fixtures.hpp"
#include "tnn/validator.hpp"

namespace {

const tnn::Model& model(int which) {
  static const tnn::Model ae = tnn::make_can_autoencoder();
  static const tnn::Model cnn = tnn::make_battery_cnn_lstm();
  return which == 0 ? ae : cnn;
}

template <bool Parallel>
void BM_Forward(benchmark::State& state) {
  const tnn::Model& m = model(static_cast<int>(state.range(0)));
  const auto n = static_cast<std::uint32_t>(state.range(1));
  const tnn::VectorFile in = tnn::generate_vectors(m.graph, n, 1);
  for (auto _ : state) {
    auto out = Parallel ? tnn::forward_batch_parallel(m.graph, m.weights, in.values)
                        : tnn::forward_batch_serial(m.graph, m.weights, in.values);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * n);
  state.SetLabel(state.range(0) == 0 ? "can_autoencoder" : "battery_cnn_lstm");
}

}  // namespace

BENCHMARK(BM_Forward<false>)->Name("serial")->ArgsProduct({{0, 1}, {64, 512}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Forward<true>)
    ->Name("parallel")
    ->ArgsProduct({{0, 1}, {64, 512}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
