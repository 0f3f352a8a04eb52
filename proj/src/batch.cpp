#include "tnn/batch.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <exception>

#include "tnn/error.hpp"
#include "tnn/interpreter.hpp"

namespace tnn {

namespace {

std::size_t vector_count(const Graph& graph, std::span<const float> inputs) {
  const std::size_t in = graph.input_shape().element_count();
  if (inputs.size() % in != 0) {
    throw Error(ErrorCode::kShapeMismatch, "batch length is not a multiple of input size " +
                                               std::to_string(in));
  }
  return inputs.size() / in;
}

void run_one(const Graph& graph, const WeightStore& weights, std::span<const float> inputs,
             std::size_t v, std::span<float> outputs) {
  const std::size_t in = graph.input_shape().element_count();
  const std::size_t out = graph.output_shape().element_count();
  const auto x = inputs.subspan(v * in, in);
  const Tensor y = forward(graph, weights, Tensor(graph.input_shape(), {x.begin(), x.end()}));
  std::copy(y.values.begin(), y.values.end(), outputs.begin() + static_cast<std::ptrdiff_t>(v * out));
}

}  // namespace

std::vector<float> forward_batch_serial(const Graph& graph, const WeightStore& weights,
                                        std::span<const float> inputs) {
  const std::size_t n = vector_count(graph, inputs);
  std::vector<float> outputs(n * graph.output_shape().element_count());
  for (std::size_t v = 0; v < n; ++v) run_one(graph, weights, inputs, v, outputs);
  return outputs;
}

std::vector<float> forward_batch_parallel(const Graph& graph, const WeightStore& weights,
                                          std::span<const float> inputs) {
  const std::size_t n = vector_count(graph, inputs);
  std::vector<float> outputs(n * graph.output_shape().element_count());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t v = 0; v < count; ++v) {
    try {
      run_one(graph, weights, inputs, static_cast<std::size_t>(v), outputs);
    } catch (...) {
#pragma omp critical(tnn_batch_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return outputs;
}

int parallel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace tnn
