#pragma once

#include <span>
#include <vector>

#include "tnn/graph.hpp"

namespace tnn {

// Runs `forward` on each of `inputs.size() / IN_SIZE` vectors and returns the
// concatenated outputs. The serial version is the reference; the parallel one
// splits vectors across OpenMP threads and must agree with it bit for bit.
std::vector<float> forward_batch_serial(const Graph& graph, const WeightStore& weights,
                                        std::span<const float> inputs);
std::vector<float> forward_batch_parallel(const Graph& graph, const WeightStore& weights,
                                          std::span<const float> inputs);

int parallel_threads();

}  // namespace tnn
