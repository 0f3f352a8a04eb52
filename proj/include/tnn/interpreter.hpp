#pragma once

#include <span>
#include <vector>

#include "tnn/graph.hpp"

namespace tnn {

// Row-major binary32 values; rank-2 tensors are [timesteps, features].
struct Tensor {
  TensorShape shape;
  std::vector<float> values;

  Tensor() = default;
  Tensor(TensorShape s, std::vector<float> v);
  explicit Tensor(TensorShape s) : shape(std::move(s)), values(shape.element_count(), 0.0f) {}

  float at(std::size_t t, std::size_t f) const { return values[t * shape.features() + f]; }
};

// Scalar nonlinearities shared by every kernel. The C generator emits the
// same expressions so both sides round identically.
float apply_activation(Activation act, float x);
float sigmoid(float x);

// Naive reference kernels. Every dot product starts from the bias and adds
// products in ascending index order, in binary32.

// W is [units][in]; rank-2 input is processed per timestep.
Tensor run_dense(const Tensor& x, std::span<const float> kernel, std::span<const float> bias,
                 std::size_t units, Activation act);

// W is [filters][kernel][in_ch], valid padding.
Tensor run_conv1d(const Tensor& x, std::span<const float> kernel, std::span<const float> bias,
                  std::size_t filters, std::size_t kernel_size, std::size_t stride,
                  Activation act);

Tensor run_maxpool1d(const Tensor& x, std::size_t pool, std::size_t stride);

Tensor run_batchnorm(const Tensor& x, std::span<const float> gamma, std::span<const float> beta,
                     std::span<const float> mean, std::span<const float> variance, float epsilon);

// Gate blocks in W[4U][in], U_rec[4U][U] and b[4U] are ordered
// input, forget, cell candidate, output. h and c start at zero.
Tensor run_lstm(const Tensor& x, std::span<const float> kernel, std::span<const float> recurrent,
                std::span<const float> bias, std::size_t units, bool return_sequences);

Tensor run_layer(const Graph& graph, const WeightStore& weights, std::size_t i, const Tensor& x);

Tensor forward(const Graph& graph, const WeightStore& weights, const Tensor& x);

}  // namespace tnn
