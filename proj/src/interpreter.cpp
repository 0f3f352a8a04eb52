#include "tnn/interpreter.hpp"

#include <cmath>
#include <string>

#include "tnn/error.hpp"

namespace tnn {

namespace {

void expect_size(std::span<const float> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw Error(ErrorCode::kShapeMismatch, std::string(what) + " has " + std::to_string(v.size()) +
                                               " values, expected " + std::to_string(n));
  }
}

void expect_rank2(const Tensor& x, const char* op) {
  if (x.shape.rank() != 2) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(op) + " needs a [timesteps, features] input, got " + x.shape.to_string());
  }
}

}  // namespace

Tensor::Tensor(TensorShape s, std::vector<float> v) : shape(std::move(s)), values(std::move(v)) {
  if (values.size() != shape.element_count()) {
    throw Error(ErrorCode::kShapeMismatch, "tensor of shape " + shape.to_string() + " given " +
                                               std::to_string(values.size()) + " values");
  }
}

float sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

float apply_activation(Activation act, float x) {
  switch (act) {
    case Activation::kLinear: return x;
    case Activation::kRelu: return x > 0.0f ? x : 0.0f;
    case Activation::kTanh: return std::tanh(x);
    case Activation::kSigmoid: return sigmoid(x);
  }
  return x;
}

Tensor run_dense(const Tensor& x, std::span<const float> kernel, std::span<const float> bias,
                 std::size_t units, Activation act) {
  const std::size_t steps = x.shape.timesteps();
  const std::size_t in = x.shape.features();
  expect_size(kernel, units * in, "dense kernel");
  expect_size(bias, units, "dense bias");
  Tensor y(x.shape.rank() == 2 ? TensorShape{steps, units} : TensorShape{units});
  for (std::size_t t = 0; t < steps; ++t) {
    const float* row = x.values.data() + t * in;
    for (std::size_t o = 0; o < units; ++o) {
      float acc = bias[o];
      for (std::size_t i = 0; i < in; ++i) acc += kernel[o * in + i] * row[i];
      y.values[t * units + o] = apply_activation(act, acc);
    }
  }
  return y;
}

Tensor run_conv1d(const Tensor& x, std::span<const float> kernel, std::span<const float> bias,
                  std::size_t filters, std::size_t kernel_size, std::size_t stride,
                  Activation act) {
  expect_rank2(x, "conv1d");
  const std::size_t steps = x.shape[0];
  const std::size_t channels = x.shape[1];
  if (kernel_size < 1 || stride < 1 || kernel_size > steps) {
    throw Error(ErrorCode::kShapeMismatch, "conv1d kernel " + std::to_string(kernel_size) +
                                               " does not fit input " + x.shape.to_string());
  }
  expect_size(kernel, filters * kernel_size * channels, "conv1d kernel");
  expect_size(bias, filters, "conv1d bias");
  const std::size_t out_steps = (steps - kernel_size) / stride + 1;
  Tensor y(TensorShape{out_steps, filters});
  for (std::size_t t = 0; t < out_steps; ++t) {
    for (std::size_t f = 0; f < filters; ++f) {
      float acc = bias[f];
      for (std::size_t k = 0; k < kernel_size; ++k) {
        for (std::size_t c = 0; c < channels; ++c) {
          acc += kernel[(f * kernel_size + k) * channels + c] *
                 x.values[(t * stride + k) * channels + c];
        }
      }
      y.values[t * filters + f] = apply_activation(act, acc);
    }
  }
  return y;
}

Tensor run_maxpool1d(const Tensor& x, std::size_t pool, std::size_t stride) {
  expect_rank2(x, "maxpool1d");
  const std::size_t steps = x.shape[0];
  const std::size_t channels = x.shape[1];
  if (pool < 1 || stride < 1 || pool > steps) {
    throw Error(ErrorCode::kShapeMismatch,
                "pool " + std::to_string(pool) + " does not fit input " + x.shape.to_string());
  }
  const std::size_t out_steps = (steps - pool) / stride + 1;
  Tensor y(TensorShape{out_steps, channels});
  for (std::size_t t = 0; t < out_steps; ++t) {
    for (std::size_t c = 0; c < channels; ++c) {
      float m = x.values[t * stride * channels + c];
      for (std::size_t k = 1; k < pool; ++k) {
        const float v = x.values[(t * stride + k) * channels + c];
        if (v > m) m = v;
      }
      y.values[t * channels + c] = m;
    }
  }
  return y;
}

Tensor run_batchnorm(const Tensor& x, std::span<const float> gamma, std::span<const float> beta,
                     std::span<const float> mean, std::span<const float> variance, float epsilon) {
  const std::size_t channels = x.shape.features();
  expect_size(gamma, channels, "batchnorm gamma");
  expect_size(beta, channels, "batchnorm beta");
  expect_size(mean, channels, "batchnorm mean");
  expect_size(variance, channels, "batchnorm variance");
  for (float v : variance) {
    if (v < 0.0f) throw Error(ErrorCode::kNegativeVariance, "batchnorm variance below zero");
  }
  Tensor y(x.shape);
  for (std::size_t t = 0; t < x.shape.timesteps(); ++t) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t idx = t * channels + c;
      y.values[idx] = gamma[c] * (x.values[idx] - mean[c]) / std::sqrt(variance[c] + epsilon) + beta[c];
    }
  }
  return y;
}

Tensor run_lstm(const Tensor& x, std::span<const float> kernel, std::span<const float> recurrent,
                std::span<const float> bias, std::size_t units, bool return_sequences) {
  expect_rank2(x, "lstm");
  const std::size_t steps = x.shape[0];
  const std::size_t in = x.shape[1];
  const std::size_t rows = 4 * units;
  expect_size(kernel, rows * in, "lstm kernel");
  expect_size(recurrent, rows * units, "lstm recurrent kernel");
  expect_size(bias, rows, "lstm bias");

  std::vector<float> h(units, 0.0f);
  std::vector<float> c(units, 0.0f);
  std::vector<float> gates(rows);
  Tensor y(return_sequences ? TensorShape{steps, units} : TensorShape{units});

  for (std::size_t t = 0; t < steps; ++t) {
    const float* xt = x.values.data() + t * in;
    for (std::size_t r = 0; r < rows; ++r) {
      float acc = bias[r];
      for (std::size_t i = 0; i < in; ++i) acc += kernel[r * in + i] * xt[i];
      for (std::size_t j = 0; j < units; ++j) acc += recurrent[r * units + j] * h[j];
      gates[r] = acc;
    }
    for (std::size_t j = 0; j < units; ++j) {
      const float ig = sigmoid(gates[j]);
      const float fg = sigmoid(gates[units + j]);
      const float gg = std::tanh(gates[2 * units + j]);
      const float og = sigmoid(gates[3 * units + j]);
      c[j] = fg * c[j] + ig * gg;
      h[j] = og * std::tanh(c[j]);
    }
    if (return_sequences) {
      std::copy(h.begin(), h.end(), y.values.begin() + static_cast<std::ptrdiff_t>(t * units));
    }
  }
  if (!return_sequences) y.values = h;
  return y;
}

Tensor run_layer(const Graph& graph, const WeightStore& w, std::size_t i, const Tensor& x) {
  const LayerSpec& spec = graph.layers().at(i);
  if (auto* d = std::get_if<DenseSpec>(&spec)) {
    return run_dense(x, w.get(i, WeightRole::kKernel), w.get(i, WeightRole::kBias), d->units,
                     d->activation);
  }
  if (auto* c = std::get_if<Conv1DSpec>(&spec)) {
    return run_conv1d(x, w.get(i, WeightRole::kKernel), w.get(i, WeightRole::kBias), c->filters,
                      c->kernel, c->stride, c->activation);
  }
  if (auto* p = std::get_if<MaxPool1DSpec>(&spec)) return run_maxpool1d(x, p->pool, p->stride);
  if (auto* b = std::get_if<BatchNormSpec>(&spec)) {
    return run_batchnorm(x, w.get(i, WeightRole::kGamma), w.get(i, WeightRole::kBeta),
                         w.get(i, WeightRole::kMovingMean), w.get(i, WeightRole::kMovingVariance),
                         b->epsilon);
  }
  const auto& l = std::get<LstmSpec>(spec);
  return run_lstm(x, w.get(i, WeightRole::kKernel), w.get(i, WeightRole::kRecurrent),
                  w.get(i, WeightRole::kBias), l.units, l.return_sequences);
}

Tensor forward(const Graph& graph, const WeightStore& weights, const Tensor& x) {
  if (!graph.resolved()) throw Error(ErrorCode::kInvalidArgument, "graph shapes are not resolved");
  if (x.shape != graph.input_shape()) {
    throw Error(ErrorCode::kShapeMismatch, "input " + x.shape.to_string() + " does not match graph input " +
                                               graph.input_shape().to_string());
  }
  Tensor act = x;
  for (std::size_t i = 0; i < graph.size(); ++i) act = run_layer(graph, weights, i, act);
  return act;
}

}  // namespace tnn
