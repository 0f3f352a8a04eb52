#pragma once

#include <cstdint>

#include "tnn/model_format.hpp"

namespace tnn {

// Intrusion-detection autoencoder: [24,20] -> Dense(20) -> LSTM(18, seq)
// -> LSTM(18, seq) -> Dense(20).
Graph can_autoencoder_graph();

// Capacity regressor: [20,4] -> Conv1D(32, k=4, relu) -> BatchNorm
// -> MaxPool1D(2, 2) -> LSTM(32) -> Dense(1).
Graph battery_cnn_lstm_graph();

// Seeded Glorot-uniform kernels, small biases, and well-conditioned batchnorm
// statistics. Stands in for trained weights.
WeightStore random_weights(const Graph& graph, std::uint32_t seed);

inline constexpr std::uint32_t kFixtureSeed = 2021;

Model make_can_autoencoder(std::uint32_t seed = kFixtureSeed);
Model make_battery_cnn_lstm(std::uint32_t seed = kFixtureSeed);

}  // namespace tnn
