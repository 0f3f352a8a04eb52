#include "tnn/fixtures.hpp"

#include <cmath>
#include <random>

namespace tnn {

namespace {

class UniformSource {
 public:
  explicit UniformSource(std::uint32_t seed) : rng_(seed) {}
  float operator()(float lo, float hi) {
    const double unit = static_cast<double>(rng_() >> 8) * 0x1.0p-24;
    return static_cast<float>(lo + (static_cast<double>(hi) - lo) * unit);
  }

 private:
  std::mt19937 rng_;
};

}  // namespace

Graph can_autoencoder_graph() {
  return infer_shapes(Graph("can_autoencoder", TensorShape{24, 20},
                            {DenseSpec{20, Activation::kLinear}, LstmSpec{18, true},
                             LstmSpec{18, true}, DenseSpec{20, Activation::kLinear}}));
}

Graph battery_cnn_lstm_graph() {
  return infer_shapes(Graph("battery_cnn_lstm", TensorShape{20, 4},
                            {Conv1DSpec{32, 4, 1, Activation::kRelu}, BatchNormSpec{1e-3f},
                             MaxPool1DSpec{2, 2}, LstmSpec{32, false},
                             DenseSpec{1, Activation::kLinear}}));
}

WeightStore random_weights(const Graph& graph, std::uint32_t seed) {
  UniformSource draw(seed);
  WeightStore store;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (const WeightSlot& slot : weight_slots(graph, i)) {
      std::vector<float> v(slot.element_count());
      float lo = -0.1f, hi = 0.1f;
      switch (slot.role) {
        case WeightRole::kKernel:
        case WeightRole::kRecurrent: {
          const std::size_t fan_out = slot.shape[0];
          const std::size_t fan_in = slot.element_count() / fan_out;
          hi = static_cast<float>(std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)));
          lo = -hi;
          break;
        }
        case WeightRole::kGamma: lo = 0.8f; hi = 1.2f; break;
        case WeightRole::kMovingVariance: lo = 0.5f; hi = 1.5f; break;
        default: break;
      }
      for (float& x : v) x = draw(lo, hi);
      store.set(i, slot.role, std::move(v));
    }
  }
  return store;
}

Model make_can_autoencoder(std::uint32_t seed) {
  Graph g = can_autoencoder_graph();
  WeightStore w = random_weights(g, seed);
  return {std::move(g), std::move(w)};
}

Model make_battery_cnn_lstm(std::uint32_t seed) {
  Graph g = battery_cnn_lstm_graph();
  WeightStore w = random_weights(g, seed);
  return {std::move(g), std::move(w)};
}

}  // namespace tnn
